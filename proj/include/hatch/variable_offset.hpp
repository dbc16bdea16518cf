// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/geometry.hpp"
#include "hatch/halftone.hpp"
#include "hatch/model_io.hpp"
#include "hatch/polygon_set.hpp"
#include "hatch/slicing.hpp"

#include <functional>
#include <optional>

namespace hatch {

enum class PointProvenance : std::uint8_t {
    resampled_segment,
    displaced_vertex,
    bevel_inserted,
};

struct DisplacedPolygon {
    Loop points;
    std::vector<PointProvenance> provenance; // same size as points
};

// Sampling and corner configuration for the variable offset.
struct OffsetField {
    double sample_interval_mm = 0.1;
    double bevel_ratio = 1.1;      // > 1
    double static_offset_mm = 0.1; // outward inflation applied to every outline
};

enum class LayerColor { black, white };

struct ViewingMode {
    bool perpendicular = true;
    double alpha = 0.0; // used when !perpendicular

    static ViewingMode perp() { return {}; }
    static ViewingMode fixed(double alpha_radians) { return {false, alpha_radians}; }
};

struct OffsetDiagnostics {
    int solver_fallbacks = 0; // points where the solver failed; offset 0 used
    int clamped_targets = 0;  // points where the tone saturated the model
    std::vector<std::string> warnings;
};

// Signed halftone displacement (without the static offset) for a surface
// point; positive values move the outline outward.
using DisplacementFn = std::function<double(const Vec2d& uv, const Vec3d& face_normal)>;

// Subdivides each edge uniformly so consecutive points are at most
// `interval_mm` apart; original vertices are preserved.
Loop resample(const Loop& loop, double interval_mm);

// Corner displacement that projects to d_ba along the outward normal of
// side BA and to d_bc along the outward normal of side BC. Collinear
// corners fall back to a plain perpendicular displacement of the mean.
Vec2d displace_vertex(const Vec2d& b, const Vec2d& a, const Vec2d& c, double d_ba, double d_bc);

// Distances along the two sides whose sample points the displaced corner
// bypasses; non-positive projections omit nothing.
struct CornerOmission {
    double along_ba = 0.0;
    double along_bc = 0.0;
};
CornerOmission shortcut_corner(const Vec2d& b, const Vec2d& a, const Vec2d& c, const Vec2d& corner_displacement);

// Replaces a spiking corner with two points at b * d along each side's
// outward normal when the corner displacement exceeds both bevel distances
// strictly; ties keep the corner.
struct BevelResult {
    bool beveled = false;
    Vec2d point_ba, point_bc; // populated when beveled
};
BevelResult bevel_corner(const Vec2d& b, const Vec2d& a, const Vec2d& c, const Vec2d& corner_displacement,
                         double d_ba, double d_bc, double bevel_ratio);

// Boundary of the winding >= 1 region of the input loops.
inline Loops clip_positive_winding(const Loops& loops)
{
    return geom::keep_positive_winding(loops);
}

// True when any two segments of the loop set touch or cross away from the
// shared endpoints of consecutive segments.
bool loops_self_intersect(const Loops& loops);

// Core offset: resamples each polygon, displaces samples perpendicular to
// their edge and vertices by the two-sided corner rule, applies shortcut and
// bevel corners, and removes self-intersections with the positive-winding
// fill. `field_fn` supplies the signed displacement (static offset added on
// top).
std::vector<DisplacedPolygon> displace_outline(const std::vector<OutlinePolygon>& polygons,
                                               const DisplacementFn& field_fn, const OffsetField& field,
                                               OffsetDiagnostics* diag = nullptr);

// Texture-driven offset for one layer of the given color.
std::vector<DisplacedPolygon> apply_variable_offset(const LayerOutline& outline, const GrayTexture& tex,
                                                    const halftone::Params<double>& params, LayerColor color,
                                                    const OffsetField& field, const ViewingMode& viewing,
                                                    OffsetDiagnostics* diag = nullptr);

// Largest |displacement| (without the static offset) that the tone solver
// can emit at the given surface angle; used for output validation.
double max_halftone_displacement(double sin_n, double cos_n, const halftone::Params<double>& params);

} // namespace hatch
