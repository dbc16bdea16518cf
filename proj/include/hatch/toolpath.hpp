// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/geometry.hpp"
#include "hatch/model_io.hpp"
#include "hatch/polygon_set.hpp"
#include "hatch/variable_offset.hpp"

#include <functional>

namespace hatch {

enum class PathRole : std::uint8_t { outer_wall, inner_wall, skin, infill, travel };

// One extrusion (or travel) polyline. Segment i runs from points[i] to
// points[i+1] (wrapping when closed); width 0 marks a travel segment.
struct PrintPath {
    std::vector<Vec2d> points; // mm
    std::vector<double> width; // mm per segment
    std::vector<double> speed; // mm/s per segment
    PathRole role = PathRole::travel;
    int extruder = 0;
    bool closed = false;

    size_t segment_count() const { return points.empty() ? 0 : (closed ? points.size() : points.size() - 1); }
};

// Constant-volume extrusion: per-segment speed = flow / cross_section_area.
struct FlowModel {
    double flow_mm3_per_s = 0.875; // reference_speed * reference_width * layer_thickness
    double layer_thickness = 0.1;

    static FlowModel from_reference(double speed, double width, double layer_thickness)
    {
        return FlowModel{speed * width * layer_thickness, layer_thickness};
    }
};

// Deposited cross-section: a rectangle with semicircular ends, degrading to
// a circle for beads narrower than the layer.
double cross_section_area(double width, double layer_thickness);

struct WallSet {
    std::vector<Loops> walls; // walls[0] = outer wall centrelines, then inward
    Loops inner_region;       // area left inside the innermost wall
};

// Contour walls: the outer wall is the region inset by half a line width,
// each further wall a full line width deeper. Vanishing walls are dropped.
WallSet generate_walls(const Loops& region, double line_width, int wall_count);

struct SkinRegions {
    Loops skin;
    Loops infill;
};

// Splits each layer's inner region into near-surface skin (not covered by
// all of the neighbouring layers above or below) and interior infill.
// Layers are independent; `threads` > 1 processes them in parallel.
std::vector<SkinRegions> compute_skin_regions(const std::vector<Loops>& inner_regions, int top_layers,
                                              int bottom_layers, int threads = 1);

struct SkinLine {
    Vec2d a, b; // mm
};

// Parallel scanlines across the region, spacing `line_distance`, rotated by
// `angle`. The first line sits half a spacing above the rotated bounding
// box's lower edge; output order is scanline-major, then by position.
std::vector<SkinLine> fill_skin(const Loops& region, double line_distance, double angle_radians);

using UvMapFn = std::function<Vec2d(const Vec2d& xy)>;

struct HorizontalHatchConfig {
    double line_distance = 0.7;
    double sample_interval = 0.4;
    double width_floor_ratio = 0.02; // clamp floor as a fraction of line_distance
    double gamma = 2.2;
};

// Width-modulates skin lines from the texture: segment width is the local
// share of the line spacing that this layer's colour must leave to the
// layer below (dark layers print (1 - L) * spacing). Speed keeps the flow
// constant. Zero-width segments become travels.
std::vector<PrintPath> horizontal_hatch(const std::vector<SkinLine>& lines, const GrayTexture& tex,
                                        const UvMapFn& uv_map, const FlowModel& flow,
                                        const HorizontalHatchConfig& config, LayerColor color);

} // namespace hatch
