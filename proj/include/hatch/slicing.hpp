// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/geometry.hpp"
#include "hatch/model_io.hpp"

namespace hatch {

// One triangle/plane intersection, directed so that material lies to the
// left (outer loops come out counter-clockwise).
struct SlicedSegment {
    Vec2d p0, p1;   // mm
    Vec2d uv0, uv1; // texture coordinates interpolated on the source face
    Vec3d face_normal;
};

// Attributes of one outline edge, taken from the face that produced it.
// Edge i runs from point i to point (i+1) % n; uv_start/uv_end are the
// texture coordinates at its two endpoints on that face.
struct OutlineEdge {
    Vec2d uv_start, uv_end;
    Vec3d normal;
};

struct OutlinePolygon {
    Loop points;                    // um; no repeated terminal point
    std::vector<OutlineEdge> edges; // edges.size() == points.size()
};

struct LayerOutline {
    double z = 0.0; // slice plane height, mm
    std::vector<OutlinePolygon> polygons;
};

// (sin n, cos n) of the angle between a unit normal and the horizontal
// plane: sin n = |n_z|, cos n = sqrt(n_x^2 + n_y^2).
std::pair<double, double> normal_components(const Vec3d& face_normal);

// Chains segments of one plane into closed loops; endpoints within
// `tolerance_mm` are merged, exact matches preferred. Throws input_error
// when an open chain remains.
std::vector<OutlinePolygon> stitch(const std::vector<SlicedSegment>& segments, double tolerance_mm = 1e-4);

// Cross-sections at z = (k + 0.5) * layer_thickness for every plane inside
// the mesh's z range. `threads` <= 1 slices sequentially.
std::vector<LayerOutline> slice_mesh(const TexturedMesh& mesh, double layer_thickness, int threads = 1,
                                     double stitch_tolerance_mm = 1e-4);

} // namespace hatch
