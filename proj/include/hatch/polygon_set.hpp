// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/geometry.hpp"

namespace hatch::geom {

// Keeps the region where the winding number of the directed input loops is
// >= 1 and returns its boundary: outer loops counter-clockwise, holes
// clockwise, no self-intersections, no repeated terminal point.
Loops keep_positive_winding(const Loops& loops);

// Boolean operations on already-clean regions (outer CCW, holes CW).
Loops unite(const Loops& a, const Loops& b);
Loops intersect(const Loops& a, const Loops& b);
Loops subtract(const Loops& a, const Loops& b);

// Intersection of several regions; returns empty when the list is empty.
Loops intersect_all(const std::vector<Loops>& regions);

} // namespace hatch::geom
