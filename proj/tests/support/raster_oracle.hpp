// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/geometry.hpp"

#include <algorithm>
#include <vector>

namespace oracle {

// Area of the winding >= 1 region of raw directed loops, measured by
// scanning rows spaced 1 um apart and accumulating the covered x extent of
// each row. Independent of any polygon clipping implementation.
inline double raster_positive_area_mm2(const hatch::Loops& loops)
{
    using hatch::coord_t;
    hatch::Box2Um box = hatch::bounding_box(loops);
    if (box.empty())
        return 0.0;
    double area_um2 = 0.0;
    struct Crossing {
        double x;
        int dir;
    };
    std::vector<Crossing> crossings;
    for (coord_t row = box.min.y(); row <= box.max.y(); ++row) {
        const double y = static_cast<double>(row) + 0.5; // row centre
        crossings.clear();
        for (const hatch::Loop& loop : loops) {
            const size_t n = loop.size();
            for (size_t i = 0; i < n; ++i) {
                const hatch::PointUm& a = loop[i];
                const hatch::PointUm& b = loop[(i + 1) % n];
                const double ay = a.y(), by = b.y();
                if ((ay <= y && by > y) || (by <= y && ay > y)) {
                    const double t = (y - ay) / (by - ay);
                    // a downward edge raises the winding of everything to its right
                    crossings.push_back({a.x() + (b.x() - a.x()) * t, by < ay ? 1 : -1});
                }
            }
        }
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& a, const Crossing& b) { return a.x < b.x; });
        int winding = 0;
        double span_start = 0.0;
        for (const Crossing& c : crossings) {
            const int prev = winding;
            winding += c.dir;
            if (prev <= 0 && winding > 0)
                span_start = c.x;
            else if (prev > 0 && winding <= 0)
                area_um2 += c.x - span_start;
        }
    }
    return area_um2 * 1e-6; // rows are 1 um tall
}

} // namespace oracle
