// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/geometry.hpp"

namespace hatch {

std::int64_t doubled_signed_area_um2(const Loop& loop)
{
    std::int64_t acc = 0;
    const size_t n = loop.size();
    for (size_t i = 0; i < n; ++i) {
        const PointUm& a = loop[i];
        const PointUm& b = loop[(i + 1) % n];
        acc += static_cast<std::int64_t>(a.x()) * b.y() - static_cast<std::int64_t>(b.x()) * a.y();
    }
    return acc;
}

double signed_area_mm2(const Loop& loop)
{
    return static_cast<double>(doubled_signed_area_um2(loop)) * 0.5e-6;
}

double signed_area_mm2(const Loops& loops)
{
    double acc = 0.0;
    for (const Loop& l : loops)
        acc += signed_area_mm2(l);
    return acc;
}

double perimeter_mm(const Loop& loop)
{
    double acc = 0.0;
    const size_t n = loop.size();
    for (size_t i = 0; i < n; ++i) {
        const PointUm d = loop[(i + 1) % n] - loop[i];
        acc += std::hypot(static_cast<double>(d.x()), static_cast<double>(d.y()));
    }
    return acc * 1e-3;
}

int winding_number(const Loop& loop, const PointUm& p)
{
    // Standard crossing count against a +x ray, exact in 64-bit arithmetic.
    int winding = 0;
    const size_t n = loop.size();
    for (size_t i = 0; i < n; ++i) {
        const PointUm& a = loop[i];
        const PointUm& b = loop[(i + 1) % n];
        if (a.y() <= p.y()) {
            if (b.y() > p.y()) {
                const std::int64_t cross = static_cast<std::int64_t>(b.x() - a.x()) * (p.y() - a.y())
                                         - static_cast<std::int64_t>(p.x() - a.x()) * (b.y() - a.y());
                if (cross > 0)
                    ++winding;
            }
        } else if (b.y() <= p.y()) {
            const std::int64_t cross = static_cast<std::int64_t>(b.x() - a.x()) * (p.y() - a.y())
                                     - static_cast<std::int64_t>(p.x() - a.x()) * (b.y() - a.y());
            if (cross < 0)
                --winding;
        }
    }
    return winding;
}

int winding_number(const Loops& loops, const PointUm& p)
{
    int acc = 0;
    for (const Loop& l : loops)
        acc += winding_number(l, p);
    return acc;
}

bool loop_contains(const Loop& loop, const PointUm& p)
{
    return winding_number(loop, p) != 0;
}

void Box2Um::expand(const PointUm& p)
{
    min.x() = std::min(min.x(), p.x());
    min.y() = std::min(min.y(), p.y());
    max.x() = std::max(max.x(), p.x());
    max.y() = std::max(max.y(), p.y());
}

Box2Um bounding_box(const Loops& loops)
{
    Box2Um box;
    for (const Loop& l : loops)
        for (const PointUm& p : l)
            box.expand(p);
    return box;
}

} // namespace hatch
