// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/polygon_set.hpp"

#include <boost/polygon/polygon.hpp>

namespace hatch::geom {

namespace bp = boost::polygon;
using BpPoint = bp::point_data<coord_t>;
using BpPolygon = bp::polygon_with_holes_data<coord_t>;
using BpSet = bp::polygon_set_data<coord_t>;

namespace {

// Inserts loops as directed edge sequences. Forcing COUNTERCLOCKWISE keeps
// the stated orientation intact, so the sweep sees true winding counts;
// polygon_set_data::insert(polygon) would re-orient by signed area instead.
BpSet make_set(const Loops& loops)
{
    BpSet set;
    std::vector<BpPoint> pts;
    for (const Loop& loop : loops) {
        if (loop.size() < 3)
            continue;
        pts.clear();
        pts.reserve(loop.size());
        for (const PointUm& p : loop)
            pts.emplace_back(p.x(), p.y());
        set.insert_vertex_sequence(pts.begin(), pts.end(), bp::COUNTERCLOCKWISE, false);
    }
    return set;
}

Loops extract(const BpSet& set)
{
    std::vector<BpPolygon> polys;
    set.get(polys);
    Loops out;
    for (const BpPolygon& poly : polys) {
        Loop outer;
        for (auto it = poly.begin(); it != poly.end(); ++it)
            outer.emplace_back(it->x(), it->y());
        // polygon_set_data repeats the first vertex at the end
        if (outer.size() > 1 && outer.front() == outer.back())
            outer.pop_back();
        if (outer.size() >= 3)
            out.push_back(std::move(outer));
        for (auto h = poly.begin_holes(); h != poly.end_holes(); ++h) {
            Loop hole;
            for (auto it = h->begin(); it != h->end(); ++it)
                hole.emplace_back(it->x(), it->y());
            if (hole.size() > 1 && hole.front() == hole.back())
                hole.pop_back();
            if (hole.size() >= 3)
                out.push_back(std::move(hole));
        }
    }
    return out;
}

} // namespace

Loops keep_positive_winding(const Loops& loops)
{
    return extract(make_set(loops));
}

Loops unite(const Loops& a, const Loops& b)
{
    Loops merged = a;
    merged.insert(merged.end(), b.begin(), b.end());
    return keep_positive_winding(merged);
}

Loops intersect(const Loops& a, const Loops& b)
{
    BpSet sa = make_set(a);
    BpSet sb = make_set(b);
    using namespace boost::polygon::operators;
    return extract(sa & sb);
}

Loops subtract(const Loops& a, const Loops& b)
{
    BpSet sa = make_set(a);
    BpSet sb = make_set(b);
    using namespace boost::polygon::operators;
    return extract(sa - sb);
}

Loops intersect_all(const std::vector<Loops>& regions)
{
    if (regions.empty())
        return {};
    Loops acc = keep_positive_winding(regions.front());
    for (size_t i = 1; i < regions.size() && !acc.empty(); ++i)
        acc = intersect(acc, regions[i]);
    return acc;
}

} // namespace hatch::geom
