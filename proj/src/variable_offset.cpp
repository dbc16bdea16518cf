// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/variable_offset.hpp"

#include <algorithm>
#include <unordered_map>

namespace hatch {

namespace {

int subdivision_count(double length_mm, double interval_mm)
{
    if (length_mm <= interval_mm)
        return 1;
    return std::max(1, static_cast<int>(std::ceil(length_mm / interval_mm - 1e-12)));
}

Vec2d outward_normal(const Vec2d& from, const Vec2d& to)
{
    Vec2d dir = to - from;
    const double len = dir.norm();
    if (len <= 0.0)
        return Vec2d::Zero();
    dir /= len;
    return Vec2d(dir.y(), -dir.x()); // material on the left of the edge
}

std::int64_t cross64(const PointUm& o, const PointUm& a, const PointUm& b)
{
    return static_cast<std::int64_t>(a.x() - o.x()) * (b.y() - o.y())
         - static_cast<std::int64_t>(a.y() - o.y()) * (b.x() - o.x());
}

bool on_segment(const PointUm& a, const PointUm& b, const PointUm& p)
{
    return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x())
        && std::min(a.y(), b.y()) <= p.y() && p.y() <= std::max(a.y(), b.y());
}

bool segments_touch(const PointUm& a, const PointUm& b, const PointUm& c, const PointUm& d)
{
    const std::int64_t d1 = cross64(c, d, a);
    const std::int64_t d2 = cross64(c, d, b);
    const std::int64_t d3 = cross64(a, b, c);
    const std::int64_t d4 = cross64(a, b, d);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0)))
        return true;
    if (d1 == 0 && on_segment(c, d, a))
        return true;
    if (d2 == 0 && on_segment(c, d, b))
        return true;
    if (d3 == 0 && on_segment(a, b, c))
        return true;
    if (d4 == 0 && on_segment(a, b, d))
        return true;
    return false;
}

struct SegmentRef {
    PointUm a, b;
    int loop;
    int index; // position within the loop
    coord_t min_x, max_x;
};

} // namespace

bool loops_self_intersect(const Loops& loops)
{
    std::vector<SegmentRef> segs;
    for (size_t li = 0; li < loops.size(); ++li) {
        const Loop& loop = loops[li];
        const size_t n = loop.size();
        for (size_t i = 0; i < n; ++i) {
            SegmentRef s{loop[i], loop[(i + 1) % n], static_cast<int>(li), static_cast<int>(i), 0, 0};
            s.min_x = std::min(s.a.x(), s.b.x());
            s.max_x = std::max(s.a.x(), s.b.x());
            segs.push_back(s);
        }
    }
    std::sort(segs.begin(), segs.end(), [](const SegmentRef& a, const SegmentRef& b) { return a.min_x < b.min_x; });
    for (size_t i = 0; i < segs.size(); ++i) {
        for (size_t j = i + 1; j < segs.size(); ++j) {
            if (segs[j].min_x > segs[i].max_x)
                break;
            const SegmentRef& s = segs[i];
            const SegmentRef& t = segs[j];
            if (s.loop == t.loop) {
                const int n = static_cast<int>(loops[s.loop].size());
                const int gap = std::abs(s.index - t.index);
                if (gap == 1 || gap == n - 1)
                    continue; // consecutive segments share a vertex by design
            }
            if (segments_touch(s.a, s.b, t.a, t.b))
                return true;
        }
    }
    return false;
}

Loop resample(const Loop& loop, double interval_mm)
{
    if (!(interval_mm > 0.0))
        throw input_error("resample interval must be > 0");
    Loop out;
    const size_t n = loop.size();
    out.reserve(n * 2);
    for (size_t i = 0; i < n; ++i) {
        const PointUm& a = loop[i];
        const PointUm& b = loop[(i + 1) % n];
        out.push_back(a);
        const Vec2d am = to_mm(a);
        const Vec2d bm = to_mm(b);
        const int parts = subdivision_count((bm - am).norm(), interval_mm);
        for (int j = 1; j < parts; ++j) {
            const double t = static_cast<double>(j) / parts;
            out.push_back(to_um(Vec2d(am + (bm - am) * t)));
        }
    }
    return out;
}

Vec2d displace_vertex(const Vec2d& b, const Vec2d& a, const Vec2d& c, double d_ba, double d_bc)
{
    const Vec2d ba = a - b;
    const Vec2d bc = c - b;
    const double det = ba.x() * bc.y() - ba.y() * bc.x();
    const double scale = ba.norm() * bc.norm();
    if (scale <= 0.0 || std::abs(det) <= 1e-9 * scale) {
        // straight-line limit: plain perpendicular displacement
        Vec2d normal = outward_normal(b, c);
        if (normal.isZero())
            normal = outward_normal(a, b);
        return normal * (0.5 * (d_ba + d_bc));
    }
    return (d_ba * ba.norm() * bc + d_bc * bc.norm() * ba) / det;
}

CornerOmission shortcut_corner(const Vec2d& b, const Vec2d& a, const Vec2d& c, const Vec2d& corner_displacement)
{
    CornerOmission om;
    const Vec2d ba = a - b;
    const Vec2d bc = c - b;
    if (ba.norm() > 0.0)
        om.along_ba = std::max(0.0, corner_displacement.dot(ba) / ba.norm());
    if (bc.norm() > 0.0)
        om.along_bc = std::max(0.0, corner_displacement.dot(bc) / bc.norm());
    return om;
}

BevelResult bevel_corner(const Vec2d& b, const Vec2d& a, const Vec2d& c, const Vec2d& corner_displacement,
                         double d_ba, double d_bc, double bevel_ratio)
{
    BevelResult result;
    const double mag = corner_displacement.norm();
    if (!(mag > bevel_ratio * std::abs(d_ba)) || !(mag > bevel_ratio * std::abs(d_bc)))
        return result;
    const Vec2d n_ba = outward_normal(a, b); // side BA runs a -> b along the loop
    const Vec2d n_bc = outward_normal(b, c);
    if (n_ba.isZero() || n_bc.isZero())
        return result;
    result.beveled = true;
    result.point_ba = b + n_ba * (bevel_ratio * d_ba);
    result.point_bc = b + n_bc * (bevel_ratio * d_bc);
    return result;
}

namespace {

struct PointHash {
    size_t operator()(const PointUm& p) const
    {
        const std::uint64_t v = (static_cast<std::uint64_t>(static_cast<std::uint32_t>(p.x())) << 32)
                              | static_cast<std::uint32_t>(p.y());
        return std::hash<std::uint64_t>()(v);
    }
};

struct PointEq {
    bool operator()(const PointUm& a, const PointUm& b) const { return a.x() == b.x() && a.y() == b.y(); }
};

} // namespace

std::vector<DisplacedPolygon> displace_outline(const std::vector<OutlinePolygon>& polygons,
                                               const DisplacementFn& field_fn, const OffsetField& field,
                                               OffsetDiagnostics* diag)
{
    (void)diag; // fallbacks and clamps are counted by the texture-driven wrapper
    if (!(field.bevel_ratio > 1.0))
        throw input_error("bevel ratio must be > 1");
    if (!(field.sample_interval_mm > 0.0))
        throw input_error("sample interval must be > 0");

    std::vector<DisplacedPolygon> displaced;
    std::vector<std::int64_t> source_area_sign;
    for (const OutlinePolygon& poly : polygons) {
        const size_t n = poly.points.size();
        if (n < 3)
            continue;
        DisplacedPolygon out;

        // per-vertex displacement on each adjacent side
        std::vector<double> d_incoming(n), d_outgoing(n); // at vertex i: side (i-1..i) and side (i..i+1)
        for (size_t i = 0; i < n; ++i) {
            const size_t prev = (i + n - 1) % n;
            d_incoming[i] = field.static_offset_mm + field_fn(poly.edges[prev].uv_end, poly.edges[prev].normal);
            d_outgoing[i] = field.static_offset_mm + field_fn(poly.edges[i].uv_start, poly.edges[i].normal);
        }

        std::vector<double> omit_head(n, 0.0); // along edge i, measured from vertex i
        std::vector<double> omit_tail(n, 0.0); // along edge i, measured from vertex i+1
        struct VertexOut {
            std::vector<Vec2d> points;
            std::vector<PointProvenance> tags;
        };
        std::vector<VertexOut> vertex_out(n);

        for (size_t i = 0; i < n; ++i) {
            const Vec2d b = to_mm(poly.points[i]);
            const Vec2d a = to_mm(poly.points[(i + n - 1) % n]);
            const Vec2d c = to_mm(poly.points[(i + 1) % n]);
            const Vec2d delta_b = displace_vertex(b, a, c, d_incoming[i], d_outgoing[i]);
            const CornerOmission om = shortcut_corner(b, a, c, delta_b);
            omit_tail[(i + n - 1) % n] = om.along_ba;
            omit_head[i] = om.along_bc;
            const BevelResult bevel = bevel_corner(b, a, c, delta_b, d_incoming[i], d_outgoing[i], field.bevel_ratio);
            if (bevel.beveled) {
                vertex_out[i].points = {bevel.point_ba, bevel.point_bc};
                vertex_out[i].tags = {PointProvenance::bevel_inserted, PointProvenance::bevel_inserted};
            } else {
                vertex_out[i].points = {b + delta_b};
                vertex_out[i].tags = {PointProvenance::displaced_vertex};
            }
        }

        for (size_t i = 0; i < n; ++i) {
            for (size_t k = 0; k < vertex_out[i].points.size(); ++k) {
                out.points.push_back(to_um(vertex_out[i].points[k]));
                out.provenance.push_back(vertex_out[i].tags[k]);
            }
            const Vec2d a = to_mm(poly.points[i]);
            const Vec2d b = to_mm(poly.points[(i + 1) % n]);
            const double len = (b - a).norm();
            if (len <= 0.0)
                continue;
            const Vec2d normal = outward_normal(a, b);
            const int parts = subdivision_count(len, field.sample_interval_mm);
            for (int j = 1; j < parts; ++j) {
                const double t = static_cast<double>(j) / parts;
                const double s = t * len;
                if (s <= omit_head[i] || len - s <= omit_tail[i])
                    continue; // bypassed by a shortcut corner
                const Vec2d uv = poly.edges[i].uv_start + (poly.edges[i].uv_end - poly.edges[i].uv_start) * t;
                const double disp = field.static_offset_mm + field_fn(uv, poly.edges[i].normal);
                out.points.push_back(to_um(Vec2d(a + (b - a) * t + normal * disp)));
                out.provenance.push_back(PointProvenance::resampled_segment);
            }
        }
        if (out.points.size() >= 3) {
            source_area_sign.push_back(doubled_signed_area_um2(poly.points) < 0 ? -1 : 1);
            displaced.push_back(std::move(out));
        }
    }

    // Clip only when needed: a simple, orientation-preserving result is
    // already the winding >= 1 boundary of itself.
    Loops raw;
    raw.reserve(displaced.size());
    bool needs_clip = false;
    for (size_t i = 0; i < displaced.size(); ++i) {
        raw.push_back(displaced[i].points);
        const std::int64_t area2 = doubled_signed_area_um2(displaced[i].points);
        const std::int64_t sign = area2 < 0 ? -1 : (area2 > 0 ? 1 : 0);
        if (sign != source_area_sign[i] || sign == 0)
            needs_clip = true;
    }
    if (!needs_clip)
        needs_clip = loops_self_intersect(raw);
    if (!needs_clip)
        return displaced;

    std::unordered_map<PointUm, PointProvenance, PointHash, PointEq> tag_of;
    for (const DisplacedPolygon& poly : displaced)
        for (size_t i = 0; i < poly.points.size(); ++i)
            tag_of.emplace(poly.points[i], poly.provenance[i]);

    const Loops clipped = geom::keep_positive_winding(raw);
    std::vector<DisplacedPolygon> result;
    result.reserve(clipped.size());
    for (const Loop& loop : clipped) {
        DisplacedPolygon poly;
        poly.points = loop;
        poly.provenance.reserve(loop.size());
        for (const PointUm& p : loop) {
            auto it = tag_of.find(p);
            poly.provenance.push_back(it == tag_of.end() ? PointProvenance::resampled_segment : it->second);
        }
        result.push_back(std::move(poly));
    }
    return result;
}

std::vector<DisplacedPolygon> apply_variable_offset(const LayerOutline& outline, const GrayTexture& tex,
                                                    const halftone::Params<double>& params, LayerColor color,
                                                    const OffsetField& field, const ViewingMode& viewing,
                                                    OffsetDiagnostics* diag)
{
    const double sign = color == LayerColor::black ? 1.0 : -1.0;
    DisplacementFn fn = [&, sign](const Vec2d& uv, const Vec3d& normal) -> double {
        const Eigen::Vector3f rgb = sample_texture(tex, uv);
        const double target = halftone::luminance<double>(rgb.cast<double>(), params.gamma);
        const auto [sin_n, cos_n] = normal_components(normal);
        bool clamped = false;
        double dark_offset = 0.0;
        try {
            dark_offset = viewing.perpendicular
                              ? halftone::offset_for_perpendicular(target, sin_n, cos_n, params, &clamped)
                              : halftone::offset_for_viewing_angle(target, sin_n, cos_n, viewing.alpha, params,
                                                                   &clamped);
        } catch (const std::exception& e) {
            if (diag) {
                ++diag->solver_fallbacks;
                if (diag->warnings.size() < 32)
                    diag->warnings.push_back(std::string("offset solver fallback: ") + e.what());
            }
            return 0.0;
        }
        if (clamped && diag)
            ++diag->clamped_targets;
        return sign * dark_offset;
    };
    return displace_outline(outline.polygons, fn, field, diag);
}

double max_halftone_displacement(double sin_n, double cos_n, const halftone::Params<double>& params)
{
    if (!(cos_n > 0.0))
        return std::numeric_limits<double>::infinity();
    const double d = params.layer_thickness * sin_n / cos_n;
    return d / 2.0 + params.full_occlusion / 2.0;
}

} // namespace hatch
