// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/slicing.hpp"

#include "hatch/parallel.hpp"

#include <cmath>
#include <unordered_map>

namespace hatch {

std::pair<double, double> normal_components(const Vec3d& n)
{
    const double sin_n = std::abs(n.z());
    const double cos_n = std::hypot(n.x(), n.y());
    return {sin_n, cos_n};
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

// Intersection of the face edge (va -> vb by mesh index) with plane z.
// Computed on index-ordered endpoints so the two faces sharing the edge get
// bit-identical positions.
Vec2d edge_plane_point(const TexturedMesh& mesh, int va, int vb, double z, double& t_out)
{
    bool swapped = false;
    if (va > vb) {
        std::swap(va, vb);
        swapped = true;
    }
    const Vec3d& a = mesh.vertices[va];
    const Vec3d& b = mesh.vertices[vb];
    const double t = (z - a.z()) / (b.z() - a.z());
    t_out = swapped ? 1.0 - t : t;
    return Vec2d(a.x() + (b.x() - a.x()) * t, a.y() + (b.y() - a.y()) * t);
}

// Cuts one triangle with the plane; vertices exactly on the plane count as
// above, so coplanar triangles produce nothing and shared boundaries are
// produced exactly once by the neighbouring faces.
bool slice_face(const TexturedMesh& mesh, size_t face_index, double z, SlicedSegment& out)
{
    const Face& face = mesh.faces[face_index];
    bool above[3];
    int above_count = 0;
    for (int i = 0; i < 3; ++i) {
        above[i] = mesh.vertices[face.vertex[i]].z() >= z;
        above_count += above[i];
    }
    if (above_count == 0 || above_count == 3)
        return false;

    Vec2d pts[2];
    Vec2d uvs[2];
    int found = 0;
    for (int i = 0; i < 3 && found < 2; ++i) {
        const int j = (i + 1) % 3;
        if (above[i] == above[j])
            continue;
        double t = 0.0;
        pts[found] = edge_plane_point(mesh, face.vertex[i], face.vertex[j], z, t);
        const Vec2d& uv_i = mesh.texcoords[face.texcoord[i]];
        const Vec2d& uv_j = mesh.texcoords[face.texcoord[j]];
        uvs[found] = uv_i + (uv_j - uv_i) * t;
        ++found;
    }
    if (found != 2)
        return false;

    const Vec3d n = mesh.face_normal(face_index);
    // orient so material is on the left: segment direction follows z-hat x n
    const Vec2d along(-n.y(), n.x());
    const Vec2d d = pts[1] - pts[0];
    const double sense = d.dot(along);
    if (sense == 0.0)
        return false; // degenerate sliver
    if (sense > 0.0) {
        out.p0 = pts[0];
        out.p1 = pts[1];
        out.uv0 = uvs[0];
        out.uv1 = uvs[1];
    } else {
        out.p0 = pts[1];
        out.p1 = pts[0];
        out.uv0 = uvs[1];
        out.uv1 = uvs[0];
    }
    out.face_normal = n;
    return true;
}

} // namespace

std::vector<OutlinePolygon> stitch(const std::vector<SlicedSegment>& segments, double tolerance_mm)
{
    struct Node {
        PointUm start, end;
        size_t segment;
        bool used = false;
    };
    std::vector<Node> nodes;
    nodes.reserve(segments.size());
    std::unordered_multimap<PointUm, size_t, PointHash, PointEq> by_start;
    for (size_t i = 0; i < segments.size(); ++i) {
        Node n{to_um(segments[i].p0), to_um(segments[i].p1), i};
        if (n.start == n.end)
            continue; // collapses below coordinate resolution
        by_start.emplace(n.start, nodes.size());
        nodes.push_back(n);
    }

    const coord_t tol_um = std::max<coord_t>(1, static_cast<coord_t>(std::ceil(tolerance_mm * kUmPerMm)));
    auto find_next = [&](const PointUm& at) -> int {
        auto [lo, hi] = by_start.equal_range(at);
        for (auto it = lo; it != hi; ++it) {
            if (!nodes[it->second].used)
                return static_cast<int>(it->second);
        }
        // tolerance fallback
        int best = -1;
        std::int64_t best_d2 = static_cast<std::int64_t>(tol_um) * tol_um;
        for (size_t i = 0; i < nodes.size(); ++i) {
            if (nodes[i].used)
                continue;
            const std::int64_t dx = nodes[i].start.x() - at.x();
            const std::int64_t dy = nodes[i].start.y() - at.y();
            const std::int64_t d2 = dx * dx + dy * dy;
            if (d2 <= best_d2) {
                best_d2 = d2;
                best = static_cast<int>(i);
            }
        }
        return best;
    };

    std::vector<OutlinePolygon> loops;
    for (size_t seed = 0; seed < nodes.size(); ++seed) {
        if (nodes[seed].used)
            continue;
        OutlinePolygon poly;
        size_t current = seed;
        const PointUm loop_start = nodes[seed].start;
        for (;;) {
            Node& node = nodes[current];
            node.used = true;
            const SlicedSegment& seg = segments[node.segment];
            poly.points.push_back(node.start);
            poly.edges.push_back(OutlineEdge{seg.uv0, seg.uv1, seg.face_normal});
            const PointUm at = node.end;
            if (PointEq()(at, loop_start))
                break;
            const int next = find_next(at);
            if (next < 0) {
                throw input_error("open contour while stitching: chain of " + std::to_string(poly.points.size())
                                  + " segment(s) ends at (" + std::to_string(to_mm(at.x())) + ", "
                                  + std::to_string(to_mm(at.y())) + ") mm with no continuation");
            }
            current = static_cast<size_t>(next);
        }
        if (poly.points.size() >= 3)
            loops.push_back(std::move(poly));
    }
    return loops;
}

std::vector<LayerOutline> slice_mesh(const TexturedMesh& mesh, double layer_thickness, int threads,
                                     double stitch_tolerance_mm)
{
    if (!(layer_thickness > 0.0))
        throw input_error("layer thickness must be > 0");
    const double z_min = mesh.z_min();
    const double z_max = mesh.z_max();
    const auto plane_z = [&](std::int64_t k) { return (static_cast<double>(k) + 0.5) * layer_thickness; };
    const std::int64_t k_lo = static_cast<std::int64_t>(std::ceil(z_min / layer_thickness - 0.5));
    const std::int64_t k_hi = static_cast<std::int64_t>(std::floor(z_max / layer_thickness - 0.5));
    if (k_hi < k_lo)
        return {};
    const size_t layer_count = static_cast<size_t>(k_hi - k_lo + 1);

    // bucket faces by the planes they straddle
    std::vector<std::vector<int>> buckets(layer_count);
    for (size_t f = 0; f < mesh.faces.size(); ++f) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (int c = 0; c < 3; ++c) {
            const double z = mesh.vertices[mesh.faces[f].vertex[c]].z();
            lo = std::min(lo, z);
            hi = std::max(hi, z);
        }
        std::int64_t kb = std::max<std::int64_t>(k_lo, static_cast<std::int64_t>(std::ceil(lo / layer_thickness - 0.5)) - 1);
        std::int64_t ke = std::min<std::int64_t>(k_hi, static_cast<std::int64_t>(std::floor(hi / layer_thickness - 0.5)) + 1);
        for (std::int64_t k = kb; k <= ke; ++k) {
            if (plane_z(k) >= lo && plane_z(k) <= hi)
                buckets[static_cast<size_t>(k - k_lo)].push_back(static_cast<int>(f));
        }
    }

    std::vector<LayerOutline> layers(layer_count);
    parallel_for(layer_count, threads, [&](size_t li) {
        const double z = plane_z(k_lo + static_cast<std::int64_t>(li));
        std::vector<SlicedSegment> segments;
        segments.reserve(buckets[li].size());
        SlicedSegment seg;
        for (int f : buckets[li]) {
            if (slice_face(mesh, static_cast<size_t>(f), z, seg))
                segments.push_back(seg);
        }
        layers[li].z = z;
        try {
            layers[li].polygons = stitch(segments, stitch_tolerance_mm);
        } catch (const input_error& e) {
            throw input_error("layer " + std::to_string(li) + " (z=" + std::to_string(z) + "): " + e.what());
        }
    });
    return layers;
}

} // namespace hatch
