// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/toolpath.hpp"

#include "hatch/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace hatch {

double cross_section_area(double width, double layer_thickness)
{
    const double h = layer_thickness;
    if (width < h)
        return std::numbers::pi * 0.25 * width * width;
    return std::numbers::pi * 0.25 * h * h + h * (width - h);
}

namespace {

// Uniform inset via the corner-displacement machinery: a constant negative
// field needs no resampling, only vertex displacement plus cleanup.
Loops inset_region(const Loops& region, double distance)
{
    std::vector<OutlinePolygon> polys;
    polys.reserve(region.size());
    for (const Loop& loop : region) {
        if (loop.size() < 3)
            continue;
        OutlinePolygon p;
        p.points = loop;
        p.edges.assign(loop.size(), OutlineEdge{Vec2d::Zero(), Vec2d::Zero(), Vec3d::UnitX()});
        polys.push_back(std::move(p));
    }
    OffsetField field;
    field.sample_interval_mm = 1e9; // vertices only
    field.bevel_ratio = 2.0;        // square off runaway miters
    field.static_offset_mm = -distance;
    const DisplacementFn zero = [](const Vec2d&, const Vec3d&) { return 0.0; };
    const std::vector<DisplacedPolygon> displaced = displace_outline(polys, zero, field);
    Loops out;
    out.reserve(displaced.size());
    for (const DisplacedPolygon& p : displaced)
        out.push_back(p.points);
    // tiny slivers are not printable walls
    Loops kept;
    for (Loop& l : out) {
        if (std::abs(signed_area_mm2(l)) > 1e-6)
            kept.push_back(std::move(l));
    }
    return kept;
}

} // namespace

WallSet generate_walls(const Loops& region, double line_width, int wall_count)
{
    if (!(line_width > 0.0))
        throw input_error("line width must be > 0");
    if (wall_count < 1)
        throw input_error("at least one wall is required");
    WallSet set;
    Loops current = inset_region(region, line_width / 2.0);
    for (int w = 0; w < wall_count && !current.empty(); ++w) {
        set.walls.push_back(current);
        current = inset_region(current, line_width);
    }
    if (set.walls.empty())
        set.inner_region = {};
    else
        set.inner_region = inset_region(set.walls.back(), line_width / 2.0);
    return set;
}

std::vector<SkinRegions> compute_skin_regions(const std::vector<Loops>& inner_regions, int top_layers,
                                              int bottom_layers, int threads)
{
    const int n = static_cast<int>(inner_regions.size());
    std::vector<SkinRegions> out(inner_regions.size());
    parallel_for(inner_regions.size(), threads, [&](size_t ki) {
        const int k = static_cast<int>(ki);
        const Loops& inner = inner_regions[k];
        if (inner.empty())
            return;
        Loops covered = inner; // region shielded from both the top and bottom surface
        bool open_above = k + top_layers >= n;
        for (int j = k + 1; j <= k + top_layers && !open_above; ++j)
            covered = geom::intersect(covered, inner_regions[j]);
        bool open_below = k - bottom_layers < 0;
        for (int j = k - bottom_layers; j < k && !open_below; ++j)
            covered = geom::intersect(covered, inner_regions[j]);
        if (open_above || open_below)
            covered = {};
        out[k].infill = covered;
        out[k].skin = geom::subtract(inner, covered);
    });
    return out;
}

std::vector<SkinLine> fill_skin(const Loops& region, double line_distance, double angle_radians)
{
    if (!(line_distance > 0.0))
        throw input_error("line distance must be > 0");
    std::vector<SkinLine> lines;
    if (region.empty())
        return lines;

    const double c = std::cos(-angle_radians);
    const double s = std::sin(-angle_radians);
    auto rotate = [&](const Vec2d& p) { return Vec2d(c * p.x() - s * p.y(), s * p.x() + c * p.y()); };
    auto unrotate = [&](const Vec2d& p) { return Vec2d(c * p.x() + s * p.y(), -s * p.x() + c * p.y()); };

    double y_min = std::numeric_limits<double>::infinity();
    double y_max = -y_min;
    std::vector<std::vector<Vec2d>> rotated(region.size());
    for (size_t li = 0; li < region.size(); ++li) {
        rotated[li].reserve(region[li].size());
        for (const PointUm& p : region[li]) {
            const Vec2d r = rotate(to_mm(p));
            rotated[li].push_back(r);
            y_min = std::min(y_min, r.y());
            y_max = std::max(y_max, r.y());
        }
    }

    struct Crossing {
        double x;
        int dir;
    };
    for (double y = y_min + line_distance / 2.0; y < y_max; y += line_distance) {
        std::vector<Crossing> crossings;
        for (const std::vector<Vec2d>& loop : rotated) {
            const size_t n = loop.size();
            for (size_t i = 0; i < n; ++i) {
                const Vec2d& a = loop[i];
                const Vec2d& b = loop[(i + 1) % n];
                // half-open rule keeps vertex crossings unambiguous; a
                // downward edge raises the winding of everything to its right
                if ((a.y() <= y && b.y() > y) || (b.y() <= y && a.y() > y)) {
                    const double t = (y - a.y()) / (b.y() - a.y());
                    crossings.push_back({a.x() + (b.x() - a.x()) * t, b.y() < a.y() ? 1 : -1});
                }
            }
        }
        std::sort(crossings.begin(), crossings.end(), [](const Crossing& a, const Crossing& b) { return a.x < b.x; });
        int winding = 0;
        double span_start = 0.0;
        for (const Crossing& cr : crossings) {
            const int prev = winding;
            winding += cr.dir;
            if (prev <= 0 && winding > 0) {
                span_start = cr.x;
            } else if (prev > 0 && winding <= 0 && cr.x > span_start) {
                lines.push_back({unrotate(Vec2d(span_start, y)), unrotate(Vec2d(cr.x, y))});
            }
        }
    }
    return lines;
}

std::vector<PrintPath> horizontal_hatch(const std::vector<SkinLine>& lines, const GrayTexture& tex,
                                        const UvMapFn& uv_map, const FlowModel& flow,
                                        const HorizontalHatchConfig& config, LayerColor color)
{
    if (!(config.sample_interval > 0.0))
        throw input_error("sample interval must be > 0");
    std::vector<PrintPath> paths;
    paths.reserve(lines.size());
    for (const SkinLine& line : lines) {
        const double len = (line.b - line.a).norm();
        if (len <= 0.0)
            continue;
        const int parts = std::max(1, static_cast<int>(std::ceil(len / config.sample_interval - 1e-12)));
        PrintPath path;
        path.role = PathRole::skin;
        path.points.reserve(parts + 1);
        for (int i = 0; i <= parts; ++i)
            path.points.push_back(line.a + (line.b - line.a) * (static_cast<double>(i) / parts));
        path.width.reserve(parts);
        path.speed.reserve(parts);
        for (int i = 0; i < parts; ++i) {
            // trapezoidal mean of the luminance along the sub-segment
            double mean = 0.0;
            constexpr int kProbes = 4;
            for (int p = 0; p <= kProbes; ++p) {
                const double t = (static_cast<double>(i) + static_cast<double>(p) / kProbes) / parts;
                const Vec2d xy = line.a + (line.b - line.a) * t;
                const double lum =
                    halftone::luminance<double>(sample_texture(tex, uv_map(xy)).cast<double>(), config.gamma);
                mean += (p == 0 || p == kProbes) ? lum * 0.5 : lum;
            }
            mean /= kProbes;
            const double share = color == LayerColor::black ? 1.0 - mean : mean;
            double width = share * config.line_distance;
            const double floor_width = config.width_floor_ratio * config.line_distance;
            width = std::clamp(width, floor_width, config.line_distance);
            if (width <= 0.0) {
                path.width.push_back(0.0);
                path.speed.push_back(0.0);
                continue;
            }
            path.width.push_back(width);
            path.speed.push_back(flow.flow_mm3_per_s / cross_section_area(width, flow.layer_thickness));
        }
        paths.push_back(std::move(path));
    }
    return paths;
}

} // namespace hatch
