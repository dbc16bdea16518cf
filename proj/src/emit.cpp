// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/emit.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

namespace hatch {

namespace {

void require_finite(const Vec2d& p)
{
    if (!std::isfinite(p.x()) || !std::isfinite(p.y()))
        throw input_error("non-finite coordinate in toolpath");
}

void check_parity(const ToolpathLayer& layer)
{
    if (layer.extruder != layer.index % 2)
        throw input_error("layer " + std::to_string(layer.index) + " uses extruder "
                          + std::to_string(layer.extruder) + "; even layers must use 0, odd layers 1");
    for (const PrintPath& path : layer.paths) {
        if (path.extruder != layer.extruder)
            throw input_error("layer " + std::to_string(layer.index) + " mixes extruders");
    }
}

struct GcodeWriter {
    std::string out;
    char buf[160];

    void line(const char* fmt, auto... args)
    {
        std::snprintf(buf, sizeof buf, fmt, args...);
        out += buf;
        out += '\n';
    }
};

} // namespace

std::string emit_gcode(const std::vector<ToolpathLayer>& layers, const GcodePlan& plan)
{
    for (const ToolpathLayer& layer : layers)
        check_parity(layer);

    const double filament_area = std::numbers::pi * 0.25 * plan.filament_diameter * plan.filament_diameter;
    GcodeWriter w;
    w.out += plan.header.empty() ? std::string(";hatchslicer\nG21\nG90\nM82\n") : plan.header;
    if (!w.out.empty() && w.out.back() != '\n')
        w.out += '\n';

    double e[2] = {0.0, 0.0};
    int tool = -1;
    for (const ToolpathLayer& layer : layers) {
        w.line(";LAYER:%d", layer.index);
        w.line(";EXTRUDER:%d", layer.extruder);
        if (layer.extruder != tool) {
            tool = layer.extruder;
            std::string change = plan.tool_change;
            const size_t slot = change.find("{}");
            if (slot != std::string::npos)
                change.replace(slot, 2, std::to_string(tool));
            w.out += change;
            w.out += '\n';
        }
        w.line("G0 Z%.3f F%d", layer.z, static_cast<int>(plan.travel_speed * 60.0));
        for (const PrintPath& path : layer.paths) {
            if (path.points.empty())
                continue;
            require_finite(path.points.front());
            w.line("G0 X%.3f Y%.3f F%d", path.points.front().x(), path.points.front().y(),
                   static_cast<int>(plan.travel_speed * 60.0));
            const size_t segments = path.segment_count();
            for (size_t i = 0; i < segments; ++i) {
                const Vec2d& a = path.points[i];
                const Vec2d& b = path.points[(i + 1) % path.points.size()];
                require_finite(b);
                const double width = i < path.width.size() ? path.width[i] : 0.0;
                const double speed = i < path.speed.size() ? path.speed[i] : 0.0;
                if (width > 0.0 && speed > 0.0) {
                    const double length = (b - a).norm();
                    e[tool] += length * cross_section_area(width, plan.layer_thickness) / filament_area;
                    w.line("G1 X%.3f Y%.3f E%.5f F%d", b.x(), b.y(), e[tool], static_cast<int>(speed * 60.0));
                } else {
                    w.line("G0 X%.3f Y%.3f F%d", b.x(), b.y(), static_cast<int>(plan.travel_speed * 60.0));
                }
            }
        }
    }
    w.out += plan.footer.empty() ? std::string("M104 S0 T0\nM104 S0 T1\nM140 S0\nM84\n") : plan.footer;
    if (w.out.back() != '\n')
        w.out += '\n';
    return w.out;
}

std::string emit_layer_svg(const ToolpathLayer& layer, double scale_px_per_mm)
{
    if (!(scale_px_per_mm > 0.0))
        throw input_error("svg scale must be > 0");
    check_parity(layer);

    double min_x = 0.0, min_y = 0.0, max_x = 1.0, max_y = 1.0;
    bool first = true;
    for (const PrintPath& path : layer.paths) {
        for (const Vec2d& p : path.points) {
            if (first) {
                min_x = max_x = p.x();
                min_y = max_y = p.y();
                first = false;
            }
            min_x = std::min(min_x, p.x());
            min_y = std::min(min_y, p.y());
            max_x = std::max(max_x, p.x());
            max_y = std::max(max_y, p.y());
        }
    }
    const double margin = 1.0;
    min_x -= margin;
    min_y -= margin;
    max_x += margin;
    max_y += margin;

    const char* color = layer.extruder == 0 ? "#000000" : "#c0c0c0";
    std::ostringstream svg;
    char buf[256];
    const double sw = scale_px_per_mm;
    // y flipped so the print's +y is up
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" viewBox=\"0 0 %.3f %.3f\">\n",
                  (max_x - min_x) * sw, (max_y - min_y) * sw, (max_x - min_x) * sw, (max_y - min_y) * sw);
    svg << buf;
    std::snprintf(buf, sizeof buf, "<!-- layer %d extruder %d z %.3f -->\n", layer.index, layer.extruder, layer.z);
    svg << buf;
    auto px = [&](const Vec2d& p) { return Vec2d((p.x() - min_x) * sw, (max_y - p.y()) * sw); };

    for (const PrintPath& path : layer.paths) {
        if (path.points.size() < 2)
            continue;
        const bool uniform = std::all_of(path.width.begin(), path.width.end(),
                                         [&](double wd) { return wd == path.width.front(); });
        const size_t segments = path.segment_count();
        if (uniform && !path.width.empty() && path.width.front() > 0.0) {
            svg << "<" << (path.closed ? "polygon" : "polyline") << " points=\"";
            for (const Vec2d& p : path.points) {
                const Vec2d q = px(p);
                std::snprintf(buf, sizeof buf, "%.2f,%.2f ", q.x(), q.y());
                svg << buf;
            }
            std::snprintf(buf, sizeof buf, "\" fill=\"none\" stroke=\"%s\" stroke-width=\"%.2f\"/>\n", color,
                          path.width.front() * sw);
            svg << buf;
        } else {
            for (size_t i = 0; i < segments; ++i) {
                const Vec2d a = px(path.points[i]);
                const Vec2d b = px(path.points[(i + 1) % path.points.size()]);
                const double width = i < path.width.size() ? path.width[i] : 0.0;
                if (width > 0.0) {
                    std::snprintf(buf, sizeof buf,
                                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"%.2f\"/>\n",
                                  a.x(), a.y(), b.x(), b.y(), color, width * sw);
                } else {
                    std::snprintf(buf, sizeof buf,
                                  "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"%s\" stroke-width=\"%.2f\" stroke-dasharray=\"4 4\"/>\n",
                                  a.x(), a.y(), b.x(), b.y(), "#8080ff", 0.05 * sw);
                }
                svg << buf;
            }
        }
    }
    svg << "</svg>\n";
    return svg.str();
}

double gcode_extruded_volume(const std::string& gcode, double filament_diameter)
{
    const double filament_area = std::numbers::pi * 0.25 * filament_diameter * filament_diameter;
    double volume = 0.0;
    double last_e[2] = {0.0, 0.0};
    int tool = 0;
    std::istringstream in(gcode);
    std::string line;
    while (std::getline(in, line)) {
        if (line.size() >= 2 && line[0] == 'T' && std::isdigit(static_cast<unsigned char>(line[1]))) {
            tool = line[1] - '0';
            continue;
        }
        if (line.rfind("G1", 0) != 0)
            continue;
        const size_t epos = line.find(" E");
        if (epos == std::string::npos)
            continue;
        const double e = std::strtod(line.c_str() + epos + 2, nullptr);
        volume += (e - last_e[tool]) * filament_area;
        last_e[tool] = e;
    }
    return volume;
}

} // namespace hatch
