// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/emit.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <numbers>
#include <sstream>

using namespace hatch;

namespace {

PrintPath straight_path(Vec2d a, Vec2d b, double width, double speed, int extruder)
{
    PrintPath p;
    p.points = {a, b};
    p.width = {width};
    p.speed = {speed};
    p.role = PathRole::skin;
    p.extruder = extruder;
    return p;
}

ToolpathLayer simple_layer(int index)
{
    ToolpathLayer layer;
    layer.index = index;
    layer.z = 0.1 * (index + 1);
    layer.extruder = index % 2;
    layer.paths = {straight_path(Vec2d(0, 0), Vec2d(10, 0), 0.35, 25.0, index % 2)};
    return layer;
}

int count_lines(const std::string& text, const std::string& prefix)
{
    std::istringstream in(text);
    std::string line;
    int n = 0;
    while (std::getline(in, line))
        if (line.rfind(prefix, 0) == 0)
            ++n;
    return n;
}

} // namespace

TEST_CASE("gcode emission")
{
    GcodePlan plan;
    SUBCASE("empty plan emits header and footer only")
    {
        const std::string g = emit_gcode({}, plan);
        CHECK(g.find("G21") != std::string::npos);
        CHECK(g.find("M84") != std::string::npos);
        CHECK(g.find("G1 ") == std::string::npos);
    }
    SUBCASE("a 10 mm segment extrudes the frozen amount")
    {
        const std::string g = emit_gcode({simple_layer(0)}, plan);
        // length * area(0.35, 0.1) / (pi * 1.425^2), from the evaluation script
        CHECK(g.find("E0.05150") != std::string::npos);
        CHECK(g.find("F1500") != std::string::npos); // 25 mm/s
    }
    SUBCASE("exactly one tool change per layer boundary")
    {
        const std::string g = emit_gcode({simple_layer(0), simple_layer(1)}, plan);
        CHECK(count_lines(g, "T0") == 1);
        CHECK(count_lines(g, "T1") == 1);
        CHECK(count_lines(g, ";LAYER:") == 2);
    }
    SUBCASE("parity violations are rejected")
    {
        ToolpathLayer bad = simple_layer(0);
        bad.extruder = 1;
        for (PrintPath& p : bad.paths)
            p.extruder = 1;
        CHECK_THROWS_WITH_AS(emit_gcode({bad}, plan), doctest::Contains("even layers must use 0"), input_error);

        ToolpathLayer mixed = simple_layer(0);
        mixed.paths.push_back(straight_path(Vec2d(0, 1), Vec2d(5, 1), 0.35, 25.0, 1));
        CHECK_THROWS_WITH_AS(emit_gcode({mixed}, plan), doctest::Contains("mixes extruders"), input_error);
    }
    SUBCASE("non-finite coordinates are rejected")
    {
        ToolpathLayer bad = simple_layer(0);
        bad.paths[0].points[1].x() = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(emit_gcode({bad}, plan), input_error);
    }
    SUBCASE("E is monotone per extruder across layers")
    {
        std::vector<ToolpathLayer> layers;
        for (int i = 0; i < 6; ++i)
            layers.push_back(simple_layer(i));
        const std::string g = emit_gcode(layers, plan);
        double last_e[2] = {0.0, 0.0};
        int tool = 0;
        std::istringstream in(g);
        std::string line;
        while (std::getline(in, line)) {
            if (line.rfind("T", 0) == 0 && line.size() == 2)
                tool = line[1] - '0';
            const size_t epos = line.find(" E");
            if (line.rfind("G1", 0) == 0 && epos != std::string::npos) {
                const double e = std::strtod(line.c_str() + epos + 2, nullptr);
                CHECK(e >= last_e[tool]);
                last_e[tool] = e;
            }
        }
        CHECK(last_e[0] > 0.0);
        CHECK(last_e[1] > 0.0);
    }
    SUBCASE("volume conservation against the parsed-back E column")
    {
        std::vector<ToolpathLayer> layers;
        double expected = 0.0;
        for (int i = 0; i < 4; ++i) {
            ToolpathLayer layer;
            layer.index = i;
            layer.z = 0.1 * (i + 1);
            layer.extruder = i % 2;
            for (int j = 0; j < 3; ++j) {
                const double width = 0.2 + 0.05 * j;
                layer.paths.push_back(straight_path(Vec2d(0, j), Vec2d(7.5 + j, j), width, 20.0, i % 2));
                expected += (7.5 + j) * cross_section_area(width, plan.layer_thickness);
            }
            layers.push_back(layer);
        }
        const std::string g = emit_gcode(layers, plan);
        const double parsed = gcode_extruded_volume(g, plan.filament_diameter);
        CHECK(parsed == doctest::Approx(expected).epsilon(2e-5)); // E words carry 5 decimals
    }
    SUBCASE("byte stability across runs")
    {
        const std::vector<ToolpathLayer> layers = {simple_layer(0), simple_layer(1)};
        CHECK(emit_gcode(layers, plan) == emit_gcode(layers, plan));
    }
}

TEST_CASE("svg emission")
{
    SUBCASE("closed wall becomes one polygon element")
    {
        ToolpathLayer layer;
        layer.index = 0;
        layer.extruder = 0;
        PrintPath wall;
        wall.points = {Vec2d(0, 0), Vec2d(5, 0), Vec2d(5, 5), Vec2d(0, 5)};
        wall.width.assign(4, 0.35);
        wall.speed.assign(4, 15.0);
        wall.closed = true;
        wall.role = PathRole::outer_wall;
        layer.paths = {wall};
        const std::string svg = emit_layer_svg(layer, 10.0);
        CHECK(count_lines(svg, "<polygon") == 1);
        CHECK(svg.find("stroke=\"#000000\"") != std::string::npos);
        CHECK(svg.find("stroke-width=\"3.50\"") != std::string::npos);
    }
    SUBCASE("width-modulated lines become per-segment elements")
    {
        ToolpathLayer layer;
        layer.index = 1;
        layer.extruder = 1;
        PrintPath hatch;
        for (int i = 0; i <= 8; ++i)
            hatch.points.push_back(Vec2d(i, 0));
        for (int i = 0; i < 8; ++i) {
            hatch.width.push_back(0.1 + 0.05 * i);
            hatch.speed.push_back(20.0);
        }
        hatch.extruder = 1;
        layer.paths = {hatch};
        const std::string svg = emit_layer_svg(layer, 10.0);
        CHECK(count_lines(svg, "<line") == 8);
        CHECK(svg.find("#c0c0c0") != std::string::npos); // light extruder colour
    }
    SUBCASE("mixed extruders are surfaced before rendering")
    {
        ToolpathLayer layer;
        layer.index = 0;
        layer.extruder = 0;
        layer.paths = {straight_path(Vec2d(0, 0), Vec2d(1, 0), 0.35, 25.0, 1)};
        CHECK_THROWS_AS(emit_layer_svg(layer, 10.0), input_error);
    }
}
