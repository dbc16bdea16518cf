// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/model_io.hpp"

#include <cmath>
#include <map>
#include <random>

namespace fixtures {

using hatch::Face;
using hatch::GrayTexture;
using hatch::Loop;
using hatch::Loops;
using hatch::PointUm;
using hatch::TexturedMesh;
using hatch::Vec2d;
using hatch::Vec3d;

// Axis-aligned box of 12 triangles; every face carries a [0,1]^2 atlas over
// its local axes, so any face can be texture-driven.
inline TexturedMesh make_box(const Vec3d& lo, const Vec3d& hi)
{
    TexturedMesh mesh;
    const double x0 = lo.x(), y0 = lo.y(), z0 = lo.z();
    const double x1 = hi.x(), y1 = hi.y(), z1 = hi.z();
    mesh.vertices = {
        {x0, y0, z0}, {x1, y0, z0}, {x1, y1, z0}, {x0, y1, z0},
        {x0, y0, z1}, {x1, y0, z1}, {x1, y1, z1}, {x0, y1, z1},
    };
    mesh.texcoords = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    // quads as (v0 v1 v2 v3) wound outward, uv corners 0..3
    const int quads[6][4] = {
        {0, 3, 2, 1}, // bottom (z0), normal -z
        {4, 5, 6, 7}, // top (z1), normal +z
        {0, 1, 5, 4}, // front (y0), normal -y
        {2, 3, 7, 6}, // back (y1), normal +y
        {0, 4, 7, 3}, // left (x0), normal -x
        {1, 2, 6, 5}, // right (x1), normal +x
    };
    for (const auto& q : quads) {
        mesh.faces.push_back(Face{{q[0], q[1], q[2]}, {0, 1, 2}});
        mesh.faces.push_back(Face{{q[0], q[2], q[3]}, {0, 2, 3}});
    }
    return mesh;
}

inline TexturedMesh make_unit_cube()
{
    return make_box(Vec3d(0, 0, 0), Vec3d(1, 1, 1));
}

// Vertical plate: width x depth footprint, given height; the large front
// (-y) and back (+y) faces carry the gradient-friendly atlas from make_box.
inline TexturedMesh make_plate(double width, double depth, double height)
{
    return make_box(Vec3d(0, 0, 0), Vec3d(width, depth, height));
}

// Icosphere with the requested subdivision level; UVs are a constant since
// the slicing tests only use geometry.
inline TexturedMesh make_icosphere(double radius, int subdivisions)
{
    const double t = (1.0 + std::sqrt(5.0)) / 2.0;
    std::vector<Vec3d> verts = {
        {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
        {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1},
    };
    std::vector<std::array<int, 3>> faces = {
        {0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9},  {5, 11, 4},
        {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6},  {3, 6, 8},
        {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1},
    };
    for (int s = 0; s < subdivisions; ++s) {
        std::map<std::pair<int, int>, int> midpoint;
        auto mid = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end())
                return it->second;
            verts.push_back((verts[a] + verts[b]) / 2.0);
            midpoint[key] = static_cast<int>(verts.size()) - 1;
            return static_cast<int>(verts.size()) - 1;
        };
        std::vector<std::array<int, 3>> next;
        next.reserve(faces.size() * 4);
        for (const auto& f : faces) {
            const int ab = mid(f[0], f[1]);
            const int bc = mid(f[1], f[2]);
            const int ca = mid(f[2], f[0]);
            next.push_back({f[0], ab, ca});
            next.push_back({f[1], bc, ab});
            next.push_back({f[2], ca, bc});
            next.push_back({ab, bc, ca});
        }
        faces = std::move(next);
    }
    TexturedMesh mesh;
    mesh.texcoords = {{0.5, 0.5}};
    for (Vec3d& v : verts)
        mesh.vertices.push_back(v.normalized() * radius);
    for (const auto& f : faces)
        mesh.faces.push_back(Face{{f[0], f[1], f[2]}, {0, 0, 0}});
    return mesh;
}

inline GrayTexture make_uniform_texture(float value, int size = 8)
{
    GrayTexture tex;
    tex.width = size;
    tex.height = size;
    tex.pixels.assign(static_cast<size_t>(size) * size * 3, value);
    return tex;
}

// Left-to-right dark-to-light gradient.
inline GrayTexture make_gradient_texture(int width, int height)
{
    GrayTexture tex;
    tex.width = width;
    tex.height = height;
    tex.pixels.resize(static_cast<size_t>(width) * height * 3);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            const float v = width == 1 ? 0.0f : static_cast<float>(x) / (width - 1);
            const size_t i = (static_cast<size_t>(y) * width + x) * 3;
            tex.pixels[i] = tex.pixels[i + 1] = tex.pixels[i + 2] = v;
        }
    }
    return tex;
}

inline Loop rect_loop(double x0, double y0, double x1, double y1)
{
    return Loop{hatch::to_um(Vec2d(x0, y0)), hatch::to_um(Vec2d(x1, y0)), hatch::to_um(Vec2d(x1, y1)),
                hatch::to_um(Vec2d(x0, y1))};
}

inline Loop reversed(Loop loop)
{
    std::reverse(loop.begin(), loop.end());
    return loop;
}

// Clipping fixtures: bowties, spikes, nested and overlapping loops.
inline std::vector<Loops> clip_fixture_polygons()
{
    using hatch::to_um;
    std::vector<Loops> fixtures;
    auto loop_mm = [](std::initializer_list<std::pair<double, double>> pts) {
        Loop l;
        for (const auto& [x, y] : pts)
            l.push_back(hatch::to_um(Vec2d(x, y)));
        return l;
    };

    fixtures.push_back({rect_loop(0, 0, 2, 2)});                                        // plain square
    fixtures.push_back({rect_loop(0, 0, 4, 4), reversed(rect_loop(1, 1, 3, 3))});      // square with hole
    fixtures.push_back({loop_mm({{0, 0}, {2, 2}, {2, 0}, {0, 2}})});                    // bowtie (+1/-1)
    fixtures.push_back({loop_mm({{0, 0}, {3, 0}, {3, 2}, {0, 2}, {0, 0.8}, {2, 0.8}, {2, 1.2}, {0, 1.2}})}); // comb
    fixtures.push_back({rect_loop(0, 0, 2, 2), rect_loop(1, 1, 3, 3)});                 // overlap union
    fixtures.push_back({rect_loop(0, 0, 2, 2), rect_loop(5, 0, 7, 2)});                 // disjoint pair
    fixtures.push_back({rect_loop(0, 0, 2, 2), reversed(rect_loop(0.5, 0.5, 1.5, 1.5)),
                        rect_loop(0.8, 0.8, 1.2, 1.2)});                                // island in a hole
    fixtures.push_back({loop_mm({{0, 0}, {4, 0}, {4, 0.002}, {0, 0.001}})});            // 1-2 um sliver
    fixtures.push_back({loop_mm({{0, 0}, {3, 0.001}, {3, -0.001}})});                   // CW needle -> empty
    fixtures.push_back({loop_mm({{0, 0}, {3, -0.001}, {3, 0.001}})});                   // CCW needle
    fixtures.push_back({loop_mm({{0, 0}, {2, 0}, {2, 1}, {0.001, 1}, {2, 1.001}, {0, 1.001}})}); // near-degenerate fold
    fixtures.push_back({reversed(rect_loop(0, 0, 2, 2))});                              // lone CW -> empty
    fixtures.push_back({rect_loop(0, 0, 2, 2), reversed(rect_loop(-1, -1, 3, 3))});     // CCW inside CW
    fixtures.push_back({loop_mm({{0, 0}, {4, 0}, {0, 3}, {4, 3}})});                    // vertical bowtie
    fixtures.push_back({loop_mm({{0, 0}, {5, 0}, {5, 1}, {1, 1}, {1, 2}, {4.999, 1.0005}, {5, 2}, {0, 2}})}); // spike fold
    fixtures.push_back({rect_loop(0, 0, 3, 3), rect_loop(1, 1, 2, 2)});                 // nested same winding
    fixtures.push_back({loop_mm({{0, 0}, {1, 0}, {1, 1}, {2, 0}, {3, 0}, {3, 3}, {0, 3}})}); // notch touching edge
    fixtures.push_back({loop_mm({{0, 0}, {6, 0}, {6, 0.5}, {3, 0.0005}, {0, 0.5}})});   // shallow spike
    fixtures.push_back({rect_loop(0, 0, 2, 2), reversed(rect_loop(1, 1, 3, 3))});       // partial hole overlap
    fixtures.push_back({loop_mm({{0, 0}, {2, 0}, {0, 2}, {2, 2}}),
                        loop_mm({{3, 0}, {5, 0}, {5, 2}, {3, 2}})});                    // bowtie + square
    return fixtures;
}

inline std::mt19937& rng()
{
    static std::mt19937 gen(0xBADC0FFEu);
    return gen;
}

} // namespace fixtures
