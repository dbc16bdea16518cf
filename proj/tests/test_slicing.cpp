// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/slicing.hpp"

#include "support/fixtures.hpp"

#include <doctest.h>

#include <algorithm>

using namespace hatch;

TEST_CASE("normal components")
{
    CHECK(normal_components(Vec3d(1, 0, 0)) == std::pair<double, double>(0.0, 1.0));
    CHECK(normal_components(Vec3d(0, 0, 1)) == std::pair<double, double>(1.0, 0.0));
    const auto [s, c] = normal_components(Vec3d(0.6, 0.0, 0.8));
    CHECK(s == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(c == doctest::Approx(0.6).epsilon(1e-12));

    // no NaN anywhere on the unit sphere, including the poles
    std::mt19937& gen = fixtures::rng();
    std::normal_distribution<double> gauss;
    for (int i = 0; i < 2000; ++i) {
        Vec3d n(gauss(gen), gauss(gen), gauss(gen));
        if (n.norm() == 0.0)
            continue;
        n.normalize();
        const auto [sn, cn] = normal_components(n);
        CHECK(std::isfinite(sn));
        CHECK(std::isfinite(cn));
        CHECK(sn * sn + cn * cn == doctest::Approx(1.0).epsilon(1e-9));
    }
    const auto [sp, cp] = normal_components(Vec3d(0, 0, -1));
    CHECK(sp == 1.0);
    CHECK(cp == 0.0);
}

TEST_CASE("stitching")
{
    auto seg = [](Vec2d a, Vec2d b) {
        SlicedSegment s;
        s.p0 = a;
        s.p1 = b;
        s.uv0 = Vec2d(0, 0);
        s.uv1 = Vec2d(1, 0);
        s.face_normal = Vec3d(1, 0, 0);
        return s;
    };
    SUBCASE("shuffled square closes into one loop")
    {
        std::vector<SlicedSegment> segs = {
            seg({1, 1}, {0, 1}),
            seg({0, 0}, {1, 0}),
            seg({0, 1}, {0, 0}),
            seg({1, 0}, {1, 1}),
        };
        const auto loops = stitch(segs);
        REQUIRE(loops.size() == 1);
        CHECK(loops[0].points.size() == 4);
        CHECK(loops[0].edges.size() == 4);
        CHECK(signed_area_mm2(loops[0].points) == doctest::Approx(1.0));
    }
    SUBCASE("two disjoint triangles stay separate")
    {
        std::vector<SlicedSegment> segs = {
            seg({0, 0}, {1, 0}), seg({1, 0}, {0, 1}), seg({0, 1}, {0, 0}),
            seg({5, 0}, {6, 0}), seg({6, 0}, {5, 1}), seg({5, 1}, {5, 0}),
        };
        CHECK(stitch(segs).size() == 2);
    }
    SUBCASE("an open chain is an error")
    {
        std::vector<SlicedSegment> segs = {
            seg({0, 0}, {1, 0}),
            seg({1, 0}, {1, 1}),
            seg({1, 1}, {0, 1}),
        };
        CHECK_THROWS_WITH_AS(stitch(segs), doctest::Contains("open contour"), input_error);
    }
    SUBCASE("nearby endpoints merge within tolerance")
    {
        std::vector<SlicedSegment> segs = {
            seg({0, 0}, {1, 0}),
            seg({1.00005, 0}, {1, 1}), // 0.05 um off
            seg({1, 1}, {0, 1}),
            seg({0, 1}, {0, 0}),
        };
        CHECK(stitch(segs, 1e-3).size() == 1);
    }
}

TEST_CASE("cube slicing")
{
    const TexturedMesh cube = fixtures::make_unit_cube();
    const auto layers = slice_mesh(cube, 0.1);
    REQUIRE(layers.size() == 10);
    for (size_t k = 0; k < layers.size(); ++k) {
        CAPTURE(k);
        CHECK(layers[k].z == doctest::Approx((k + 0.5) * 0.1));
        REQUIRE(layers[k].polygons.size() == 1);
        const OutlinePolygon& poly = layers[k].polygons[0];
        CHECK(perimeter_mm(poly.points) == doctest::Approx(4.0).epsilon(1e-9));
        CHECK(signed_area_mm2(poly.points) == doctest::Approx(1.0).epsilon(1e-6));
        // outer loop is counter-clockwise and walls are vertical
        for (const OutlineEdge& e : poly.edges) {
            const auto [sin_n, cos_n] = normal_components(e.normal);
            CHECK(sin_n == doctest::Approx(0.0));
            CHECK(cos_n == doctest::Approx(1.0));
        }
    }
}

TEST_CASE("layer parallelism is deterministic")
{
    const TexturedMesh cube = fixtures::make_unit_cube();
    const auto serial = slice_mesh(cube, 0.07, 1);
    const auto parallel = slice_mesh(cube, 0.07, 8);
    REQUIRE(serial.size() == parallel.size());
    for (size_t k = 0; k < serial.size(); ++k) {
        REQUIRE(serial[k].polygons.size() == parallel[k].polygons.size());
        for (size_t p = 0; p < serial[k].polygons.size(); ++p)
            CHECK(serial[k].polygons[p].points == parallel[k].polygons[p].points);
    }
}

TEST_CASE("sphere cross-sections approach analytic circles")
{
    const double radius = 5.0;
    const TexturedMesh sphere = fixtures::make_icosphere(radius, 4);
    const auto layers = slice_mesh(sphere, 0.5);
    REQUIRE(layers.size() >= 18);
    // chord error of the subdivided icosphere bounds the area defect
    const double edge = 0.26; // radians, approximate arc per edge at level 4
    const double tolerance = radius * radius * edge * edge; // generous sagitta bound
    int checked = 0;
    for (const LayerOutline& layer : layers) {
        if (std::abs(layer.z) > radius * 0.9)
            continue;
        REQUIRE(layer.polygons.size() == 1);
        const double analytic = M_PI * (radius * radius - layer.z * layer.z);
        CHECK(std::abs(signed_area_mm2(layer.polygons[0].points) - analytic) < tolerance);
        ++checked;
    }
    CHECK(checked >= 16);
}

TEST_CASE("uv attachment follows the face texture mapping")
{
    // plate faces carry a [0,1]^2 atlas; outline edge uvs must interpolate it
    const TexturedMesh plate = fixtures::make_plate(10.0, 1.0, 10.0);
    const auto layers = slice_mesh(plate, 0.1);
    REQUIRE(layers.size() == 100);
    const LayerOutline& mid = layers[50];
    REQUIRE(mid.polygons.size() == 1);
    const OutlinePolygon& poly = mid.polygons[0];
    bool saw_front = false;
    for (size_t i = 0; i < poly.edges.size(); ++i) {
        const OutlineEdge& e = poly.edges[i];
        if (e.normal.isApprox(Vec3d(0, -1, 0), 1e-9)) {
            saw_front = true;
            // on the front face u follows x/width, v follows z/height
            const Vec2d p_start = to_mm(poly.points[i]);
            CHECK(e.uv_start.x() == doctest::Approx(p_start.x() / 10.0).epsilon(1e-6));
            CHECK(e.uv_start.y() == doctest::Approx(mid.z / 10.0).epsilon(1e-6));
        }
    }
    CHECK(saw_front);
}

TEST_CASE("triangular prism cross-section area is analytic")
{
    // right triangular prism: triangle (0,0) (4,0) (0,4), 2 mm tall; the
    // hypotenuse crossings land exactly on the micrometer grid
    TexturedMesh prism;
    prism.vertices = {{0, 0, 0}, {4, 0, 0}, {0, 4, 0}, {0, 0, 2}, {4, 0, 2}, {0, 4, 2}};
    prism.texcoords = {{0.5, 0.5}};
    auto tri = [](int a, int b, int c) { return Face{{a, b, c}, {0, 0, 0}}; };
    prism.faces = {
        tri(0, 2, 1), tri(3, 4, 5),                         // bottom, top
        tri(0, 1, 4), tri(0, 4, 3),                         // y = 0 side
        tri(1, 2, 5), tri(1, 5, 4),                         // hypotenuse side
        tri(2, 0, 3), tri(2, 3, 5),                         // x = 0 side
    };
    const auto layers = slice_mesh(prism, 0.25);
    REQUIRE(layers.size() == 8);
    for (const LayerOutline& layer : layers) {
        REQUIRE(layer.polygons.size() == 1);
        CHECK(std::abs(signed_area_mm2(layer.polygons[0].points) - 8.0) < 1e-6);
    }

    // off-grid section vertices quantize to the micrometer grid; the area
    // defect stays within one snap step times the crossing chord
    prism.vertices[2] = Vec3d(0, 3, 0);
    prism.vertices[5] = Vec3d(0, 3, 2);
    for (const LayerOutline& layer : slice_mesh(prism, 0.25)) {
        REQUIRE(layer.polygons.size() == 1);
        CHECK(std::abs(signed_area_mm2(layer.polygons[0].points) - 6.0) < 5e-3);
    }
}

TEST_CASE("plane below the mesh yields no polygons")
{
    const TexturedMesh cube = fixtures::make_box(Vec3d(0, 0, 1.0), Vec3d(1, 1, 2.0));
    const auto layers = slice_mesh(cube, 0.4);
    // planes at 1.0 + : first plane inside is 1.4 (k=3); none below z=1
    for (const LayerOutline& layer : layers)
        CHECK(layer.z >= 1.0);
}

TEST_CASE("uv continuity along stitched loops")
{
    const TexturedMesh plate = fixtures::make_plate(4.0, 1.0, 4.0);
    const auto layers = slice_mesh(plate, 0.25);
    for (const LayerOutline& layer : layers) {
        for (const OutlinePolygon& poly : layer.polygons) {
            const size_t n = poly.points.size();
            for (size_t i = 0; i < n; ++i) {
                const OutlineEdge& e = poly.edges[i];
                const OutlineEdge& next = poly.edges[(i + 1) % n];
                // same-face neighbours must agree on the shared corner uv
                if (e.normal.isApprox(next.normal, 1e-12))
                    CHECK((e.uv_end - next.uv_start).norm() < 1e-9);
            }
        }
    }
}
