// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/geometry.hpp"

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

namespace hatch {

struct Face {
    std::array<int, 3> vertex;   // indices into TexturedMesh::vertices
    std::array<int, 3> texcoord; // indices into TexturedMesh::texcoords
};

// Triangle mesh with per-corner texture coordinates. Immutable after
// loading; safe to share across threads.
struct TexturedMesh {
    std::vector<Vec3d> vertices;  // mm
    std::vector<Vec2d> texcoords; // [0,1]^2 after wrap normalization
    std::vector<Face> faces;

    Vec3d face_normal(size_t face_index) const;
    double z_min() const;
    double z_max() const;
};

enum class WrapMode { clamp, repeat };

// RGB luminance field in [0,1], row 0 at the image top. UV space puts
// v = 0 at the bottom row, matching mesh texture coordinates.
struct GrayTexture {
    int width = 0;
    int height = 0;
    std::vector<float> pixels; // row-major RGB triples
    WrapMode wrap = WrapMode::clamp;

    Eigen::Vector3f pixel(int x, int y) const
    {
        const size_t i = (static_cast<size_t>(y) * width + x) * 3;
        return Eigen::Vector3f(pixels[i], pixels[i + 1], pixels[i + 2]);
    }
};

// OBJ subset: `v x y z`, `vt u v`, `f a/at b/bt c/ct`, `#` comments; other
// records are skipped (collected in `warnings` when given). Faces must be
// triangles with texture indices on every corner and the mesh must be
// watertight (every edge shared by exactly two faces).
TexturedMesh load_mesh(const std::string& path, WrapMode uv_wrap = WrapMode::clamp,
                       std::vector<std::string>* warnings = nullptr);
TexturedMesh load_mesh(std::istream& in, WrapMode uv_wrap = WrapMode::clamp,
                       std::vector<std::string>* warnings = nullptr, const std::string& name = "<stream>");

void save_mesh(std::ostream& out, const TexturedMesh& mesh);
void save_mesh(const std::string& path, const TexturedMesh& mesh);

// PNG or binary PPM (P6) / PGM (P5) with maxval 255; grayscale sources are
// replicated to three channels.
GrayTexture load_texture(const std::string& path, WrapMode wrap = WrapMode::clamp);

// Bilinear sample; the wrap mode is applied before filtering, so every
// finite uv is valid.
Eigen::Vector3f sample_texture(const GrayTexture& tex, const Vec2d& uv);

} // namespace hatch
