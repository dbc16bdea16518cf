// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/model_io.hpp"

#include <png.h>

#include <algorithm>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

namespace hatch {

Vec3d TexturedMesh::face_normal(size_t face_index) const
{
    const Face& f = faces[face_index];
    const Vec3d& a = vertices[f.vertex[0]];
    const Vec3d& b = vertices[f.vertex[1]];
    const Vec3d& c = vertices[f.vertex[2]];
    Vec3d n = (b - a).cross(c - a);
    const double len = n.norm();
    if (len <= 0.0)
        return Vec3d::Zero();
    return n / len;
}

double TexturedMesh::z_min() const
{
    double z = std::numeric_limits<double>::infinity();
    for (const Vec3d& v : vertices)
        z = std::min(z, v.z());
    return z;
}

double TexturedMesh::z_max() const
{
    double z = -std::numeric_limits<double>::infinity();
    for (const Vec3d& v : vertices)
        z = std::max(z, v.z());
    return z;
}

namespace {

double wrap_coord(double t, WrapMode mode)
{
    if (mode == WrapMode::repeat) {
        t = t - std::floor(t);
        return t;
    }
    return std::clamp(t, 0.0, 1.0);
}

[[noreturn]] void parse_fail(const std::string& name, int line, const std::string& msg)
{
    throw input_error(name + ":" + std::to_string(line) + ": " + msg);
}

void check_watertight(const TexturedMesh& mesh, const std::string& name)
{
    std::map<std::pair<int, int>, int> edge_count;
    for (const Face& f : mesh.faces) {
        for (int i = 0; i < 3; ++i) {
            int a = f.vertex[i];
            int b = f.vertex[(i + 1) % 3];
            if (a > b)
                std::swap(a, b);
            ++edge_count[{a, b}];
        }
    }
    std::string offending;
    int bad = 0;
    for (const auto& [edge, count] : edge_count) {
        if (count != 2) {
            if (++bad <= 8) {
                offending += " (" + std::to_string(edge.first + 1) + "," + std::to_string(edge.second + 1) + ")x"
                           + std::to_string(count);
            }
        }
    }
    if (bad > 0) {
        throw input_error(name + ": mesh is not watertight; " + std::to_string(bad)
                          + " edge(s) not shared by exactly 2 faces:" + offending
                          + (bad > 8 ? " ..." : ""));
    }
}

} // namespace

TexturedMesh load_mesh(std::istream& in, WrapMode uv_wrap, std::vector<std::string>* warnings, const std::string& name)
{
    TexturedMesh mesh;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        // strip comments and trailing CR
        if (const size_t hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
            line.pop_back();
        if (line.empty())
            continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "v") {
            Vec3d v;
            if (!(ls >> v.x() >> v.y() >> v.z()))
                parse_fail(name, lineno, "malformed vertex record");
            mesh.vertices.push_back(v);
        } else if (tag == "vt") {
            Vec2d t;
            if (!(ls >> t.x() >> t.y()))
                parse_fail(name, lineno, "malformed texture coordinate record");
            t.x() = wrap_coord(t.x(), uv_wrap);
            t.y() = wrap_coord(t.y(), uv_wrap);
            mesh.texcoords.push_back(t);
        } else if (tag == "f") {
            Face face{};
            for (int i = 0; i < 3; ++i) {
                std::string corner;
                if (!(ls >> corner))
                    parse_fail(name, lineno, "face needs 3 corners");
                const size_t slash = corner.find('/');
                if (slash == std::string::npos || slash + 1 >= corner.size())
                    parse_fail(name, lineno, "face corner '" + corner + "' is missing a texture index");
                size_t second = corner.find('/', slash + 1);
                const std::string vs = corner.substr(0, slash);
                const std::string ts = corner.substr(slash + 1, second == std::string::npos ? std::string::npos
                                                                                            : second - slash - 1);
                if (ts.empty())
                    parse_fail(name, lineno, "face corner '" + corner + "' is missing a texture index");
                int vi = 0, ti = 0;
                try {
                    vi = std::stoi(vs);
                    ti = std::stoi(ts);
                } catch (const std::exception&) {
                    parse_fail(name, lineno, "face corner '" + corner + "' has a malformed index");
                }
                if (vi <= 0 || ti <= 0)
                    parse_fail(name, lineno, "only positive 1-based indices are supported");
                if (vi > static_cast<int>(mesh.vertices.size()))
                    parse_fail(name, lineno, "vertex index " + std::to_string(vi) + " out of range");
                if (ti > static_cast<int>(mesh.texcoords.size()))
                    parse_fail(name, lineno, "texture index " + std::to_string(ti) + " out of range");
                face.vertex[i] = vi - 1;
                face.texcoord[i] = ti - 1;
            }
            std::string extra;
            if (ls >> extra)
                parse_fail(name, lineno, "only triangular faces are supported");
            mesh.faces.push_back(face);
        } else {
            if (warnings)
                warnings->push_back(name + ":" + std::to_string(lineno) + ": ignoring '" + tag + "' record");
        }
    }
    if (mesh.faces.empty())
        throw input_error(name + ": no faces");
    check_watertight(mesh, name);
    return mesh;
}

TexturedMesh load_mesh(const std::string& path, WrapMode uv_wrap, std::vector<std::string>* warnings)
{
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open mesh file: " + path);
    return load_mesh(in, uv_wrap, warnings, path);
}

void save_mesh(std::ostream& out, const TexturedMesh& mesh)
{
    char buf[128];
    for (const Vec3d& v : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.9g %.9g %.9g\n", v.x(), v.y(), v.z());
        out << buf;
    }
    for (const Vec2d& t : mesh.texcoords) {
        std::snprintf(buf, sizeof buf, "vt %.9g %.9g\n", t.x(), t.y());
        out << buf;
    }
    for (const Face& f : mesh.faces) {
        std::snprintf(buf, sizeof buf, "f %d/%d %d/%d %d/%d\n", f.vertex[0] + 1, f.texcoord[0] + 1,
                      f.vertex[1] + 1, f.texcoord[1] + 1, f.vertex[2] + 1, f.texcoord[2] + 1);
        out << buf;
    }
}

void save_mesh(const std::string& path, const TexturedMesh& mesh)
{
    std::ofstream out(path);
    if (!out)
        throw input_error("cannot write mesh file: " + path);
    save_mesh(out, mesh);
}

namespace {

GrayTexture load_pnm(std::ifstream& in, const std::string& path)
{
    auto next_token = [&]() -> std::string {
        std::string tok;
        int c;
        while ((c = in.get()) != EOF) {
            if (c == '#') {
                while ((c = in.get()) != EOF && c != '\n') {
                }
                continue;
            }
            if (std::isspace(c)) {
                if (!tok.empty())
                    return tok;
                continue;
            }
            tok.push_back(static_cast<char>(c));
        }
        return tok;
    };

    const std::string magic = next_token();
    const bool color = magic == "P6";
    if (!color && magic != "P5")
        throw input_error(path + ": unsupported PNM magic '" + magic + "' (want P5 or P6)");
    GrayTexture tex;
    try {
        tex.width = std::stoi(next_token());
        tex.height = std::stoi(next_token());
        const int maxval = std::stoi(next_token());
        if (maxval != 255)
            throw input_error(path + ": only maxval 255 is supported");
    } catch (const input_error&) {
        throw;
    } catch (const std::exception&) {
        throw input_error(path + ": malformed PNM header");
    }
    if (tex.width < 1 || tex.height < 1)
        throw input_error(path + ": image dimensions must be at least 1x1");
    const size_t samples = static_cast<size_t>(tex.width) * tex.height * (color ? 3 : 1);
    std::vector<unsigned char> raw(samples);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(samples));
    if (static_cast<size_t>(in.gcount()) != samples)
        throw input_error(path + ": truncated pixel data");
    tex.pixels.resize(static_cast<size_t>(tex.width) * tex.height * 3);
    for (size_t i = 0, n = static_cast<size_t>(tex.width) * tex.height; i < n; ++i) {
        if (color) {
            tex.pixels[i * 3 + 0] = raw[i * 3 + 0] / 255.0f;
            tex.pixels[i * 3 + 1] = raw[i * 3 + 1] / 255.0f;
            tex.pixels[i * 3 + 2] = raw[i * 3 + 2] / 255.0f;
        } else {
            const float g = raw[i] / 255.0f;
            tex.pixels[i * 3 + 0] = g;
            tex.pixels[i * 3 + 1] = g;
            tex.pixels[i * 3 + 2] = g;
        }
    }
    return tex;
}

struct PngReadCloser {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* file = nullptr;
    ~PngReadCloser()
    {
        if (png)
            png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (file)
            std::fclose(file);
    }
};

GrayTexture load_png(const std::string& path)
{
    PngReadCloser ctx;
    ctx.file = std::fopen(path.c_str(), "rb");
    if (!ctx.file)
        throw input_error("cannot open texture file: " + path);
    ctx.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!ctx.png)
        throw std::runtime_error("png_create_read_struct failed");
    ctx.info = png_create_info_struct(ctx.png);
    if (!ctx.info)
        throw std::runtime_error("png_create_info_struct failed");
    if (setjmp(png_jmpbuf(ctx.png)))
        throw input_error(path + ": corrupt PNG data");
    png_init_io(ctx.png, ctx.file);
    png_read_info(ctx.png, ctx.info);

    // normalize every variant to 8-bit RGB
    png_set_expand(ctx.png);
    png_set_strip_16(ctx.png);
    png_set_strip_alpha(ctx.png);
    png_set_gray_to_rgb(ctx.png);
    png_read_update_info(ctx.png, ctx.info);

    GrayTexture tex;
    tex.width = static_cast<int>(png_get_image_width(ctx.png, ctx.info));
    tex.height = static_cast<int>(png_get_image_height(ctx.png, ctx.info));
    if (tex.width < 1 || tex.height < 1)
        throw input_error(path + ": image dimensions must be at least 1x1");
    if (png_get_channels(ctx.png, ctx.info) != 3)
        throw input_error(path + ": unsupported PNG channel layout");
    std::vector<unsigned char> raw(static_cast<size_t>(tex.width) * tex.height * 3);
    std::vector<png_bytep> rows(tex.height);
    for (int y = 0; y < tex.height; ++y)
        rows[y] = raw.data() + static_cast<size_t>(y) * tex.width * 3;
    png_read_image(ctx.png, rows.data());
    png_read_end(ctx.png, nullptr);

    tex.pixels.resize(raw.size());
    for (size_t i = 0; i < raw.size(); ++i)
        tex.pixels[i] = raw[i] / 255.0f;
    return tex;
}

} // namespace

GrayTexture load_texture(const std::string& path, WrapMode wrap)
{
    std::ifstream probe(path, std::ios::binary);
    if (!probe)
        throw input_error("cannot open texture file: " + path);
    unsigned char sig[8] = {};
    probe.read(reinterpret_cast<char*>(sig), 8);
    const size_t got = static_cast<size_t>(probe.gcount());
    GrayTexture tex;
    if (got >= 8 && png_sig_cmp(sig, 0, 8) == 0) {
        probe.close();
        tex = load_png(path);
    } else if (got >= 2 && sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) {
        probe.seekg(0);
        tex = load_pnm(probe, path);
    } else {
        throw input_error(path + ": unsupported texture format (want PNG, P5 PGM, or P6 PPM)");
    }
    tex.wrap = wrap;
    return tex;
}

Eigen::Vector3f sample_texture(const GrayTexture& tex, const Vec2d& uv)
{
    const double u = wrap_coord(uv.x(), tex.wrap);
    const double v = wrap_coord(uv.y(), tex.wrap);
    // v = 0 is the bottom of the image, pixel centres at (i + 0.5) / size
    const double fx = u * tex.width - 0.5;
    const double fy = (1.0 - v) * tex.height - 0.5;
    const int x0 = static_cast<int>(std::floor(fx));
    const int y0 = static_cast<int>(std::floor(fy));
    const double tx = fx - x0;
    const double ty = fy - y0;
    auto index = [&](int x, int axis_size) {
        if (tex.wrap == WrapMode::repeat)
            return ((x % axis_size) + axis_size) % axis_size;
        return std::clamp(x, 0, axis_size - 1);
    };
    const int xa = index(x0, tex.width);
    const int xb = index(x0 + 1, tex.width);
    const int ya = index(y0, tex.height);
    const int yb = index(y0 + 1, tex.height);
    const Eigen::Vector3f top = tex.pixel(xa, ya) * float(1.0 - tx) + tex.pixel(xb, ya) * float(tx);
    const Eigen::Vector3f bot = tex.pixel(xa, yb) * float(1.0 - tx) + tex.pixel(xb, yb) * float(tx);
    return top * float(1.0 - ty) + bot * float(ty);
}

} // namespace hatch
