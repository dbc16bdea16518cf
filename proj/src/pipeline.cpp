// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/pipeline.hpp"

#include "hatch/parallel.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace hatch {

using nlohmann::json;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

json viewing_to_json(const ViewingMode& v)
{
    if (v.perpendicular)
        return "perpendicular";
    return json{{"angle_degrees", v.alpha * 180.0 / M_PI}};
}

ViewingMode viewing_from_json(const json& j)
{
    if (j.is_string()) {
        if (j.get<std::string>() != "perpendicular")
            throw input_error("viewing must be \"perpendicular\" or {\"angle_degrees\": ...}");
        return ViewingMode::perp();
    }
    const double degrees = j.at("angle_degrees").get<double>();
    if (!(degrees > -90.0 && degrees < 90.0))
        throw input_error("viewing angle must be inside (-90, 90) degrees");
    return ViewingMode::fixed(degrees * M_PI / 180.0);
}

} // namespace

void JobConfig::validate() const
{
    halftone.validate();
    if (!(offset.sample_interval_mm > 0.0) || !(toolpath.line_width > 0.0) || !(toolpath.skin_line_distance > 0.0)
        || !(toolpath.infill_line_distance > 0.0) || !(toolpath.horizontal_sample_interval > 0.0)
        || !(emit.filament_diameter > 0.0))
        throw input_error("all lengths must be > 0");
    if (!(offset.bevel_ratio > 1.0))
        throw input_error("bevel ratio must be > 1");
    if (toolpath.wall_count < 1)
        throw input_error("wall count must be >= 1");
    if (!viewing.perpendicular && !(viewing.alpha > -M_PI / 2 && viewing.alpha < M_PI / 2))
        throw input_error("viewing angle must be inside (-90, 90) degrees");
}

std::string JobConfig::to_json() const
{
    json j;
    j["mesh"] = mesh_path;
    j["texture"] = texture_path;
    j["output_dir"] = output_dir;
    j["texture_wrap"] = texture_wrap == WrapMode::clamp ? "clamp" : "repeat";
    j["halftone"] = {{"layer_thickness", halftone.layer_thickness},
                     {"full_occlusion", halftone.full_occlusion},
                     {"gamma", halftone.gamma},
                     {"line_width", halftone.line_width}};
    j["viewing"] = viewing_to_json(viewing);
    j["offset"] = {{"sample_interval", offset.sample_interval_mm},
                   {"bevel_ratio", offset.bevel_ratio},
                   {"static_offset", offset.static_offset_mm}};
    j["toolpath"] = {{"line_width", toolpath.line_width},
                     {"wall_count", toolpath.wall_count},
                     {"top_layers", toolpath.top_layers},
                     {"bottom_layers", toolpath.bottom_layers},
                     {"skin_line_distance", toolpath.skin_line_distance},
                     {"skin_angle_degrees", toolpath.skin_angle_degrees},
                     {"infill_line_distance", toolpath.infill_line_distance},
                     {"horizontal_hatch", toolpath.horizontal_hatch},
                     {"horizontal_sample_interval", toolpath.horizontal_sample_interval},
                     {"width_floor_ratio", toolpath.width_floor_ratio},
                     {"speeds",
                      {{"outer_wall", toolpath.speeds.outer_wall},
                       {"inner_wall", toolpath.speeds.inner_wall},
                       {"skin", toolpath.speeds.skin},
                       {"infill", toolpath.speeds.infill},
                       {"travel", toolpath.speeds.travel},
                       {"reference", toolpath.speeds.reference}}}};
    j["emit"] = {{"filament_diameter", emit.filament_diameter},
                 {"write_svg", emit.write_svg},
                 {"svg_scale", emit.svg_scale},
                 {"gcode_header", emit.gcode_header},
                 {"gcode_footer", emit.gcode_footer},
                 {"tool_change", emit.tool_change}};
    j["threads"] = threads;
    return j.dump(2) + "\n";
}

JobConfig JobConfig::from_json_text(const std::string& text)
{
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw input_error(std::string("config is not valid JSON: ") + e.what());
    }
    JobConfig c;
    try {
        c.mesh_path = j.value("mesh", c.mesh_path);
        c.texture_path = j.value("texture", c.texture_path);
        c.output_dir = j.value("output_dir", c.output_dir);
        if (j.contains("texture_wrap")) {
            const std::string w = j["texture_wrap"].get<std::string>();
            if (w == "clamp")
                c.texture_wrap = WrapMode::clamp;
            else if (w == "repeat")
                c.texture_wrap = WrapMode::repeat;
            else
                throw input_error("texture_wrap must be clamp or repeat");
        }
        if (j.contains("halftone")) {
            const json& h = j["halftone"];
            c.halftone.layer_thickness = h.value("layer_thickness", c.halftone.layer_thickness);
            c.halftone.full_occlusion = h.value("full_occlusion", c.halftone.full_occlusion);
            c.halftone.gamma = h.value("gamma", c.halftone.gamma);
            c.halftone.line_width = h.value("line_width", c.halftone.line_width);
        }
        if (j.contains("viewing"))
            c.viewing = viewing_from_json(j["viewing"]);
        if (j.contains("offset")) {
            const json& o = j["offset"];
            c.offset.sample_interval_mm = o.value("sample_interval", c.offset.sample_interval_mm);
            c.offset.bevel_ratio = o.value("bevel_ratio", c.offset.bevel_ratio);
            c.offset.static_offset_mm = o.value("static_offset", c.offset.static_offset_mm);
        }
        if (j.contains("toolpath")) {
            const json& t = j["toolpath"];
            c.toolpath.line_width = t.value("line_width", c.toolpath.line_width);
            c.toolpath.wall_count = t.value("wall_count", c.toolpath.wall_count);
            c.toolpath.top_layers = t.value("top_layers", c.toolpath.top_layers);
            c.toolpath.bottom_layers = t.value("bottom_layers", c.toolpath.bottom_layers);
            c.toolpath.skin_line_distance = t.value("skin_line_distance", c.toolpath.skin_line_distance);
            c.toolpath.skin_angle_degrees = t.value("skin_angle_degrees", c.toolpath.skin_angle_degrees);
            c.toolpath.infill_line_distance = t.value("infill_line_distance", c.toolpath.infill_line_distance);
            c.toolpath.horizontal_hatch = t.value("horizontal_hatch", c.toolpath.horizontal_hatch);
            c.toolpath.horizontal_sample_interval =
                t.value("horizontal_sample_interval", c.toolpath.horizontal_sample_interval);
            c.toolpath.width_floor_ratio = t.value("width_floor_ratio", c.toolpath.width_floor_ratio);
            if (t.contains("speeds")) {
                const json& s = t["speeds"];
                c.toolpath.speeds.outer_wall = s.value("outer_wall", c.toolpath.speeds.outer_wall);
                c.toolpath.speeds.inner_wall = s.value("inner_wall", c.toolpath.speeds.inner_wall);
                c.toolpath.speeds.skin = s.value("skin", c.toolpath.speeds.skin);
                c.toolpath.speeds.infill = s.value("infill", c.toolpath.speeds.infill);
                c.toolpath.speeds.travel = s.value("travel", c.toolpath.speeds.travel);
                c.toolpath.speeds.reference = s.value("reference", c.toolpath.speeds.reference);
            }
        }
        if (j.contains("emit")) {
            const json& e = j["emit"];
            c.emit.filament_diameter = e.value("filament_diameter", c.emit.filament_diameter);
            c.emit.write_svg = e.value("write_svg", c.emit.write_svg);
            c.emit.svg_scale = e.value("svg_scale", c.emit.svg_scale);
            c.emit.gcode_header = e.value("gcode_header", c.emit.gcode_header);
            c.emit.gcode_footer = e.value("gcode_footer", c.emit.gcode_footer);
            c.emit.tool_change = e.value("tool_change", c.emit.tool_change);
        }
        c.threads = j.value("threads", c.threads);
    } catch (const json::exception& e) {
        throw input_error(std::string("malformed config: ") + e.what());
    }
    c.validate();
    return c;
}

JobConfig JobConfig::from_json_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw input_error("cannot open config file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json_text(ss.str());
}

std::string RunReport::to_json() const
{
    json j;
    j["layer_count"] = layer_count;
    j["polygon_count"] = polygon_count;
    j["solver_fallbacks"] = solver_fallbacks;
    j["clamped_targets"] = clamped_targets;
    json stats = json::array();
    for (const LayerStats& s : layers)
        stats.push_back({{"walls", s.walls}, {"skin_mm2", s.skin_area_mm2}, {"infill_mm2", s.infill_area_mm2}});
    j["layers"] = stats;
    j["warnings"] = warnings;
    j["timings_ms"] = {{"slice", ms_slice},   {"variable_offset", ms_variable_offset}, {"walls", ms_walls},
                       {"skin", ms_skin},     {"emit", ms_emit},                       {"total", ms_total}};
    j["gcode"] = gcode_path;
    j["svg_count"] = svg_count;
    return j.dump(2) + "\n";
}

namespace {

// Barycentric UV lookup over the near-horizontal faces of the mesh,
// projected to the XY plane. Points outside every triangle take the UV of
// the triangle with the nearest centroid.
struct SurfaceUvMap {
    struct Tri {
        Vec2d a, b, c;
        Vec2d uva, uvb, uvc;
        Vec2d centroid;
    };
    std::vector<Tri> tris;

    static SurfaceUvMap build(const TexturedMesh& mesh, bool top)
    {
        SurfaceUvMap map;
        for (size_t f = 0; f < mesh.faces.size(); ++f) {
            const Vec3d n = mesh.face_normal(f);
            if ((top && n.z() <= 0.5) || (!top && n.z() >= -0.5))
                continue;
            const Face& face = mesh.faces[f];
            Tri t;
            t.a = mesh.vertices[face.vertex[0]].head<2>();
            t.b = mesh.vertices[face.vertex[1]].head<2>();
            t.c = mesh.vertices[face.vertex[2]].head<2>();
            t.uva = mesh.texcoords[face.texcoord[0]];
            t.uvb = mesh.texcoords[face.texcoord[1]];
            t.uvc = mesh.texcoords[face.texcoord[2]];
            t.centroid = (t.a + t.b + t.c) / 3.0;
            map.tris.push_back(t);
        }
        return map;
    }

    Vec2d uv_at(const Vec2d& p) const
    {
        const Tri* nearest = nullptr;
        double nearest_d2 = std::numeric_limits<double>::infinity();
        for (const Tri& t : tris) {
            const Vec2d v0 = t.b - t.a;
            const Vec2d v1 = t.c - t.a;
            const Vec2d v2 = p - t.a;
            const double den = v0.x() * v1.y() - v1.x() * v0.y();
            if (den != 0.0) {
                const double u = (v2.x() * v1.y() - v1.x() * v2.y()) / den;
                const double v = (v0.x() * v2.y() - v2.x() * v0.y()) / den;
                if (u >= -1e-9 && v >= -1e-9 && u + v <= 1.0 + 1e-9)
                    return t.uva + u * (t.uvb - t.uva) + v * (t.uvc - t.uva);
            }
            const double d2 = (p - t.centroid).squaredNorm();
            if (d2 < nearest_d2) {
                nearest_d2 = d2;
                nearest = &t;
            }
        }
        if (!nearest)
            return Vec2d(0.5, 0.5);
        return (nearest->uva + nearest->uvb + nearest->uvc) / 3.0;
    }
};

std::vector<PrintPath> wall_paths(const WallSet& walls, const ToolpathConfig& cfg, int extruder)
{
    std::vector<PrintPath> paths;
    for (size_t w = 0; w < walls.walls.size(); ++w) {
        for (const Loop& loop : walls.walls[w]) {
            PrintPath path;
            path.role = w == 0 ? PathRole::outer_wall : PathRole::inner_wall;
            path.extruder = extruder;
            path.closed = true;
            path.points.reserve(loop.size());
            for (const PointUm& p : loop)
                path.points.push_back(to_mm(p));
            const double speed = w == 0 ? cfg.speeds.outer_wall : cfg.speeds.inner_wall;
            path.width.assign(loop.size(), cfg.line_width);
            path.speed.assign(loop.size(), speed);
            paths.push_back(std::move(path));
        }
    }
    return paths;
}

PrintPath line_path(const SkinLine& line, double width, double speed, PathRole role, int extruder)
{
    PrintPath path;
    path.role = role;
    path.extruder = extruder;
    path.points = {line.a, line.b};
    path.width = {width};
    path.speed = {speed};
    return path;
}

} // namespace

SliceResult run_slice_job(const JobConfig& config, bool dry_run)
{
    config.validate();
    const auto t_total = std::chrono::steady_clock::now();
    const int threads = config.threads > 0 ? config.threads : default_thread_count();

    SliceResult result;
    RunReport& report = result.report;

    std::vector<std::string> load_warnings;
    const TexturedMesh mesh = load_mesh(config.mesh_path, config.texture_wrap, &load_warnings);
    const GrayTexture texture = load_texture(config.texture_path, config.texture_wrap);
    report.warnings = load_warnings;

    auto t0 = std::chrono::steady_clock::now();
    const std::vector<LayerOutline> outlines =
        slice_mesh(mesh, config.halftone.layer_thickness, threads);
    report.ms_slice = ms_since(t0);
    report.layer_count = static_cast<int>(outlines.size());

    // tone-driven outline displacement, per layer colour
    t0 = std::chrono::steady_clock::now();
    std::vector<Loops> displaced(outlines.size());
    std::vector<OffsetDiagnostics> diags(outlines.size());
    parallel_for(outlines.size(), threads, [&](size_t k) {
        const LayerColor color = (k % 2 == 0) ? LayerColor::black : LayerColor::white;
        const std::vector<DisplacedPolygon> polys =
            apply_variable_offset(outlines[k], texture, config.halftone, color, config.offset, config.viewing,
                                  &diags[k]);
        Loops loops;
        loops.reserve(polys.size());
        for (const DisplacedPolygon& p : polys)
            loops.push_back(p.points);
        displaced[k] = std::move(loops);
    });
    report.ms_variable_offset = ms_since(t0);
    for (const OffsetDiagnostics& d : diags) {
        report.solver_fallbacks += d.solver_fallbacks;
        report.clamped_targets += d.clamped_targets;
        for (const std::string& w : d.warnings)
            if (report.warnings.size() < 64)
                report.warnings.push_back(w);
    }

    // walls
    t0 = std::chrono::steady_clock::now();
    std::vector<WallSet> walls(outlines.size());
    parallel_for(outlines.size(), threads, [&](size_t k) {
        walls[k] = generate_walls(displaced[k], config.toolpath.line_width, config.toolpath.wall_count);
    });
    report.ms_walls = ms_since(t0);

    // skin / infill
    t0 = std::chrono::steady_clock::now();
    std::vector<Loops> inner(outlines.size());
    for (size_t k = 0; k < outlines.size(); ++k)
        inner[k] = walls[k].inner_region;
    const std::vector<SkinRegions> skins =
        compute_skin_regions(inner, config.toolpath.top_layers, config.toolpath.bottom_layers, threads);

    const SurfaceUvMap top_uv = SurfaceUvMap::build(mesh, true);
    const SurfaceUvMap bottom_uv = SurfaceUvMap::build(mesh, false);
    const FlowModel flow = FlowModel::from_reference(config.toolpath.speeds.reference, config.toolpath.line_width,
                                                     config.halftone.layer_thickness);

    result.layers.resize(outlines.size());
    report.layers.resize(outlines.size());
    parallel_for(outlines.size(), threads, [&](size_t k) {
        const int extruder = static_cast<int>(k % 2);
        ToolpathLayer& layer = result.layers[k];
        layer.index = static_cast<int>(k);
        layer.z = (static_cast<double>(k) + 1.0) * config.halftone.layer_thickness;
        layer.extruder = extruder;
        layer.paths = wall_paths(walls[k], config.toolpath, extruder);

        const double skin_angle = config.toolpath.skin_angle_degrees * M_PI / 180.0;
        const bool hatch_this =
            config.toolpath.horizontal_hatch && (k == 0 || k + 1 == outlines.size()) && !skins[k].skin.empty();
        if (hatch_this) {
            const std::vector<SkinLine> lines =
                fill_skin(skins[k].skin, config.toolpath.skin_line_distance, skin_angle);
            HorizontalHatchConfig hcfg;
            hcfg.line_distance = config.toolpath.skin_line_distance;
            hcfg.sample_interval = config.toolpath.horizontal_sample_interval;
            hcfg.width_floor_ratio = config.toolpath.width_floor_ratio;
            hcfg.gamma = config.halftone.gamma;
            const SurfaceUvMap& map = k == 0 ? bottom_uv : top_uv;
            const UvMapFn uv_fn = [&map](const Vec2d& xy) { return map.uv_at(xy); };
            const LayerColor color = (k % 2 == 0) ? LayerColor::black : LayerColor::white;
            std::vector<PrintPath> hatch = horizontal_hatch(lines, texture, uv_fn, flow, hcfg, color);
            for (PrintPath& p : hatch) {
                p.extruder = extruder;
                layer.paths.push_back(std::move(p));
            }
        } else if (!skins[k].skin.empty()) {
            // dense skin: adjacent full-width lines
            for (const SkinLine& line : fill_skin(skins[k].skin, config.toolpath.line_width, skin_angle))
                layer.paths.push_back(
                    line_path(line, config.toolpath.line_width, config.toolpath.speeds.skin, PathRole::skin, extruder));
        }
        if (!skins[k].infill.empty()) {
            const double angle = (k % 2 == 0 ? 45.0 : 135.0) * M_PI / 180.0;
            for (const SkinLine& line : fill_skin(skins[k].infill, config.toolpath.infill_line_distance, angle))
                layer.paths.push_back(line_path(line, config.toolpath.line_width, config.toolpath.speeds.infill,
                                                PathRole::infill, extruder));
        }

        LayerStats& stats = report.layers[k];
        for (const Loops& w : walls[k].walls)
            stats.walls += static_cast<int>(!w.empty());
        stats.skin_area_mm2 = signed_area_mm2(skins[k].skin);
        stats.infill_area_mm2 = signed_area_mm2(skins[k].infill);
    });
    for (const Loops& d : displaced)
        report.polygon_count += static_cast<int>(d.size());
    report.ms_skin = ms_since(t0);

    // emit
    t0 = std::chrono::steady_clock::now();
    GcodePlan plan;
    plan.filament_diameter = config.emit.filament_diameter;
    plan.layer_thickness = config.halftone.layer_thickness;
    plan.travel_speed = config.toolpath.speeds.travel;
    plan.header = config.emit.gcode_header;
    plan.footer = config.emit.gcode_footer;
    if (!config.emit.tool_change.empty())
        plan.tool_change = config.emit.tool_change;
    result.gcode = emit_gcode(result.layers, plan);

    if (!dry_run) {
        namespace fs = std::filesystem;
        fs::create_directories(config.output_dir);
        const std::string gcode_path = config.output_dir + "/print.gcode";
        std::ofstream out(gcode_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot write " + gcode_path);
        out << result.gcode;
        report.gcode_path = gcode_path;
        if (config.emit.write_svg) {
            char name[32];
            for (const ToolpathLayer& layer : result.layers) {
                std::snprintf(name, sizeof name, "/layer_%04d.svg", layer.index);
                std::ofstream svg(config.output_dir + name, std::ios::binary);
                svg << emit_layer_svg(layer, config.emit.svg_scale);
                ++report.svg_count;
            }
        }
    }
    report.ms_emit = ms_since(t0);
    report.ms_total = ms_since(t_total);

    if (!dry_run) {
        std::ofstream rep(config.output_dir + "/report.json", std::ios::binary);
        rep << report.to_json();
    }
    return result;
}

std::string predict_csv(const PredictConfig& config)
{
    config.params.validate();
    if (config.phi_steps < 1 || config.r_steps < 1)
        throw input_error("phi and r step counts must be >= 1");
    if (!(config.phi_min_degrees <= config.phi_max_degrees))
        throw input_error("phi range is inverted");
    std::vector<double> phis(config.phi_steps);
    for (int i = 0; i < config.phi_steps; ++i) {
        const double t = config.phi_steps == 1 ? 0.0 : static_cast<double>(i) / (config.phi_steps - 1);
        phis[i] = (config.phi_min_degrees + (config.phi_max_degrees - config.phi_min_degrees) * t) * M_PI / 180.0;
    }
    std::vector<double> targets(config.r_steps);
    for (int j = 0; j < config.r_steps; ++j)
        targets[j] = config.r_steps == 1 ? 0.5 : static_cast<double>(j) / (config.r_steps - 1);
    const double n = config.n_degrees * M_PI / 180.0;
    const Eigen::MatrixXd grid = halftone::response_grid(n, phis, targets, config.params);
    std::ostringstream out;
    halftone::write_response_csv(out, grid, phis, targets);
    return out.str();
}

} // namespace hatch
