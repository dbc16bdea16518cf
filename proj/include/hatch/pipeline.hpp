// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/emit.hpp"
#include "hatch/halftone.hpp"
#include "hatch/model_io.hpp"
#include "hatch/slicing.hpp"
#include "hatch/toolpath.hpp"
#include "hatch/variable_offset.hpp"

#include <string>
#include <vector>

namespace hatch {

struct SpeedConfig {
    double outer_wall = 15.0;
    double inner_wall = 25.0;
    double skin = 25.0;
    double infill = 25.0;
    double travel = 120.0;
    double reference = 25.0; // defines the constant flow together with line width
};

struct ToolpathConfig {
    double line_width = 0.35;
    int wall_count = 2;
    int top_layers = 4;
    int bottom_layers = 4;
    double skin_line_distance = 0.7;
    double skin_angle_degrees = 0.0;
    double infill_line_distance = 2.0;
    bool horizontal_hatch = true;
    double horizontal_sample_interval = 0.4;
    double width_floor_ratio = 0.02;
    SpeedConfig speeds;
};

struct EmitConfig {
    double filament_diameter = 2.85;
    bool write_svg = true;
    double svg_scale = 10.0;       // px per mm
    std::string gcode_header;      // empty: built-in minimal preamble
    std::string gcode_footer;
    std::string tool_change = "T{}";
};

struct JobConfig {
    std::string mesh_path;
    std::string texture_path;
    std::string output_dir = "out";
    WrapMode texture_wrap = WrapMode::clamp;
    halftone::Params<double> halftone;
    ViewingMode viewing; // perpendicular by default
    OffsetField offset;  // vertical sampling 0.1, static offset 0.1, bevel 1.1
    ToolpathConfig toolpath;
    EmitConfig emit;
    int threads = 0; // 0 = machine parallelism

    void validate() const;
    std::string to_json() const;
    static JobConfig from_json_text(const std::string& text);
    static JobConfig from_json_file(const std::string& path);
};

struct LayerStats {
    int walls = 0;
    double skin_area_mm2 = 0.0;
    double infill_area_mm2 = 0.0;
};

struct RunReport {
    int layer_count = 0;
    int polygon_count = 0;
    int solver_fallbacks = 0;
    int clamped_targets = 0;
    std::vector<LayerStats> layers;
    std::vector<std::string> warnings;
    double ms_slice = 0.0;
    double ms_variable_offset = 0.0;
    double ms_walls = 0.0;
    double ms_skin = 0.0;
    double ms_emit = 0.0;
    double ms_total = 0.0;
    std::string gcode_path;
    int svg_count = 0;

    std::string to_json() const;
};

struct SliceResult {
    std::vector<ToolpathLayer> layers;
    std::string gcode;
    RunReport report;
};

// Full pipeline: slice, offset outlines by tone, plan walls/skin/infill,
// hatch horizontal surfaces, emit. Writes print.gcode, layer_%04d.svg and
// report.json into the output directory unless `dry_run`.
SliceResult run_slice_job(const JobConfig& config, bool dry_run = false);

// Response-grid prediction used by the predict command.
struct PredictConfig {
    double n_degrees = 0.0;
    double phi_min_degrees = -80.0;
    double phi_max_degrees = 80.0;
    int phi_steps = 17;
    int r_steps = 11;
    halftone::Params<double> params;
};

std::string predict_csv(const PredictConfig& config);

} // namespace hatch
