// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#include "hatch/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

int run_slice(const std::string& config_path, int threads)
{
    hatch::JobConfig config = hatch::JobConfig::from_json_file(config_path);
    if (threads > 0)
        config.threads = threads;
    if (config.mesh_path.empty() || config.texture_path.empty())
        throw hatch::input_error("config must name a mesh and a texture");
    const hatch::SliceResult result = hatch::run_slice_job(config);
    std::cout << "layers: " << result.report.layer_count << "\n"
              << "gcode:  " << result.report.gcode_path << "\n"
              << "svgs:   " << result.report.svg_count << "\n"
              << "report: " << config.output_dir << "/report.json\n";
    for (const std::string& w : result.report.warnings)
        std::cerr << "warning: " << w << "\n";
    return 0;
}

bool parse_range(const std::string& text, double& lo, double& hi)
{
    const size_t colon = text.find(':');
    if (colon == std::string::npos)
        return false;
    try {
        lo = std::stod(text.substr(0, colon));
        hi = std::stod(text.substr(colon + 1));
    } catch (const std::exception&) {
        return false;
    }
    return true;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"mesh-to-toolpath planner with tone-driven outline hatching"};
    app.require_subcommand(1);

    std::string config_path;
    int threads = 0;
    CLI::App* slice = app.add_subcommand("slice", "run the full pipeline from a job config");
    slice->add_option("--config", config_path, "job config JSON")->required();
    slice->add_option("--threads", threads, "worker threads (default: machine parallelism)");

    double n_degrees = 0.0;
    std::string phi_range = "-80:80";
    int phi_steps = 33;
    int r_steps = 21;
    std::string out_path;
    hatch::PredictConfig predict_cfg;
    CLI::App* predict = app.add_subcommand("predict", "write the predicted tone response grid as CSV");
    predict->add_option("--n", n_degrees, "surface angle in degrees (0 = vertical wall)");
    predict->add_option("--phi-range", phi_range, "viewing angle range relative to the surface, \"lo:hi\" degrees");
    predict->add_option("--steps", phi_steps, "rows in the phi direction");
    predict->add_option("--r-steps", r_steps, "columns across the tone gradient");
    predict->add_option("--layer-thickness", predict_cfg.params.layer_thickness, "layer thickness, mm");
    predict->add_option("--full-occlusion", predict_cfg.params.full_occlusion, "full side-view occlusion overhang, mm");
    predict->add_option("--out", out_path, "output CSV path (default: stdout)");

    CLI::App* init = app.add_subcommand("init-config", "print a config with all defaults");

    CLI11_PARSE(app, argc, argv);

    try {
        if (slice->parsed())
            return run_slice(config_path, threads);
        if (predict->parsed()) {
            predict_cfg.n_degrees = n_degrees;
            if (!parse_range(phi_range, predict_cfg.phi_min_degrees, predict_cfg.phi_max_degrees))
                throw hatch::input_error("--phi-range must look like \"-80:80\"");
            predict_cfg.phi_steps = phi_steps;
            predict_cfg.r_steps = r_steps;
            const std::string csv = hatch::predict_csv(predict_cfg);
            if (out_path.empty()) {
                std::cout << csv;
            } else {
                std::ofstream out(out_path, std::ios::binary);
                if (!out)
                    throw std::runtime_error("cannot write " + out_path);
                out << csv;
            }
            return 0;
        }
        if (init->parsed()) {
            std::cout << hatch::JobConfig{}.to_json();
            return 0;
        }
    } catch (const hatch::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
