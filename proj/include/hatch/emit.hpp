// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include "hatch/toolpath.hpp"

#include <string>
#include <vector>

namespace hatch {

// Paths of one printed layer; every path must use the layer's extruder.
struct ToolpathLayer {
    int index = 0;
    double z = 0.0; // nozzle height, mm
    int extruder = 0;
    std::vector<PrintPath> paths;
};

struct GcodePlan {
    std::string header;                 // empty: a minimal Marlin preamble
    std::string footer;                 // empty: heaters off, motors off
    std::string tool_change = "T{}";    // {} replaced by the tool number
    double filament_diameter = 2.85;
    double layer_thickness = 0.1;
    double travel_speed = 120.0; // mm/s
    // dark extruder first; even layers must use tool 0, odd layers tool 1
};

// Marlin-flavoured dual-extrusion G-code: absolute E per extruder, tool
// changes only at layer boundaries, E increments from the deposited
// cross-section over the filament cross-section. Deterministic formatting:
// coordinates to 3 decimals, E to 5.
std::string emit_gcode(const std::vector<ToolpathLayer>& layers, const GcodePlan& plan);

// One SVG per layer: stroked polylines with stroke-width = printed width,
// dark extruder black, light extruder light gray, travels dashed.
std::string emit_layer_svg(const ToolpathLayer& layer, double scale_px_per_mm);

// Total deposited volume implied by the E words of emitted G-code; test
// support for volume conservation checks.
double gcode_extruded_volume(const std::string& gcode, double filament_diameter);

} // namespace hatch
