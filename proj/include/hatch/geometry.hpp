// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace hatch {

// Polygon work happens on integer micrometers; mesh/UV/tone math on doubles (mm).
using coord_t = std::int32_t;
using PointUm = Eigen::Matrix<coord_t, 2, 1>;
using Vec2d = Eigen::Vector2d;
using Vec3d = Eigen::Vector3d;

constexpr double kUmPerMm = 1000.0;

inline coord_t to_um(double mm)
{
    return static_cast<coord_t>(std::llround(mm * kUmPerMm));
}

inline double to_mm(coord_t um)
{
    return static_cast<double>(um) / kUmPerMm;
}

inline PointUm to_um(const Vec2d& mm)
{
    return PointUm(to_um(mm.x()), to_um(mm.y()));
}

inline Vec2d to_mm(const PointUm& um)
{
    return Vec2d(to_mm(um.x()), to_mm(um.y()));
}

// Closed loop; the edge from back() to front() is implicit.
using Loop = std::vector<PointUm>;
using Loops = std::vector<Loop>;

// Twice the signed area in um^2; positive for counter-clockwise loops.
std::int64_t doubled_signed_area_um2(const Loop& loop);

double signed_area_mm2(const Loop& loop);
double signed_area_mm2(const Loops& loops);
double perimeter_mm(const Loop& loop);

// Winding number of a point w.r.t. a loop; points exactly on the boundary
// get an implementation-defined but finite value.
int winding_number(const Loop& loop, const PointUm& p);
int winding_number(const Loops& loops, const PointUm& p);

bool loop_contains(const Loop& loop, const PointUm& p);

struct Box2Um {
    PointUm min{std::numeric_limits<coord_t>::max(), std::numeric_limits<coord_t>::max()};
    PointUm max{std::numeric_limits<coord_t>::min(), std::numeric_limits<coord_t>::min()};
    void expand(const PointUm& p);
    bool empty() const { return min.x() > max.x(); }
};

Box2Um bounding_box(const Loops& loops);

// Raised by loaders, slicers, and solvers on invalid input; the CLI maps it
// to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace hatch
