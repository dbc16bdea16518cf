// Copyright (c) 2026 hatchslicer contributors.
// hatchslicer is released under the terms of the Apache-2.0 license.
//
// Tone model for line-based halftoning of dual-color FDM prints.
//
// A print alternates dark (even) and light (odd) layers. On a sloped wall
// each layer shows a stair step of width d = h*tan(n) plus a side of height
// h; displacing the outlines of the two colors in opposite directions shifts
// the visible ratio between them. Once a layer is pushed past the one below
// (2|delta| > d) it overhangs and droops, occluding the layer below; the
// drooped side is modelled as a circle that recedes and drops as the
// overhang grows. All functions here are pure.
//
// Angle conventions (radians):
//   n     angle between the surface normal and the horizontal plane;
//         n = 0 is a vertical wall, n = pi/2 a horizontal top.
//   alpha viewing elevation; alpha = n looks along the normal.
//
// Sign conventions (mm):
//   Offsets returned by the solvers apply to the dark layers; positive
//   darkens. Light layers receive the negated value. The forward ratio
//   functions take the light-layer offset.
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <vector>

namespace hatch::halftone {

class degenerate_projection : public std::domain_error {
public:
    degenerate_projection() : std::domain_error("projected layer extent is not positive") {}
};

class degenerate_slope : public std::domain_error {
public:
    degenerate_slope() : std::domain_error("horizontal surface has no stair steps to offset") {}
};

template <typename Scalar = double>
struct Params {
    Scalar layer_thickness = Scalar(0.1);  // h
    Scalar full_occlusion = Scalar(0.2);   // overhang that fully hides the layer below, side view
    Scalar gamma = Scalar(2.2);
    Scalar line_width = Scalar(0.35);      // no further sagging past one line width

    // Ratio between the recession of the drooped side's circle centre and
    // the overhang producing it. Derived so that the circle spans exactly
    // one layer height at full_occlusion.
    Scalar recede_ratio() const
    {
        return Scalar(1) - std::sqrt(Scalar(2)) * layer_thickness / full_occlusion;
    }

    void validate() const
    {
        if (!(layer_thickness > Scalar(0)))
            throw std::invalid_argument("layer_thickness must be > 0");
        if (!(full_occlusion > layer_thickness * std::sqrt(Scalar(2))))
            throw std::invalid_argument("full_occlusion must exceed layer_thickness*sqrt(2)");
        if (!(gamma > Scalar(0)))
            throw std::invalid_argument("gamma must be > 0");
        if (!(line_width > Scalar(0)))
            throw std::invalid_argument("line_width must be > 0");
    }
};

template <typename Scalar = double>
struct SaggingProfile {
    Scalar delta_x; // circle centre recession
    Scalar delta_y; // circle centre drop (= delta_r)
    Scalar delta_r; // radius increase
};

// One tone request at one surface point.
template <typename Scalar = double>
struct ToneSample {
    Scalar target;      // desired visible-light ratio in [0,1]
    Scalar sin_n;       // |n_z|
    Scalar cos_n;       // sqrt(n_x^2 + n_y^2)
    Scalar step_width;  // d = h*sin_n/cos_n
};

template <typename Scalar>
ToneSample<Scalar> make_tone_sample(Scalar target, Scalar sin_n, Scalar cos_n, Scalar layer_thickness)
{
    ToneSample<Scalar> s;
    s.target = target;
    s.sin_n = sin_n;
    s.cos_n = cos_n;
    s.step_width = cos_n > Scalar(0) ? layer_thickness * sin_n / cos_n
                                     : std::numeric_limits<Scalar>::infinity();
    return s;
}

// Gamma-expanded Rec.709 luma of linear [0,1] channels.
template <typename Scalar>
Scalar luminance(const Eigen::Matrix<Scalar, 3, 1>& rgb, Scalar gamma)
{
    const Scalar luma = Scalar(0.2126) * rgb.x() + Scalar(0.7152) * rgb.y() + Scalar(0.0722) * rgb.z();
    return std::pow(std::clamp(luma, Scalar(0), Scalar(1)), Scalar(1) / gamma);
}

template <typename Scalar>
Scalar projected_period(Scalar step_width, Scalar layer_thickness, Scalar alpha)
{
    return step_width * std::sin(alpha) + layer_thickness * std::cos(alpha);
}

// Visible-light ratio of an offset layer pair without any overhang effects.
// `light_offset` widens the light layers when positive.
template <typename Scalar>
Scalar perceived_ratio(Scalar light_offset, const ToneSample<Scalar>& sample, Scalar alpha, Scalar layer_thickness)
{
    const Scalar half = projected_period(sample.step_width, layer_thickness, alpha);
    if (!(half > Scalar(0)))
        throw degenerate_projection();
    const Scalar num = (sample.step_width + Scalar(2) * light_offset) * std::sin(alpha)
                     + layer_thickness * std::cos(alpha);
    return std::clamp(num / (Scalar(2) * half), Scalar(0), Scalar(1));
}

// Droop geometry of a line overhanging the layer below by `overhang`.
template <typename Scalar>
SaggingProfile<Scalar> sagging_profile(Scalar overhang, const Params<Scalar>& params)
{
    const Scalar o = std::clamp(overhang, Scalar(0), params.line_width);
    SaggingProfile<Scalar> p;
    p.delta_x = params.recede_ratio() * o;
    p.delta_r = (o - p.delta_x) * (o - p.delta_x) / (Scalar(4) * params.layer_thickness);
    p.delta_y = p.delta_r;
    return p;
}

// How much of the layer below is hidden by an overhang of `o`, as seen from
// elevation alpha >= 0. Capped at the overhang's own projected extent: one
// layer cannot hide more than it spans.
template <typename Scalar>
Scalar occlusion(Scalar o, Scalar alpha, const Params<Scalar>& params)
{
    const SaggingProfile<Scalar> p = sagging_profile(o, params);
    const Scalar oc = std::clamp(o, Scalar(0), params.line_width);
    const Scalar raw = (oc - p.delta_x) * std::sin(alpha) + p.delta_y * std::cos(alpha) + p.delta_r;
    if (alpha < Scalar(0))
        return raw; // predictor-only regime; recession may reveal instead of hide
    const Scalar cap = oc * std::sin(alpha) + params.layer_thickness * std::cos(alpha);
    return std::clamp(raw, Scalar(0), cap);
}

// Visible-light ratio including overhang occlusion. Light layers offset by
// `light_offset`, dark layers by its negation; whichever side is pushed past
// the step width overhangs by o = 2|offset| - d and hides part of the other.
template <typename Scalar>
Scalar sagged_ratio(Scalar light_offset, const ToneSample<Scalar>& sample, Scalar alpha, const Params<Scalar>& params)
{
    const Scalar h = params.layer_thickness;
    const Scalar d = sample.step_width;
    const Scalar half = projected_period(d, h, alpha);
    if (!(half > Scalar(0)))
        throw degenerate_projection();
    const Scalar dark_offset = -light_offset;
    const Scalar o_light = std::max(Scalar(0), Scalar(2) * light_offset - d);
    const Scalar o_dark = std::max(Scalar(0), Scalar(2) * dark_offset - d);
    const Scalar exchange = occlusion(o_light, alpha, params) - occlusion(o_dark, alpha, params);
    const Scalar num = (d + Scalar(2) * light_offset) * std::sin(alpha) + h * std::cos(alpha) + exchange;
    return std::clamp(num / (Scalar(2) * half), Scalar(0), Scalar(1));
}

// Dark-layer offset achieving `target` when the wall is viewed along its
// normal (alpha = n). Two regimes: while the offset stays within the stair
// step the relation is linear; past it the overhang quadratic is solved.
// `clamped`, when given, is set if the target saturates the model (the
// overhang would exceed one line width).
template <typename Scalar>
Scalar offset_for_perpendicular(Scalar target, Scalar sin_n, Scalar cos_n, const Params<Scalar>& params,
                                bool* clamped = nullptr)
{
    if (clamped)
        *clamped = false;
    if (!(cos_n > Scalar(0)))
        throw degenerate_slope();
    const Scalar h = params.layer_thickness;
    Scalar r = target;
    Scalar dir = Scalar(1);
    if (r > Scalar(0.5)) {
        r = Scalar(1) - r;
        dir = -dir;
    }
    const Scalar d = h * sin_n / cos_n;
    if (sin_n > Scalar(0)) {
        const Scalar delta = (Scalar(0.5) - r) * h / (sin_n * cos_n);
        if (Scalar(2) * std::abs(delta) <= d)
            return dir * delta;
    } else if (r == Scalar(0.5)) {
        return Scalar(0);
    }
    // Overhang regime: solve for the overhang u = 2*delta - d, from
    //   r = ((d - 2*delta)*sin_n + h*cos_n - f(u)) / (2*(d*sin_n + h*cos_n))
    // with f(u) = k*u*sin_n + (k*u)^2/(4h) * (1 + cos_n), k = 1 - recede_ratio.
    const Scalar k = Scalar(1) - params.recede_ratio();
    const Scalar a = k * k * (Scalar(1) + cos_n) / (Scalar(4) * h);
    const Scalar b = sin_n * (Scalar(1) + k);
    const Scalar c = (Scalar(2) * r - Scalar(1) + sin_n * sin_n) * h / cos_n;
    const Scalar raw_det = b * b - Scalar(4) * a * c;
    if (raw_det < Scalar(0) && clamped)
        *clamped = true;
    const Scalar det = std::max(Scalar(0), raw_det);
    Scalar u = (-b + std::sqrt(det)) / (Scalar(2) * a);
    if (u < Scalar(0))
        u = Scalar(0);
    if (u > params.line_width) {
        u = params.line_width;
        if (clamped)
            *clamped = true;
    }
    return dir * (u + d) / Scalar(2);
}

// Dark-layer offset for a fixed viewing elevation, found by bisecting the
// forward model, which is monotone in the offset for alpha >= 0. Unreachable
// targets clamp to the range limit and set `clamped`.
template <typename Scalar>
Scalar offset_for_viewing_angle(Scalar target, Scalar sin_n, Scalar cos_n, Scalar alpha,
                                const Params<Scalar>& params, bool* clamped = nullptr)
{
    if (clamped)
        *clamped = false;
    if (!(cos_n > Scalar(0)))
        throw degenerate_slope();
    if (!(alpha >= Scalar(0)))
        throw std::invalid_argument("offset solving requires a non-negative viewing angle");
    ToneSample<Scalar> sample = make_tone_sample(target, sin_n, cos_n, params.layer_thickness);
    const Scalar max_offset = sample.step_width / Scalar(2) + params.line_width / Scalar(2);
    const auto ratio_at = [&](Scalar dark_offset) {
        return sagged_ratio(-dark_offset, sample, alpha, params);
    };
    // ratio is non-increasing in the dark offset
    if (ratio_at(max_offset) >= target) {
        if (clamped)
            *clamped = true;
        return max_offset;
    }
    if (ratio_at(-max_offset) <= target) {
        if (clamped)
            *clamped = true;
        return -max_offset;
    }
    Scalar lo = -max_offset; // ratio(lo) > target
    Scalar hi = max_offset;  // ratio(hi) < target
    for (int i = 0; i < 80; ++i) {
        const Scalar mid = (lo + hi) / Scalar(2);
        if (ratio_at(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    return (lo + hi) / Scalar(2);
}

// Predicted luminance over a (phi, target) grid for a wall of angle n,
// offsets solved for perpendicular viewing and then viewed from
// alpha = n + phi. Invalid viewing directions yield NaN.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>
response_grid(Scalar n, const std::vector<Scalar>& phi_values, const std::vector<Scalar>& targets,
              const Params<Scalar>& params)
{
    const Scalar sin_n = std::sin(n);
    const Scalar cos_n = std::cos(n);
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> grid(phi_values.size(), targets.size());
    grid.setConstant(std::numeric_limits<Scalar>::quiet_NaN());
    std::vector<Scalar> offsets(targets.size());
    for (size_t j = 0; j < targets.size(); ++j)
        offsets[j] = offset_for_perpendicular(targets[j], sin_n, cos_n, params);
    const Scalar half_pi = Scalar(M_PI) / Scalar(2);
    for (size_t i = 0; i < phi_values.size(); ++i) {
        const Scalar alpha = n + phi_values[i];
        if (!(alpha > -half_pi && alpha < half_pi))
            continue;
        for (size_t j = 0; j < targets.size(); ++j) {
            ToneSample<Scalar> sample = make_tone_sample(targets[j], sin_n, cos_n, params.layer_thickness);
            if (!(projected_period(sample.step_width, params.layer_thickness, alpha) > Scalar(0)))
                continue;
            grid(i, j) = sagged_ratio(-offsets[j], sample, alpha, params);
        }
    }
    return grid;
}

// CSV layout: header row of target values, first column of phi in degrees,
// 6-decimal cells, empty cell where the grid holds NaN.
template <typename Scalar>
void write_response_csv(std::ostream& out, const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>& grid,
                        const std::vector<Scalar>& phi_values, const std::vector<Scalar>& targets)
{
    out << "phi_deg";
    char buf[32];
    for (Scalar r : targets) {
        std::snprintf(buf, sizeof buf, ",%.6f", static_cast<double>(r));
        out << buf;
    }
    out << "\n";
    for (Eigen::Index i = 0; i < grid.rows(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6f", static_cast<double>(phi_values[i]) * 180.0 / M_PI);
        out << buf;
        for (Eigen::Index j = 0; j < grid.cols(); ++j) {
            if (std::isnan(static_cast<double>(grid(i, j)))) {
                out << ",";
            } else {
                std::snprintf(buf, sizeof buf, ",%.6f", static_cast<double>(grid(i, j)));
                out << buf;
            }
        }
        out << "\n";
    }
}

} // namespace hatch::halftone
