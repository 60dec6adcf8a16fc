#pragma once

#include "foilspace/geometry.hpp"

#include <Eigen/Dense>

#include <array>
#include <span>
#include <string>
#include <string_view>

namespace foilspace::parsec {

enum class Side { Upper, Lower };

std::string_view to_string(Side side);

// The eleven PARSEC parameters, 1-based names x1..x11:
//
//   x1  upper crest location l_int        x7  trailing-edge direction angle [deg]
//   x2  lower crest location l_int        x8  trailing-edge wedge half-angle [deg]
//   x3  upper crest height                x9  upper crest second derivative
//   x4  lower crest height                x10 lower crest second derivative
//   x5  trailing-edge offset              x11 leading-edge radius
//   x6  trailing-edge half-thickness
struct ParsecParams {
    std::array<double, 11> x{};

    double& operator[](int one_based) { return x.at(static_cast<std::size_t>(one_based - 1)); }
    double operator[](int one_based) const { return x.at(static_cast<std::size_t>(one_based - 1)); }

    static ParsecParams from_span(std::span<const double> values);

    // x1, x2 in (0, 1); x6 >= 0; x11 > 0. Throws DomainError.
    void validate() const;
};

// Trailing-edge slopes ds/dl at l = 1 derived from x7 (direction) and x8 (half-angle):
//   upper: tan((x7 - x8) * pi/180)     lower: tan((x7 + x8) * pi/180)
double trailing_edge_slope(const ParsecParams& params, Side side);

struct ConstraintSystem {
    Eigen::Matrix<double, 6, 6> matrix;
    Eigen::Matrix<double, 6, 1> rhs;
    Side side = Side::Upper;
    double crest_location = 0.0;
};

// Rows: crest interpolation, trailing-edge interpolation, zero crest slope,
// trailing-edge slope, crest second derivative, leading-edge coefficient.
ConstraintSystem build_constraint_system(const ParsecParams& params, Side side);

// a_1 = +sqrt(2 eps) for the upper surface, -sqrt(2 eps) for the lower.
double leading_edge_coefficient(double radius, Side side);

struct SolvedSurface {
    Eigen::Matrix<double, 6, 1> coefficients;
    double residual_inf = 0.0;
    double condition_estimate = 0.0;
};

// Solve one block. Throws ConditioningError if the condition estimate exceeds
// kMaxCondition.
SolvedSurface solve_surface(const ConstraintSystem& system);

inline constexpr double kMaxCondition = 1e12;

// Half-integer-power surfaces with six terms for both sides.
geometry::AirfoilSurfacePair solve_coefficients(const ParsecParams& params);

// True when x5 == x6 == 0.
bool has_sharp_trailing_edge(const ParsecParams& params);

// {"x1": ..., ..., "x11": ...}
std::string to_json(const ParsecParams& params);
ParsecParams from_json(std::string_view text);

}  // namespace foilspace::parsec
