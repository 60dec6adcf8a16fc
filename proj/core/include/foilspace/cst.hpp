#pragma once

#include "foilspace/geometry.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <string_view>

namespace foilspace::cst {

// c(l) = l^r1 (1 - l)^r2. The defaults give a round nose and a sharp trailing edge.
struct ClassFunctionSpec {
    double r1 = 0.5;
    double r2 = 1.0;

    bool is_default() const { return r1 == 0.5 && r2 == 1.0; }
};

// Monomial shape-function coefficients per surface, zero-based x_0..x_{m-1}.
// The lower surface keeps its own sign (negative leading coefficient).
struct CstParams {
    Eigen::VectorXd upper;
    Eigen::VectorXd lower;

    int m() const { return static_cast<int>(upper.size()); }
    void validate() const;

    // Flat order: upper x_0..x_{m-1}, then lower x_0..x_{m-1}.
    static CstParams from_flat(std::span<const double> flat);
    Eigen::VectorXd flat() const;
};

double class_function(double l, const ClassFunctionSpec& spec = {});

// c(l) * sum_j x_j l^j. Throws ContractViolation on empty coefficients.
double cst_surface(double l, const Eigen::VectorXd& coeffs, const ClassFunctionSpec& spec = {});

// Collects sum_j x_j t^{2j+1} (1 - t^2) by power: odd-in-t basis with m + 1 terms,
//   t^1: x_0,   t^{2j+1}: x_j - x_{j-1} (1 <= j <= m-1),   t^{2m+1}: -x_{m-1}.
// Only valid for the default class function; anything else is rejected.
geometry::ShapeCoefficients expand_odd_polynomial(const Eigen::VectorXd& coeffs,
                                                  const ClassFunctionSpec& spec = {});

// Both surfaces as odd-in-t expansions (k = m + 1).
geometry::AirfoilSurfacePair to_surface_pair(const CstParams& params);

// Radius of the osculating nose circle implied by the leading t coefficient: x_0^2 / 2.
double leading_edge_radius(double x0);

// {"m": m, "upper": [...], "lower": [...]}
std::string to_json(const CstParams& params);
CstParams from_json(std::string_view text);

}  // namespace foilspace::cst
