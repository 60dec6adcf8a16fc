#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace foilspace::geometry {

// Exponent families for a surface expansion s(l) = scale * sum_j a_j phi_j(l).
//
//   Naca4Like          phi = (l^{1/2}, l, l^2, l^3, l^4), exactly 5 terms
//   HalfIntegerPowers  phi_j = l^{j - 1/2},  j = 1..k
//   OddPowersInT       phi_j = t^{2j - 1},   j = 1..k,  t = sqrt(l)
//
// HalfIntegerPowers and OddPowersInT span the same functions; they differ only
// in which coordinate is considered native.
enum class BasisKind { Naca4Like, HalfIntegerPowers, OddPowersInT };

std::string_view to_string(BasisKind kind);
BasisKind basis_kind_from_string(std::string_view name);

struct BasisSpec {
    BasisKind kind = BasisKind::HalfIntegerPowers;
    int term_count = 6;

    // Throws ContractViolation if term_count is incompatible with kind.
    void validate() const;
    // Exponent of l for term j (0-based).
    double exponent(int j) const;
};

struct ShapeCoefficients {
    Eigen::VectorXd values;
    double scale = 1.0;
};

// One surface: a basis and its coefficients.
struct ShapeFunction {
    BasisSpec basis;
    ShapeCoefficients coeffs;
};

struct AirfoilSurfacePair {
    ShapeFunction upper;
    ShapeFunction lower;
};

// Height of the surface at l in [0, 1].
double eval_shape(const ShapeCoefficients& coeffs, const BasisSpec& basis, double l);
double eval_shape(const ShapeFunction& shape, double l);

// Same surface evaluated through t = sqrt(l).
double eval_shape_t(const ShapeCoefficients& coeffs, const BasisSpec& basis, double t);
double eval_shape_t(const ShapeFunction& shape, double t);

// Exact d s / d l. Throws SingularityError at l == 0 (round nose).
double shape_derivative(const ShapeCoefficients& coeffs, const BasisSpec& basis, double l);
double shape_derivative(const ShapeFunction& shape, double l);

// Exact d s / d t of the t-form.
double shape_derivative_t(const ShapeCoefficients& coeffs, const BasisSpec& basis, double t);

// Exact d^2 s / d l^2, l > 0.
double shape_second_derivative(const ShapeCoefficients& coeffs, const BasisSpec& basis,
                               double l);

// Row of basis values phi_j(l) (without the scale factor).
Eigen::VectorXd basis_row(const BasisSpec& basis, double l);

struct ValidityOptions {
    int grid_size = 201;
    double endpoint_tolerance = 1e-9;
    // When false only the leading edge is required to close.
    bool sharp_trailing_edge = true;
};

struct ValidityReport {
    // Every sampled height finite. Observed extrema are reported, not enforced.
    bool bounded = false;
    double lower_bound = 0.0;  // min of s_L on the grid
    double upper_bound = 0.0;  // max of s_U on the grid
    // s_U >= 0 and s_L <= 0 everywhere on the grid.
    bool sign_conforming = false;
    bool endpoints_fixed = false;
    // s_U - s_L > 0 strictly on every interior grid node.
    bool feasible = false;
    double min_gap = 0.0;
    double min_gap_at = 0.0;  // l where the min gap occurs
    int grid_size = 0;
};

// Grid is uniform in t and mapped to l = t^2, which resolves the nose.
ValidityReport validate_airfoil(const AirfoilSurfacePair& pair, const ValidityOptions& opts = {});

struct FitResult {
    ShapeCoefficients coeffs;
    double residual_norm = 0.0;  // 2-norm of the residual vector
    double max_error = 0.0;      // max |s(l_i) - h_i|
};

// Linear least squares for a fixed basis (scale fixed at 1).
// Throws IllPosedFit if the design matrix is rank deficient.
FitResult fit_coefficients(std::span<const std::pair<double, double>> targets,
                           const BasisSpec& basis);

// Classical 4-digit symmetric thickness half-profile, open trailing edge.
double naca4_thickness(double thickness_ratio, double l);

// Closed-trailing-edge NACA 4-digit coefficients for `naca4-like`, scaled so the
// series gives the half-thickness of a section with the given thickness ratio.
ShapeCoefficients naca4_closed_coefficients(double thickness_ratio);

// Symmetric pair s_U = x1 * a.phi, s_L = -x2 * a.phi.
AirfoilSurfacePair naca_pair(double thickness_ratio, double upper_scale, double lower_scale);

// Uniform t grid of `count` points on [0, 1].
std::vector<double> t_grid(int count);

// Two-column (l, height) text file on a t-uniform grid, 15 significant digits.
void write_surface(const std::filesystem::path& path, const ShapeFunction& shape, int grid_size = 201,
                   std::string_view header_comment = {});

// Closed loop: trailing edge -> upper -> leading edge -> lower -> trailing edge.
std::vector<std::pair<double, double>> coordinate_loop(const AirfoilSurfacePair& pair,
                                                       int grid_size = 201);
void write_coordinate_loop(const std::filesystem::path& path, const AirfoilSurfacePair& pair,
                           int grid_size = 201, std::string_view header_comment = {});

}  // namespace foilspace::geometry
