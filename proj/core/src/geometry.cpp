#include "foilspace/geometry.hpp"

#include "foilspace/csv.hpp"
#include "foilspace/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace foilspace::geometry {
namespace {

constexpr double kNacaExponents[5] = {0.5, 1.0, 2.0, 3.0, 4.0};

void check_length(const ShapeCoefficients& coeffs, const BasisSpec& basis) {
    basis.validate();
    if (coeffs.values.size() != basis.term_count) {
        throw ContractViolation("coefficient length " + std::to_string(coeffs.values.size()) +
                                " does not match basis term count " + std::to_string(basis.term_count));
    }
}

void check_unit_interval(double v, const char* what) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw ContractViolation(std::string(what) + " = " + std::to_string(v) + " outside [0, 1]");
    }
}

// sum_j a_j u^j by Horner.
double horner(const Eigen::VectorXd& a, double u) {
    double acc = 0.0;
    for (Eigen::Index j = a.size() - 1; j >= 0; --j) acc = acc * u + a[j];
    return acc;
}

// Evaluation shared by both coordinates; `t` and `l` must satisfy l = t^2.
double eval_tl(const ShapeCoefficients& coeffs, const BasisSpec& basis, double t, double l) {
    const auto& a = coeffs.values;
    double s = 0.0;
    switch (basis.kind) {
        case BasisKind::Naca4Like:
            s = a[0] * t + l * (a[1] + l * (a[2] + l * (a[3] + l * a[4])));
            break;
        case BasisKind::HalfIntegerPowers:
        case BasisKind::OddPowersInT:
            s = t * horner(a, l);
            break;
    }
    return coeffs.scale * s;
}

}  // namespace

std::string_view to_string(BasisKind kind) {
    switch (kind) {
        case BasisKind::Naca4Like: return "naca4-like";
        case BasisKind::HalfIntegerPowers: return "half-integer-powers";
        case BasisKind::OddPowersInT: return "odd-powers-in-t";
    }
    return "unknown";
}

BasisKind basis_kind_from_string(std::string_view name) {
    if (name == "naca4-like") return BasisKind::Naca4Like;
    if (name == "half-integer-powers") return BasisKind::HalfIntegerPowers;
    if (name == "odd-powers-in-t") return BasisKind::OddPowersInT;
    throw ContractViolation("unknown basis kind '" + std::string(name) + "'");
}

void BasisSpec::validate() const {
    if (term_count < 1) throw ContractViolation("basis term_count must be >= 1");
    if (kind == BasisKind::Naca4Like && term_count != 5) {
        throw ContractViolation("naca4-like basis has exactly 5 terms");
    }
}

double BasisSpec::exponent(int j) const {
    if (kind == BasisKind::Naca4Like) return kNacaExponents[j];
    return static_cast<double>(j) + 0.5;
}

double eval_shape(const ShapeCoefficients& coeffs, const BasisSpec& basis, double l) {
    check_length(coeffs, basis);
    check_unit_interval(l, "l");
    return eval_tl(coeffs, basis, std::sqrt(l), l);
}

double eval_shape(const ShapeFunction& shape, double l) {
    return eval_shape(shape.coeffs, shape.basis, l);
}

double eval_shape_t(const ShapeCoefficients& coeffs, const BasisSpec& basis, double t) {
    check_length(coeffs, basis);
    check_unit_interval(t, "t");
    return eval_tl(coeffs, basis, t, t * t);
}

double eval_shape_t(const ShapeFunction& shape, double t) {
    return eval_shape_t(shape.coeffs, shape.basis, t);
}

double shape_derivative(const ShapeCoefficients& coeffs, const BasisSpec& basis, double l) {
    check_length(coeffs, basis);
    check_unit_interval(l, "l");
    if (l == 0.0) {
        throw SingularityError("d s / d l is singular at the leading edge (l = 0)");
    }
    double ds = 0.0;
    for (int j = 0; j < basis.term_count; ++j) {
        const double e = basis.exponent(j);
        ds += coeffs.values[j] * e * std::pow(l, e - 1.0);
    }
    return coeffs.scale * ds;
}

double shape_derivative(const ShapeFunction& shape, double l) {
    return shape_derivative(shape.coeffs, shape.basis, l);
}

double shape_derivative_t(const ShapeCoefficients& coeffs, const BasisSpec& basis, double t) {
    check_length(coeffs, basis);
    check_unit_interval(t, "t");
    // In t every exponent doubles: l^e = t^{2e}.
    double ds = 0.0;
    for (int j = 0; j < basis.term_count; ++j) {
        const double p = 2.0 * basis.exponent(j);
        const int ip = static_cast<int>(std::lround(p));
        double tp = 1.0;
        for (int q = 0; q < ip - 1; ++q) tp *= t;
        ds += coeffs.values[j] * p * tp;
    }
    return coeffs.scale * ds;
}

double shape_second_derivative(const ShapeCoefficients& coeffs, const BasisSpec& basis, double l) {
    check_length(coeffs, basis);
    check_unit_interval(l, "l");
    if (l == 0.0) {
        throw SingularityError("d^2 s / d l^2 is singular at the leading edge (l = 0)");
    }
    double d2 = 0.0;
    for (int j = 0; j < basis.term_count; ++j) {
        const double e = basis.exponent(j);
        d2 += coeffs.values[j] * e * (e - 1.0) * std::pow(l, e - 2.0);
    }
    return coeffs.scale * d2;
}

Eigen::VectorXd basis_row(const BasisSpec& basis, double l) {
    basis.validate();
    Eigen::VectorXd row(basis.term_count);
    for (int j = 0; j < basis.term_count; ++j) row[j] = std::pow(l, basis.exponent(j));
    return row;
}

std::vector<double> t_grid(int count) {
    if (count < 2) throw ContractViolation("grid needs at least 2 points");
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) t[static_cast<std::size_t>(i)] = static_cast<double>(i) / (count - 1);
    return t;
}

ValidityReport validate_airfoil(const AirfoilSurfacePair& pair, const ValidityOptions& opts) {
    if (opts.grid_size < 3) throw ContractViolation("validity grid_size must be >= 3");
    ValidityReport r;
    r.grid_size = opts.grid_size;
    r.bounded = true;
    r.sign_conforming = true;
    r.feasible = true;
    r.min_gap = std::numeric_limits<double>::infinity();
    r.lower_bound = std::numeric_limits<double>::infinity();
    r.upper_bound = -std::numeric_limits<double>::infinity();

    const auto ts = t_grid(opts.grid_size);
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double t = ts[i];
        const double su = eval_shape_t(pair.upper, t);
        const double sl = eval_shape_t(pair.lower, t);
        if (!std::isfinite(su) || !std::isfinite(sl)) {
            r.bounded = false;
            r.feasible = false;
            continue;
        }
        r.upper_bound = std::max(r.upper_bound, su);
        r.lower_bound = std::min(r.lower_bound, sl);
        if (su < -opts.endpoint_tolerance || sl > opts.endpoint_tolerance) r.sign_conforming = false;
        const bool interior = i > 0 && i + 1 < ts.size();
        if (interior) {
            const double gap = su - sl;
            if (gap < r.min_gap) {
                r.min_gap = gap;
                r.min_gap_at = t * t;
            }
            if (!(gap > 0.0)) r.feasible = false;
        }
    }

    const double tol = opts.endpoint_tolerance;
    bool fixed = std::abs(eval_shape_t(pair.upper, 0.0)) <= tol && std::abs(eval_shape_t(pair.lower, 0.0)) <= tol;
    if (opts.sharp_trailing_edge) {
        fixed = fixed && std::abs(eval_shape_t(pair.upper, 1.0)) <= tol &&
                std::abs(eval_shape_t(pair.lower, 1.0)) <= tol;
    }
    r.endpoints_fixed = fixed;
    return r;
}

FitResult fit_coefficients(std::span<const std::pair<double, double>> targets, const BasisSpec& basis) {
    basis.validate();
    const auto n = static_cast<Eigen::Index>(targets.size());
    const int k = basis.term_count;

    std::vector<double> ls;
    ls.reserve(targets.size());
    for (const auto& [l, h] : targets) {
        check_unit_interval(l, "target l");
        if (!std::isfinite(h)) throw ContractViolation("non-finite target height");
        ls.push_back(l);
    }
    std::sort(ls.begin(), ls.end());
    const auto distinct = std::unique(ls.begin(), ls.end()) - ls.begin();
    if (distinct < k) {
        throw IllPosedFit("need at least " + std::to_string(k) + " distinct l values, got " +
                              std::to_string(distinct),
                          static_cast<long>(distinct), k);
    }

    Eigen::MatrixXd A(n, k);
    Eigen::VectorXd b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        A.row(i) = basis_row(basis, targets[static_cast<std::size_t>(i)].first).transpose();
        b[i] = targets[static_cast<std::size_t>(i)].second;
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(1e-12);
    if (qr.rank() < k) {
        throw IllPosedFit("shape fit design matrix is rank deficient (rank " + std::to_string(qr.rank()) +
                              " of " + std::to_string(k) + ")",
                          static_cast<long>(qr.rank()), k);
    }
    FitResult result;
    result.coeffs.values = qr.solve(b);
    result.coeffs.scale = 1.0;
    const Eigen::VectorXd residual = A * result.coeffs.values - b;
    result.residual_norm = residual.norm();
    result.max_error = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
    return result;
}

double naca4_thickness(double thickness_ratio, double l) {
    return 5.0 * thickness_ratio *
           (0.2969 * std::sqrt(l) - 0.1260 * l - 0.3516 * l * l + 0.2843 * l * l * l - 0.1015 * l * l * l * l);
}

ShapeCoefficients naca4_closed_coefficients(double thickness_ratio) {
    ShapeCoefficients c;
    c.values.resize(5);
    // -0.1036 closes the trailing edge: the five coefficients sum to zero.
    c.values << 0.2969, -0.1260, -0.3516, 0.2843, -0.1036;
    c.scale = 5.0 * thickness_ratio;
    return c;
}

AirfoilSurfacePair naca_pair(double thickness_ratio, double upper_scale, double lower_scale) {
    if (!(upper_scale > 0.0) || !(lower_scale > 0.0)) {
        throw DomainError("NACA thickness scales must be positive");
    }
    const BasisSpec basis{BasisKind::Naca4Like, 5};
    const auto base = naca4_closed_coefficients(thickness_ratio);
    AirfoilSurfacePair pair;
    pair.upper = {basis, {base.values * upper_scale, base.scale}};
    pair.lower = {basis, {-base.values * lower_scale, base.scale}};
    return pair;
}

void write_surface(const std::filesystem::path& path, const ShapeFunction& shape, int grid_size,
                   std::string_view header_comment) {
    auto out = csv::open_for_write(path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "# l height\n";
    for (double t : t_grid(grid_size)) {
        out << csv::format(t * t, 15) << ' ' << csv::format(eval_shape_t(shape, t), 15) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::pair<double, double>> coordinate_loop(const AirfoilSurfacePair& pair, int grid_size) {
    const auto ts = t_grid(grid_size);
    std::vector<std::pair<double, double>> pts;
    pts.reserve(2 * ts.size() - 1);
    for (auto it = ts.rbegin(); it != ts.rend(); ++it) {
        pts.emplace_back((*it) * (*it), eval_shape_t(pair.upper, *it));
    }
    for (std::size_t i = 1; i < ts.size(); ++i) {
        pts.emplace_back(ts[i] * ts[i], eval_shape_t(pair.lower, ts[i]));
    }
    return pts;
}

void write_coordinate_loop(const std::filesystem::path& path, const AirfoilSurfacePair& pair, int grid_size,
                           std::string_view header_comment) {
    auto out = csv::open_for_write(path);
    if (!header_comment.empty()) out << "# " << header_comment << '\n';
    out << "# x y (trailing edge -> upper -> leading edge -> lower -> trailing edge)\n";
    for (const auto& [x, y] : coordinate_loop(pair, grid_size)) {
        out << csv::format(x, 15) << ' ' << csv::format(y, 15) << '\n';
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace foilspace::geometry
