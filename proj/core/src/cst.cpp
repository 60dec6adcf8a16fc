#include "foilspace/cst.hpp"

#include "foilspace/errors.hpp"

#include <json.hpp>

#include <cmath>

namespace foilspace::cst {

void CstParams::validate() const {
    if (upper.size() == 0) throw ContractViolation("CST coefficient vectors must be non-empty");
    if (upper.size() != lower.size()) {
        throw ContractViolation("CST upper/lower lengths differ (" + std::to_string(upper.size()) + " vs " +
                                std::to_string(lower.size()) + ")");
    }
    if (!upper.allFinite() || !lower.allFinite()) throw ContractViolation("CST coefficients must be finite");
}

CstParams CstParams::from_flat(std::span<const double> flat) {
    if (flat.empty() || flat.size() % 2 != 0) {
        throw ContractViolation("flat CST vector must have even, non-zero length, got " + std::to_string(flat.size()));
    }
    const auto m = static_cast<Eigen::Index>(flat.size() / 2);
    CstParams p;
    p.upper = Eigen::Map<const Eigen::VectorXd>(flat.data(), m);
    p.lower = Eigen::Map<const Eigen::VectorXd>(flat.data() + m, m);
    p.validate();
    return p;
}

Eigen::VectorXd CstParams::flat() const {
    Eigen::VectorXd out(upper.size() + lower.size());
    out << upper, lower;
    return out;
}

double class_function(double l, const ClassFunctionSpec& spec) {
    if (!(l >= 0.0 && l <= 1.0)) throw ContractViolation("class function needs l in [0, 1]");
    return std::pow(l, spec.r1) * std::pow(1.0 - l, spec.r2);
}

double cst_surface(double l, const Eigen::VectorXd& coeffs, const ClassFunctionSpec& spec) {
    if (coeffs.size() == 0) throw ContractViolation("CST shape function needs at least one coefficient");
    double shape = 0.0;
    for (Eigen::Index j = coeffs.size() - 1; j >= 0; --j) shape = shape * l + coeffs[j];
    return class_function(l, spec) * shape;
}

geometry::ShapeCoefficients expand_odd_polynomial(const Eigen::VectorXd& coeffs, const ClassFunctionSpec& spec) {
    if (!spec.is_default()) {
        throw ContractViolation("odd-polynomial expansion requires r1 = 1/2 and r2 = 1");
    }
    if (coeffs.size() == 0) throw ContractViolation("CST shape function needs at least one coefficient");
    const auto m = coeffs.size();
    geometry::ShapeCoefficients out;
    out.values = Eigen::VectorXd::Zero(m + 1);
    out.values[0] = coeffs[0];
    for (Eigen::Index j = 1; j < m; ++j) out.values[j] = coeffs[j] - coeffs[j - 1];
    out.values[m] = -coeffs[m - 1];
    out.scale = 1.0;
    return out;
}

geometry::AirfoilSurfacePair to_surface_pair(const CstParams& params) {
    params.validate();
    const geometry::BasisSpec basis{geometry::BasisKind::OddPowersInT, params.m() + 1};
    geometry::AirfoilSurfacePair pair;
    pair.upper = {basis, expand_odd_polynomial(params.upper)};
    pair.lower = {basis, expand_odd_polynomial(params.lower)};
    return pair;
}

double leading_edge_radius(double x0) { return 0.5 * x0 * x0; }

std::string to_json(const CstParams& params) {
    params.validate();
    nlohmann::ordered_json j;
    j["m"] = params.m();
    j["upper"] = std::vector<double>(params.upper.begin(), params.upper.end());
    j["lower"] = std::vector<double>(params.lower.begin(), params.lower.end());
    return j.dump(2);
}

CstParams from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("CST params: ") + e.what());
    }
    if (!j.is_object() || !j.contains("upper") || !j.contains("lower")) {
        throw ParseError("CST params must be an object with 'upper' and 'lower' arrays");
    }
    CstParams p;
    try {
        const auto up = j["upper"].get<std::vector<double>>();
        const auto lo = j["lower"].get<std::vector<double>>();
        p.upper = Eigen::Map<const Eigen::VectorXd>(up.data(), static_cast<Eigen::Index>(up.size()));
        p.lower = Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size()));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("CST params: ") + e.what());
    }
    if (j.contains("m") && j["m"].get<int>() != static_cast<int>(p.upper.size())) {
        throw ParseError("CST params: 'm' does not match coefficient length");
    }
    p.validate();
    return p;
}

}  // namespace foilspace::cst
