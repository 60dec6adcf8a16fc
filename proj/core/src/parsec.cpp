#include "foilspace/parsec.hpp"

#include "foilspace/errors.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace foilspace::parsec {
namespace {

std::string describe(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

std::string_view to_string(Side side) { return side == Side::Upper ? "upper" : "lower"; }

ParsecParams ParsecParams::from_span(std::span<const double> values) {
    if (values.size() != 11) {
        throw ContractViolation("PARSEC needs 11 parameters, got " + std::to_string(values.size()));
    }
    ParsecParams p;
    std::copy(values.begin(), values.end(), p.x.begin());
    return p;
}

void ParsecParams::validate() const {
    for (int i = 1; i <= 11; ++i) {
        if (!std::isfinite((*this)[i])) throw DomainError("x" + std::to_string(i) + " is not finite");
    }
    for (int i : {1, 2}) {
        const double l = (*this)[i];
        if (!(l > 0.0 && l < 1.0)) {
            throw DomainError("x" + std::to_string(i) + " = " + describe(l) + " must lie in (0, 1)");
        }
    }
    if (!((*this)[11] > 0.0)) throw DomainError("x11 (leading-edge radius) must be > 0, got " + describe((*this)[11]));
    if (!((*this)[6] >= 0.0)) throw DomainError("x6 (trailing-edge half-thickness) must be >= 0, got " + describe((*this)[6]));
}

double trailing_edge_slope(const ParsecParams& params, Side side) {
    const double direction = params[7];
    const double half_angle = params[8];
    return side == Side::Upper ? std::tan(deg2rad(direction - half_angle))
                               : std::tan(deg2rad(direction + half_angle));
}

double leading_edge_coefficient(double radius, Side side) {
    if (!(radius > 0.0)) throw DomainError("leading-edge radius must be > 0, got " + describe(radius));
    const double a1 = std::sqrt(2.0 * radius);
    return side == Side::Upper ? a1 : -a1;
}

ConstraintSystem build_constraint_system(const ParsecParams& params, Side side) {
    params.validate();
    const bool upper = side == Side::Upper;
    const double l = upper ? params[1] : params[2];

    ConstraintSystem sys;
    sys.side = side;
    sys.crest_location = l;
    for (int j = 0; j < 6; ++j) {
        const double e = j + 0.5;
        sys.matrix(0, j) = std::pow(l, e);
        sys.matrix(1, j) = 1.0;
        sys.matrix(2, j) = e * std::pow(l, e - 1.0);
        sys.matrix(3, j) = e;
        sys.matrix(4, j) = e * (e - 1.0) * std::pow(l, e - 2.0);
        sys.matrix(5, j) = j == 0 ? 1.0 : 0.0;
    }
    sys.rhs << (upper ? params[3] : params[4]),
               (upper ? params[5] + params[6] : params[5] - params[6]),
               0.0,
               trailing_edge_slope(params, side),
               (upper ? params[9] : params[10]),
               leading_edge_coefficient(params[11], side);
    return sys;
}

SolvedSurface solve_surface(const ConstraintSystem& system) {
    Eigen::PartialPivLU<Eigen::Matrix<double, 6, 6>> lu(system.matrix);
    const double rcond = lu.rcond();
    SolvedSurface out;
    out.condition_estimate = rcond > 0.0 ? 1.0 / rcond : std::numeric_limits<double>::infinity();
    if (!(out.condition_estimate < kMaxCondition)) {
        throw ConditioningError(std::string(to_string(system.side)) + " PARSEC system is near singular at l_int = " +
                                describe(system.crest_location) + " (condition estimate " +
                                describe(out.condition_estimate) + ")");
    }
    out.coefficients = lu.solve(system.rhs);
    out.residual_inf = (system.matrix * out.coefficients - system.rhs).cwiseAbs().maxCoeff();
    return out;
}

geometry::AirfoilSurfacePair solve_coefficients(const ParsecParams& params) {
    const geometry::BasisSpec basis{geometry::BasisKind::HalfIntegerPowers, 6};
    const auto upper = solve_surface(build_constraint_system(params, Side::Upper));
    const auto lower = solve_surface(build_constraint_system(params, Side::Lower));
    geometry::AirfoilSurfacePair pair;
    pair.upper = {basis, {upper.coefficients, 1.0}};
    pair.lower = {basis, {lower.coefficients, 1.0}};
    return pair;
}

bool has_sharp_trailing_edge(const ParsecParams& params) {
    return params[5] == 0.0 && params[6] == 0.0;
}

std::string to_json(const ParsecParams& params) {
    nlohmann::ordered_json j;
    for (int i = 1; i <= 11; ++i) j["x" + std::to_string(i)] = params[i];
    return j.dump(2);
}

ParsecParams from_json(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("PARSEC params: ") + e.what());
    }
    if (!j.is_object()) throw ParseError("PARSEC params must be a JSON object keyed x1..x11");
    ParsecParams p;
    for (int i = 1; i <= 11; ++i) {
        const std::string key = "x" + std::to_string(i);
        if (!j.contains(key) || !j[key].is_number()) throw ParseError("PARSEC params: missing numeric field '" + key + "'");
        p[i] = j[key].get<double>();
    }
    if (j.size() != 11) throw ParseError("PARSEC params: expected exactly the 11 fields x1..x11");
    return p;
}

}  // namespace foilspace::parsec
