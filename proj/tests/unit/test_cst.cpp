#include "foilspace/cst.hpp"
#include "foilspace/errors.hpp"
#include "foilspace/geometry.hpp"
#include "foilspace/random.hpp"
#include "foilspace/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace foilspace;
using namespace foilspace::cst;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double x : v) out[i++] = x;
    return out;
}

// (1 - u) * sum_j x_j u^j by explicit convolution; u = t^2 and s = t * q(u).
Eigen::VectorXd oracle_expansion(const Eigen::VectorXd& x) {
    const auto m = x.size();
    Eigen::VectorXd q = Eigen::VectorXd::Zero(m + 1);
    for (Eigen::Index j = 0; j < m; ++j) {
        q[j] += x[j];
        q[j + 1] -= x[j];
    }
    return q;
}

double odd_poly(const Eigen::VectorXd& q, double t) {
    double s = 0.0;
    for (Eigen::Index k = 0; k < q.size(); ++k) s += q[k] * std::pow(t, 2 * k + 1);
    return s;
}

}  // namespace

TEST(Cst, ClassFunctionExamples) {
    EXPECT_DOUBLE_EQ(class_function(0.25), 0.375);
    EXPECT_EQ(class_function(0.0), 0.0);
    EXPECT_EQ(class_function(1.0), 0.0);
    EXPECT_EQ(class_function(0.37, {0.0, 0.0}), 1.0);
}

TEST(Cst, SurfaceExamples) {
    EXPECT_DOUBLE_EQ(cst_surface(0.25, vec({1})), 0.375);
    EXPECT_EQ(cst_surface(0.6, vec({0, 0, 0})), 0.0);
    EXPECT_NEAR(cst_surface(0.5, vec({1, 1})), std::sqrt(0.5) * 0.5 * 1.5, 1e-15);
    EXPECT_NEAR(cst_surface(0.5, vec({1, 1})), 0.530330085889911, 1e-14);
    EXPECT_THROW(cst_surface(0.5, Eigen::VectorXd()), ContractViolation);
}

TEST(Cst, EndpointZeros) {
    const auto x = vec({0.15, 1, 1, 1, 1});
    EXPECT_EQ(cst_surface(0.0, x), 0.0);
    EXPECT_EQ(cst_surface(1.0, x), 0.0);
}

TEST(Cst, ExpansionExamples) {
    const auto e2 = expand_odd_polynomial(vec({1, 1}));
    EXPECT_EQ(e2.values, vec({1, 0, -1}));
    const auto e1 = expand_odd_polynomial(vec({2.5}));
    EXPECT_EQ(e1.values, vec({2.5, -2.5}));
    EXPECT_THROW(expand_odd_polynomial(vec({1}), {0.5, 0.5}), ContractViolation);
}

TEST(Cst, ExpansionMatchesProductAndOracle) {
    Stream rng(5, 0);
    const geometry::BasisSpec odd{geometry::BasisKind::OddPowersInT, 6};
    for (int k = 0; k < 1000; ++k) {
        Eigen::VectorXd x(5);
        for (int j = 0; j < 5; ++j) x[j] = rng.uniform(-2, 2);
        const auto e = expand_odd_polynomial(x);
        ASSERT_EQ(e.values.size(), 6);
        EXPECT_LT((e.values - oracle_expansion(x)).cwiseAbs().maxCoeff(), 1e-15);
        for (int i = 0; i <= 100; ++i) {
            const double t = i / 100.0;
            EXPECT_NEAR(geometry::eval_shape_t(e, odd, t), cst_surface(t * t, x), 1e-12);
            EXPECT_NEAR(odd_poly(e.values, t), cst_surface(t * t, x), 1e-12);
        }
    }
}

TEST(Cst, SupportMatchesSixTermOddSeries) {
    // Degree 11 in t: powers 1, 3, ..., 11, the same as the six-term PARSEC series.
    const geometry::BasisSpec half{geometry::BasisKind::HalfIntegerPowers, 6};
    const auto pair = to_surface_pair(CstParams{vec({0.15, 1, 1, 1, 1}), vec({-0.15, 1, 1, 1, 1})});
    ASSERT_EQ(pair.upper.basis.term_count, 6);
    for (int j = 0; j < 6; ++j) EXPECT_EQ(2 * pair.upper.basis.exponent(j), 2 * half.exponent(j));
    EXPECT_EQ(2 * pair.upper.basis.exponent(5), 11.0);
}

TEST(Cst, LeadingEdgeRadiusIdentification) {
    EXPECT_DOUBLE_EQ(leading_edge_radius(0.2), 0.02);
    const auto x = vec({0.15, 1, 0.9, 1.1, 1});
    const double l = 1e-8;
    const double eps = leading_edge_radius(x[0]);
    EXPECT_LT(std::abs(cst_surface(l, x) / std::sqrt(2 * eps * l) - 1.0), 1e-3);
}

TEST(Cst, FlatOrderAndLowerSign) {
    const double flat[10] = {0.15, 1, 1, 1, 1, -0.15, 0.9, 0.9, 0.9, 0.9};
    const auto p = CstParams::from_flat(flat);
    EXPECT_EQ(p.m(), 5);
    EXPECT_EQ(p.upper[0], 0.15);
    EXPECT_EQ(p.lower[0], -0.15);
    EXPECT_EQ(p.lower[1], 0.9);
    EXPECT_EQ(p.flat(), (Eigen::Map<const Eigen::VectorXd>(flat, 10)));
    const double odd[3] = {1, 2, 3};
    EXPECT_THROW(CstParams::from_flat(odd), ContractViolation);
}

TEST(Cst, MirrorPairIsFeasible) {
    const auto pair = to_surface_pair(CstParams{vec({0.15, 1, 1, 1, 1}), vec({-0.15, -1, -1, -1, -1})});
    const auto r = geometry::validate_airfoil(pair);
    EXPECT_TRUE(r.feasible);
    EXPECT_TRUE(r.endpoints_fixed);
}

TEST(Cst, JsonRoundTrip) {
    const CstParams p{vec({0.15, 1, 1, 1, 1}), vec({-0.15, 1, 1, 1, 1})};
    const auto q = from_json(to_json(p));
    EXPECT_EQ(p.upper, q.upper);
    EXPECT_EQ(p.lower, q.lower);
    EXPECT_THROW(from_json(R"({"m": 3, "upper": [1, 2], "lower": [1, 2]})"), ParseError);
}
