#include "foilspace/activesubspace.hpp"
#include "foilspace/errors.hpp"
#include "foilspace/qoi.hpp"
#include "foilspace/random.hpp"
#include "foilspace/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace foilspace;
using namespace foilspace::activesubspace;

namespace {

struct Generator {
    Eigen::MatrixXd H;
    Eigen::VectorXd v;
    double c;
};

Generator random_quadratic(int m, std::uint64_t seed) {
    Stream rng(seed, 0);
    Generator g{Eigen::MatrixXd(m, m), Eigen::VectorXd(m), rng.normal()};
    for (int i = 0; i < m; ++i) {
        g.v[i] = rng.normal();
        for (int j = 0; j <= i; ++j) g.H(i, j) = g.H(j, i) = rng.normal();
    }
    return g;
}

Eigen::VectorXd eval_all(const Generator& g, const Eigen::MatrixXd& X) {
    Eigen::VectorXd f(X.rows());
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Eigen::VectorXd x = X.row(i).transpose();
        f[i] = 0.5 * x.dot(g.H * x) + g.v.dot(x) + g.c;
    }
    return f;
}

Eigen::MatrixXd random_orthogonal(int m, std::uint64_t seed) {
    Stream rng(seed, 1);
    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = rng.normal();
    return Eigen::HouseholderQR<Eigen::MatrixXd>(A).householderQ();
}

}  // namespace

TEST(ActiveSubspace, CoefficientCount) {
    EXPECT_EQ(coefficient_count(1), 3);
    EXPECT_EQ(coefficient_count(10), 66);
    EXPECT_EQ(coefficient_count(11), 78);
}

TEST(ActiveSubspace, DesignMatrixColumnOrder) {
    Eigen::MatrixXd X(1, 3);
    X << 2, 3, 5;
    const auto D = quadratic_design_matrix(X);
    Eigen::RowVectorXd expected(10);
    expected << 1, 2, 3, 5, 4, 6, 10, 9, 15, 25;
    EXPECT_EQ(D.row(0), expected);
}

TEST(ActiveSubspace, ExactRecoveryAtMEleven) {
    const int m = 11;
    const auto g = random_quadratic(m, 3);
    const auto X = sampling::sample_hypercube(m, 234, 4);
    const auto model = fit_quadratic(X, eval_all(g, X));
    EXPECT_LT((model.H - g.H).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((model.v - g.v).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_NEAR(model.c, g.c, 1e-9);
    EXPECT_LT(model.residual_rms, 1e-9);
    EXPECT_FALSE(model.undersampled);
}

TEST(ActiveSubspace, ConstantAndLinearData) {
    const auto X = sampling::sample_hypercube(3, 40, 5);
    const auto flat = fit_quadratic(X, Eigen::VectorXd::Constant(40, 2.5));
    EXPECT_NEAR(flat.c, 2.5, 1e-12);
    EXPECT_LT(flat.H.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(flat.v.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(eigendecompose(c_matrix(flat)).values.cwiseAbs().maxCoeff(), 1e-20);
    QuadraticModel zero{Eigen::MatrixXd::Zero(3, 3), Eigen::VectorXd::Zero(3), 1.0};
    EXPECT_THROW(choose_dimension(eigendecompose(c_matrix(zero)).values, 2), NoStructure);

    const Eigen::Vector3d a(1, -2, 0.5);
    const auto lin = fit_quadratic(X, X * a);
    EXPECT_LT((lin.v - a).cwiseAbs().maxCoeff(), 1e-12);
    const auto eig = eigendecompose(c_matrix(lin));
    EXPECT_NEAR(eig.values[0], a.squaredNorm(), 1e-10);
    EXPECT_LT(subspace_distance(eig.W.leftCols(1), a.normalized()), 1e-10);
}

TEST(ActiveSubspace, UndersampledFlagAndErrors) {
    const auto X = sampling::sample_hypercube(2, 8, 6);
    EXPECT_TRUE(fit_quadratic(X, Eigen::VectorXd::Ones(8)).undersampled);
    EXPECT_THROW(fit_quadratic(X.topRows(5), Eigen::VectorXd::Ones(5)), ContractViolation);
    EXPECT_THROW(fit_quadratic(X, Eigen::VectorXd::Ones(7)), ContractViolation);

    Eigen::MatrixXd line(10, 2);
    for (int i = 0; i < 10; ++i) line.row(i) << i / 10.0, i / 10.0;
    try {
        fit_quadratic(line, line.col(0));
        FAIL() << "expected IllPosedFit";
    } catch (const IllPosedFit& e) {
        EXPECT_LT(e.rank(), 6);
        EXPECT_EQ(e.columns(), 6);
    }
}

TEST(ActiveSubspace, CMatrixExamples) {
    QuadraticModel model;
    model.H = Eigen::Matrix2d{{2, 0}, {0, 1}};
    model.v = Eigen::Vector2d(1, 0);
    EXPECT_EQ(c_matrix(model, Convention::Identity), (Eigen::Matrix2d{{5, 0}, {0, 1}}));
    const Eigen::MatrixXd third = c_matrix(model, Convention::Third);
    EXPECT_NEAR(third(0, 0), 4.0 / 3 + 1, 1e-15);
    EXPECT_NEAR(third(1, 1), 1.0 / 3, 1e-15);
    EXPECT_EQ(convention_from_string("third"), Convention::Third);
    EXPECT_THROW(convention_from_string("half"), ContractViolation);
}

TEST(ActiveSubspace, EigendecomposeOrderAndSigns) {
    const Eigen::Matrix2d C{{1, 0}, {0, 3}};
    const auto eig = eigendecompose(C);
    EXPECT_EQ(eig.values, Eigen::Vector2d(3, 1));
    EXPECT_EQ(eig.W, (Eigen::Matrix2d{{0, 1}, {1, 0}}));

    Stream rng(8, 0);
    for (int k = 0; k < 50; ++k) {
        Eigen::MatrixXd A(5, 5);
        for (int i = 0; i < 25; ++i) A.data()[i] = rng.normal();
        const Eigen::MatrixXd S = A * A.transpose();
        const auto e = eigendecompose(S);
        for (int j = 0; j < 5; ++j) {
            Eigen::Index idx;
            e.W.col(j).cwiseAbs().maxCoeff(&idx);
            EXPECT_GT(e.W(idx, j), 0.0);
            if (j > 0) EXPECT_GE(e.values[j - 1], e.values[j]);
        }
        EXPECT_LT((e.W * e.values.asDiagonal() * e.W.transpose() - S).cwiseAbs().maxCoeff(), 1e-10 * S.norm());
        EXPECT_LT((e.W.transpose() * e.W - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff(), 1e-12);
    }
    EXPECT_THROW(eigendecompose(Eigen::Matrix2d{{1, 2}, {0, 1}}), ContractViolation);
}

TEST(ActiveSubspace, ChooseDimensionExamples) {
    EXPECT_EQ(choose_dimension(Eigen::Vector4d(100, 1, 0.5, 0.1), 3), 1);
    EXPECT_EQ(choose_dimension(Eigen::Vector4d(100, 90, 0.5, 0.1), 3), 2);
    EXPECT_EQ(choose_dimension(Eigen::Vector4d(100, 90, 0.5, 0.1), 1), 1);
    // Equal gaps go to the smaller dimension.
    EXPECT_EQ(choose_dimension(Eigen::Vector3d(100, 10, 1), 2), 1);
    // Zero eigenvalues are floored rather than producing infinite gaps.
    EXPECT_EQ(choose_dimension(Eigen::Vector3d(1, 0, 0), 2), 1);
    EXPECT_THROW(choose_dimension(Eigen::VectorXd::Ones(1), 1), ContractViolation);
}

TEST(ActiveSubspace, SubspaceDistanceExamples) {
    const Eigen::Vector2d e1(1, 0);
    const Eigen::Vector2d e2(0, 1);
    EXPECT_NEAR(subspace_distance(e1, e1), 0.0, 1e-15);
    EXPECT_NEAR(subspace_distance(e1, -e1), 0.0, 1e-15);
    EXPECT_NEAR(subspace_distance(e1, e2), 1.0, 1e-15);
    const double a = 0.3;
    EXPECT_NEAR(subspace_distance(e1, Eigen::Vector2d(std::cos(a), std::sin(a))), std::sin(a), 1e-14);
    EXPECT_THROW(subspace_distance(Eigen::Vector2d(2, 0), e1), ContractViolation);
    EXPECT_THROW(subspace_distance(e1, Eigen::Vector3d(1, 0, 0)), ContractViolation);
}

TEST(ActiveSubspace, ModelGradientMatchesFiniteDifference) {
    const auto g = random_quadratic(4, 12);
    QuadraticModel model{g.H, g.v, g.c};
    Stream rng(12, 3);
    for (int k = 0; k < 20; ++k) {
        Eigen::VectorXd x(4);
        for (int i = 0; i < 4; ++i) x[i] = rng.uniform(-1, 1);
        const auto grad = model.gradient(x);
        for (int i = 0; i < 4; ++i) {
            const double h = 1e-6;
            Eigen::VectorXd xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            EXPECT_NEAR(grad[i], (model.evaluate(xp) - model.evaluate(xm)) / (2 * h), 1e-7);
        }
    }
}

TEST(ActiveSubspace, RotationEquivariance) {
    const int m = 5;
    const auto g = random_quadratic(m, 20);
    const auto Q = random_orthogonal(m, 20);
    const Generator rotated{Q * g.H * Q.transpose(), Q * g.v, g.c};
    const auto X = sampling::sample_hypercube(m, 80, 21);
    const auto base = eigendecompose(c_matrix(fit_quadratic(X, eval_all(g, X))));
    const auto turned = eigendecompose(c_matrix(fit_quadratic(X, eval_all(rotated, X))));
    EXPECT_LT((base.values - turned.values).cwiseAbs().maxCoeff(), 1e-9 * base.values[0]);
    for (int n = 1; n < m; ++n) {
        EXPECT_LT(subspace_distance(Q * base.W.leftCols(n), turned.W.leftCols(n)), 1e-8);
    }
}

TEST(ActiveSubspace, RidgeRecovery) {
    const int m = 10;
    Stream rng(30, 0);
    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i) w[i] = rng.normal();
    const auto X = sampling::sample_hypercube(m, 200, 31);
    for (auto profile : {qoi::RidgeProfile::Linear, qoi::RidgeProfile::Quadratic}) {
        const auto f = qoi::ridge(w, profile);
        const auto batch = qoi::evaluate_batch(*f, X);
        const auto eig = eigendecompose(c_matrix(fit_quadratic(batch.X, batch.f)));
        EXPECT_LT(subspace_distance(eig.W.leftCols(1), w.normalized()), 1e-6);
        EXPECT_GT(eig.values[0] / std::max(eig.values[1], 1e-300), 1e6);
        EXPECT_EQ(choose_dimension(eig.values, m - 1), 1);
    }
}

TEST(ActiveSubspace, BootstrapOnExactQuadraticHasNoSpread) {
    const int m = 3;
    const auto g = random_quadratic(m, 40);
    const auto X = sampling::sample_hypercube(m, 60, 41);
    const auto f = eval_all(g, X);
    BootstrapOptions opts;
    opts.n_boot = 30;
    opts.seed = 42;
    const auto s = bootstrap(X, f, opts);
    EXPECT_EQ(s.skipped, 0);
    EXPECT_EQ(static_cast<int>(s.replicate_eigenvalues.size()), 30);
    for (int i = 0; i < m; ++i) {
        const auto& r = s.eigenvalue_ranges[static_cast<std::size_t>(i)];
        EXPECT_NEAR(r.min, s.estimate.values[i], 1e-8 * s.estimate.values[0]);
        EXPECT_NEAR(r.max, s.estimate.values[i], 1e-8 * s.estimate.values[0]);
    }
    for (const auto& r : s.subspace_error) EXPECT_LT(r.max, 1e-8);
}

TEST(ActiveSubspace, BootstrapDeterministicAcrossThreadCounts) {
    const int m = 4;
    const auto g = random_quadratic(m, 50);
    const auto X = sampling::sample_hypercube(m, 45, 51);
    Eigen::VectorXd f = eval_all(g, X);
    Stream noise(52, 0);
    for (Eigen::Index i = 0; i < f.size(); ++i) f[i] += 0.1 * noise.normal();
    BootstrapOptions opts;
    opts.n_boot = 40;
    opts.seed = 53;
    opts.n = 2;
    const auto a = bootstrap(X, f, opts);
    opts.threads = 4;
    const auto b = bootstrap(X, f, opts);
    ASSERT_EQ(a.replicate_eigenvalues.size(), b.replicate_eigenvalues.size());
    for (std::size_t k = 0; k < a.replicate_eigenvalues.size(); ++k) {
        EXPECT_EQ(a.replicate_eigenvalues[k], b.replicate_eigenvalues[k]);
    }
    for (std::size_t d = 0; d < a.subspace_error.size(); ++d) {
        EXPECT_EQ(a.subspace_error[d].mean, b.subspace_error[d].mean);
        EXPECT_LE(a.subspace_error[d].min, a.subspace_error[d].mean);
        EXPECT_LE(a.subspace_error[d].mean, a.subspace_error[d].max);
    }
    EXPECT_GT(a.error_for(1).max, 0.0);
    opts.seed = 54;
    EXPECT_NE(bootstrap(X, f, opts).replicate_eigenvalues[0], a.replicate_eigenvalues[0]);
}

TEST(ActiveSubspace, BootstrapRejectsBadOptions) {
    const auto X = sampling::sample_hypercube(3, 30, 1);
    const Eigen::VectorXd f = X.col(0);
    BootstrapOptions opts;
    opts.n_boot = 0;
    EXPECT_THROW(bootstrap(X, f, opts), ContractViolation);
    opts.n_boot = 5;
    opts.n = 3;
    EXPECT_THROW(bootstrap(X, f, opts), ContractViolation);
}

TEST(ActiveSubspace, ConvergenceStudyErrorShrinks) {
    const auto f = qoi::ridge(Eigen::VectorXd::Ones(3), qoi::RidgeProfile::Quadratic, 0.05, 9);
    BootstrapOptions opts;
    opts.n_boot = 20;
    opts.seed = 60;
    const auto rows = convergence_study(3, [&](const Eigen::VectorXd& x) { return f->evaluate(x); },
                                        {50, 800}, opts);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].N, 50);
    EXPECT_GT(rows[0].error.mean, rows[1].error.mean);
    EXPECT_THROW(convergence_study(3, [&](const Eigen::VectorXd& x) { return f->evaluate(x); }, {}, opts),
                 ContractViolation);
    EXPECT_THROW(convergence_study(3, [&](const Eigen::VectorXd& x) { return f->evaluate(x); }, {100, 50}, opts),
                 ContractViolation);
}

TEST(ActiveSubspace, ConvergenceStudyReportsFailedEvaluations) {
    const auto failing = [](const Eigen::VectorXd& x) -> double {
        if (x[0] > 0.0) throw EvaluationError("left half only", -1);
        return x.squaredNorm();
    };
    BootstrapOptions opts;
    opts.n_boot = 5;
    const auto rows = convergence_study(2, failing, {200}, opts);
    EXPECT_GT(rows[0].failed_evaluations, 50);
    EXPECT_THROW(convergence_study(2, [](const Eigen::VectorXd&) -> double { throw EvaluationError("no", 0); },
                                   {20}, opts),
                 EvaluationError);
}
