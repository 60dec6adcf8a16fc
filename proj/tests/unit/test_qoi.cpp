#include "foilspace/cst.hpp"
#include "foilspace/errors.hpp"
#include "foilspace/geometry.hpp"
#include "foilspace/qoi.hpp"
#include "foilspace/random.hpp"
#include "foilspace/sampling.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace foilspace;
using namespace foilspace::qoi;

namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("foilspace_qoi_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

geometry::AirfoilSurfacePair camber_only(double h) {
    const geometry::BasisSpec basis{geometry::BasisKind::Naca4Like, 5};
    Eigen::VectorXd a(5);
    a << 0, 4 * h, -4 * h, 0, 0;
    const geometry::ShapeFunction s{basis, {a, 1.0}};
    return {s, s};
}

geometry::AirfoilSurfacePair swapped(const geometry::AirfoilSurfacePair& p) {
    auto up = p.lower;
    auto lo = p.upper;
    up.coeffs.values = -up.coeffs.values;
    lo.coeffs.values = -lo.coeffs.values;
    return {up, lo};
}

geometry::AirfoilSurfacePair cambered_cst() {
    Eigen::VectorXd up(5), lo(5);
    up << 0.15, 1.1, 1.2, 1.0, 0.9;
    lo << -0.15, -0.8, -0.7, -0.8, -0.9;
    return cst::to_surface_pair({up, lo});
}

}  // namespace

TEST(Qoi, QuadraticExamples) {
    const auto f = synthetic_quadratic(Eigen::Matrix2d{{2, 0}, {0, 4}}, Eigen::Vector2d(1, -1), 0.5);
    EXPECT_EQ(f->dimension(), 2);
    EXPECT_DOUBLE_EQ(f->evaluate(Eigen::Vector2d(0, 0)), 0.5);
    EXPECT_DOUBLE_EQ(f->evaluate(Eigen::Vector2d(1, 1)), 0.5 * (2 + 4) + 0 + 0.5);
    EXPECT_THROW(synthetic_quadratic(Eigen::Matrix2d{{1, 1}, {0, 1}}, Eigen::Vector2d::Zero(), 0), ContractViolation);
    EXPECT_THROW(f->evaluate(Eigen::Vector3d::Zero()), ContractViolation);
}

TEST(Qoi, RidgeExamples) {
    const auto lin = ridge(Eigen::Vector2d(3, 4), RidgeProfile::Linear);
    EXPECT_NEAR(lin->evaluate(Eigen::Vector2d(1, 1)), 7.0 / 5.0, 1e-15);
    const auto quad = ridge(Eigen::Vector2d(3, 4), RidgeProfile::Quadratic);
    EXPECT_NEAR(quad->evaluate(Eigen::Vector2d(1, 1)), 49.0 / 25.0, 1e-14);
    const auto ex = ridge(Eigen::Vector2d(0, 2), RidgeProfile::Exp);
    EXPECT_NEAR(ex->evaluate(Eigen::Vector2d(0.7, 0.5)), std::exp(0.5), 1e-14);
    EXPECT_EQ(ridge_profile_from_string("exp"), RidgeProfile::Exp);
    EXPECT_THROW(ridge_profile_from_string("cubic"), ContractViolation);
    EXPECT_THROW(ridge(Eigen::Vector2d::Zero(), RidgeProfile::Linear), ContractViolation);
}

TEST(Qoi, RidgeIsConstantAlongOrthogonalDirections) {
    const Eigen::Vector3d w(1, -2, 0.5);
    const auto f = ridge(w, RidgeProfile::Exp);
    const Eigen::Vector3d x(0.1, 0.2, -0.3);
    const Eigen::Vector3d perp = w.cross(Eigen::Vector3d(0, 0, 1)).normalized();
    EXPECT_NEAR(f->evaluate(x), f->evaluate(x + 0.3 * perp), 1e-14);
}

TEST(Qoi, NoiseIsDeterministicAndSeeded) {
    const Eigen::Vector2d w(1, 1);
    const auto a = ridge(w, RidgeProfile::Linear, 0.1, 5);
    const auto b = ridge(w, RidgeProfile::Linear, 0.1, 5);
    const auto c = ridge(w, RidgeProfile::Linear, 0.1, 6);
    const auto clean = ridge(w, RidgeProfile::Linear);
    const auto X = sampling::sample_hypercube(2, 2000, 1);
    double sum = 0.0, sum2 = 0.0;
    int differ = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Eigen::VectorXd x = X.row(i).transpose();
        EXPECT_EQ(a->evaluate(x), a->evaluate(x));
        EXPECT_EQ(a->evaluate(x), b->evaluate(x));
        differ += a->evaluate(x) != c->evaluate(x);
        const double eta = (a->evaluate(x) - clean->evaluate(x)) / 0.1;
        sum += eta;
        sum2 += eta * eta;
    }
    EXPECT_GT(differ, 1990);
    EXPECT_NEAR(sum / 2000, 0.0, 0.1);
    EXPECT_NEAR(sum2 / 2000, 1.0, 0.1);
}

TEST(Qoi, LiftOfParabolicCamber) {
    for (double h : {0.01, 0.02, 0.05}) {
        EXPECT_NEAR(lift_like(camber_only(h)), 4 * std::numbers::pi * h, 1e-10);
        EXPECT_NEAR(lift_like(camber_only(h), 11), 4 * std::numbers::pi * h, 1e-4);
    }
    EXPECT_THROW(lift_like(camber_only(0.02), 200), ContractViolation);
}

TEST(Qoi, SymmetricSectionsCarryNoLift) {
    EXPECT_NEAR(lift_like(geometry::naca_pair(0.12, 1, 1)), 0.0, 1e-14);
    Eigen::VectorXd up(5);
    up << 0.15, 1, 1, 1, 1;
    EXPECT_NEAR(lift_like(cst::to_surface_pair({up, -up})), 0.0, 1e-14);
}

TEST(Qoi, MirrorSwapFlipsLiftAndKeepsDrag) {
    const auto p = cambered_cst();
    const auto q = swapped(p);
    EXPECT_GT(std::abs(lift_like(p)), 1e-3);
    EXPECT_NEAR(lift_like(q), -lift_like(p), 1e-13);
    EXPECT_NEAR(drag_like(q), drag_like(p), 1e-15);
}

TEST(Qoi, DragGrowsWithThickness) {
    double previous = 0.0;
    for (double tr : {0.06, 0.09, 0.12, 0.15, 0.18}) {
        const double d = drag_like(geometry::naca_pair(tr, 1, 1));
        EXPECT_GT(d, previous);
        previous = d;
    }
    // Zero thickness leaves only the base coefficient.
    EXPECT_DOUBLE_EQ(drag_like(camber_only(0.03)), SurrogateCoefficients{}.kappa0);
}

TEST(Qoi, DragMatchesMaxThicknessFormula) {
    const auto pair = geometry::naca_pair(0.12, 1, 1);
    double tmax = 0.0;
    for (int i = 0; i <= 20000; ++i) {
        const double l = i / 20000.0;
        tmax = std::max(tmax, geometry::eval_shape(pair.upper, l) - geometry::eval_shape(pair.lower, l));
    }
    const SurrogateCoefficients k;
    EXPECT_NEAR(drag_like(pair), k.kappa0 + k.kappa1 * tmax * tmax, 1e-6);
}

TEST(Qoi, InfeasibleShapeFailsEvaluation) {
    const auto good = geometry::naca_pair(0.12, 1, 1);
    EXPECT_NO_THROW(panel_outputs(good, {}));
    try {
        panel_outputs({good.lower, good.upper}, {});
        FAIL() << "expected EvaluationError";
    } catch (const EvaluationError& e) {
        EXPECT_NE(std::string(e.what()).find("infeasible"), std::string::npos);
    }
}

TEST(Qoi, PanelSurrogateOnParsecCenter) {
    const auto box = sampling::parsec_table2();
    const auto panel = panel_surrogate(Parameterization::Parsec, box);
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(11);
    const auto pair = decode(Parameterization::Parsec, box, zero);
    EXPECT_NEAR(panel.lift->evaluate(zero), lift_like(pair), 1e-15);
    EXPECT_NEAR(panel.drag->evaluate(zero), drag_like(pair), 1e-15);
    EXPECT_GT(panel.drag->evaluate(zero), SurrogateCoefficients{}.kappa0);
    EXPECT_THROW(panel_surrogate(Parameterization::Parsec, sampling::cst_table3()), ContractViolation);
}

TEST(Qoi, CstCenterEvaluationAgreesWithValidity) {
    const auto box = sampling::cst_table3();
    const auto panel = panel_surrogate(Parameterization::Cst, box);
    const auto X = sampling::sample_hypercube(10, 100, 3);
    int feasible = 0;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        const Eigen::VectorXd x = X.row(i).transpose();
        const bool ok = geometry::validate_airfoil(decode(Parameterization::Cst, box, x),
                                                   validity_options(Parameterization::Cst, box, x))
                            .feasible;
        feasible += ok;
        if (ok) {
            EXPECT_TRUE(std::isfinite(panel.lift->evaluate(x)));
        } else {
            EXPECT_THROW(panel.lift->evaluate(x), EvaluationError);
        }
    }
    EXPECT_GT(feasible, 0);
}

TEST(Qoi, CstLiftIsLinearInCoefficients) {
    // The camber line is linear in the CST coefficients, so lift is too.
    const auto box = sampling::cst_table3();
    const auto lift = [&](const Eigen::VectorXd& x) { return lift_like(decode(Parameterization::Cst, box, x)); };
    Stream rng(4, 0);
    Eigen::VectorXd a(10), b(10);
    for (int i = 0; i < 10; ++i) {
        a[i] = rng.uniform(-1, 1);
        b[i] = rng.uniform(-1, 1);
    }
    EXPECT_NEAR(lift(0.5 * (a + b)), 0.5 * (lift(a) + lift(b)), 1e-12);
}

TEST(Qoi, DatasetLookupAndErrors) {
    const auto dir = scratch("dataset");
    Eigen::MatrixXd X(3, 2);
    X << 0.1, 0.2, -0.5, 0.5, 1.0 / 3, 0.0;
    const Eigen::Vector3d f(1, 2, 3);
    write_dataset(dir / "d.csv", X, f, {"unit test"});
    const auto ds = load_dataset(dir / "d.csv");
    EXPECT_EQ(ds->X(), X);
    EXPECT_EQ(ds->f(), f);
    EXPECT_EQ(ds->evaluate(Eigen::Vector2d(1.0 / 3, 0.0)), 3.0);
    EXPECT_THROW(ds->evaluate(Eigen::Vector2d(0.9, 0.9)), EvaluationError);
    EXPECT_NE(ds->provenance().find("unit test"), std::string::npos);

    std::ofstream(dir / "nof.csv") << "x1,x2\n0.1,0.2\n";
    const auto nof = load_dataset(dir / "nof.csv");
    EXPECT_FALSE(nof->has_outputs());
    EXPECT_THROW(nof->f(), ContractViolation);
    EXPECT_THROW(nof->evaluate(Eigen::Vector2d(0.1, 0.2)), EvaluationError);

    std::ofstream(dir / "dup.csv") << "x1,f\n0.1,1\n0.1,2\n";
    EXPECT_THROW(load_dataset(dir / "dup.csv"), ParseError);
    std::ofstream(dir / "hdr.csv") << "a,f\n0.1,1\n";
    EXPECT_THROW(load_dataset(dir / "hdr.csv"), ParseError);
    std::ofstream(dir / "bad.csv") << "x1,f\n0.1,1\n0.2,oops\n";
    try {
        load_dataset(dir / "bad.csv");
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_EQ(e.line(), 3);
    }
    EXPECT_THROW(load_dataset(dir / "missing.csv"), IoError);
    fs::remove_all(dir);
}

TEST(Qoi, ExportManifestRoundTrip) {
    const auto dir = scratch("export");
    const auto box = sampling::parsec_table2();
    const auto X = sampling::sample(box, 6, 17).X;
    const auto records = export_designs(X, Parameterization::Parsec, box, dir, 51);
    ASSERT_EQ(records.size(), 6u);
    const auto manifest = load_manifest(dir / "manifest.csv");
    ASSERT_EQ(manifest.records.size(), 6u);
    EXPECT_LT((manifest.X - X).cwiseAbs().maxCoeff(), 1e-15);
    for (std::size_t i = 0; i < records.size(); ++i) {
        EXPECT_EQ(manifest.records[i].row, static_cast<long>(i));
        EXPECT_EQ(manifest.records[i].file, records[i].file);
        EXPECT_EQ(manifest.records[i].feasible, records[i].feasible);
        if (!records[i].file.empty()) EXPECT_TRUE(fs::exists(dir / records[i].file));
    }
    fs::remove_all(dir);
}

TEST(Qoi, BatchEvaluationKeepsOrderAndRecordsFailures) {
    class HalfPlane final : public QoiEvaluator {
    public:
        std::string name() const override { return "half-plane"; }
        int dimension() const override { return 1; }
        std::string description() const override { return "fails for x > 0"; }
        double evaluate(const Eigen::VectorXd& x) const override {
            if (x[0] > 0) throw EvaluationError("positive");
            return x[0];
        }
    };
    Eigen::MatrixXd X(4, 1);
    X << -0.5, 0.5, -0.25, 0.75;
    const auto r = evaluate_batch(HalfPlane{}, X);
    EXPECT_EQ(r.kept_rows, (std::vector<long>{0, 2}));
    EXPECT_EQ(r.failed_rows, (std::vector<long>{1, 3}));
    EXPECT_EQ(r.f, Eigen::Vector2d(-0.5, -0.25));
    EXPECT_EQ(r.X.rows(), 2);
    EXPECT_EQ(r.failure_messages.size(), 2u);
}

TEST(Qoi, CstTableCenterIsStronglyCambered) {
    // Lower-surface shape coefficients in the table box are positive, so the center is not near-symmetric.
    const auto box = sampling::cst_table3();
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(10);
    const auto pair = decode(Parameterization::Cst, box, zero);
    EXPECT_GT(drag_like(pair), SurrogateCoefficients{}.kappa0);
    EXPECT_TRUE(std::isfinite(drag_like(pair)));
    EXPECT_GT(lift_like(pair), 1.0);
    EXPECT_FALSE(geometry::validate_airfoil(pair).sign_conforming);
}
