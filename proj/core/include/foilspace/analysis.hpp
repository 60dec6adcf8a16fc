#pragma once

#include "foilspace/qoi.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace foilspace::analysis {

struct ShadowData {
    Eigen::MatrixXd Y;  // N x n active coordinates
    Eigen::VectorXd f;
    std::vector<std::string> labels;  // y1, y2, ...
};

// Y = X W1.
ShadowData shadow_project(const Eigen::MatrixXd& X, const Eigen::VectorXd& f, const Eigen::MatrixXd& W1);

// Header y1[,y2...],f
void write_shadow_csv(const std::filesystem::path& path, const ShadowData& shadow,
                      const std::vector<std::string>& comments = {});

// Polynomial link function g(y) of total degree <= d over the active coordinates.
struct ResponseSurface {
    Eigen::MatrixXd W1;
    int degree = 1;
    // exponents[k][i] is the power of y_i in monomial k (graded lexicographic).
    std::vector<std::vector<int>> exponents;
    Eigen::VectorXd coefficients;
    double residual_rms = 0.0;
    double r_squared = 0.0;

    int active_dimension() const { return static_cast<int>(W1.cols()); }
    double evaluate_active(const Eigen::VectorXd& y) const;
    double evaluate(const Eigen::VectorXd& x) const;
};

// All exponent tuples of n variables with total degree <= d.
std::vector<std::vector<int>> monomial_exponents(int n, int degree);

// Throws ContractViolation if there are fewer rows than monomials, IllPosedFit
// if the monomial matrix is rank deficient.
ResponseSurface fit_link_function(const ShadowData& shadow, const Eigen::MatrixXd& W1, int degree);

struct VertexMinimum {
    double value = 0.0;
    Eigen::VectorXd vertex;
};

// min over [-1,1]^m of w^T x = -|w|_1 at x = -sign(w), zero components -> +1.
VertexMinimum y_min(const Eigen::VectorXd& w);

enum class ZPolicy { Zero, RandomFeasible };

std::string_view to_string(ZPolicy policy);
ZPolicy z_policy_from_string(std::string_view name);

inline constexpr int kMaxZTries = 10000;

struct ParetoSegment {
    std::vector<double> gamma;
    Eigen::MatrixXd Y;  // gamma_count x 2
    Eigen::MatrixXd X;  // gamma_count x m reconstructed designs
    std::vector<bool> feasible;
    std::vector<int> z_tries;  // tries used by the random-feasible policy
    double y1_min = 0.0;
    double y2_min = 0.0;
};

// y(gamma) = gamma (y1_min, 0) + (1 - gamma) (0, y2_min), x = W1 y + W2 z.
// W1 is m x 2 and [W1 W2] must be orthonormal.
ParetoSegment pareto_segment(const Eigen::MatrixXd& W1, const Eigen::MatrixXd& W2, int gamma_count = 101,
                             ZPolicy policy = ZPolicy::Zero, std::uint64_t seed = 0);

struct ParetoPoint {
    double gamma = 0.0;
    double y1 = 0.0;
    double y2 = 0.0;
    bool feasible = false;
    double drag = 0.0;
    double lift = 0.0;
    Eigen::VectorXd x;
};

// Per segment point: project x into each surface's own active coordinates and
// evaluate. With `strict` infeasible points are dropped.
std::vector<ParetoPoint> pareto_front(const ParetoSegment& segment, const ResponseSurface& lift,
                                      const ResponseSurface& drag, bool strict = false);

// gamma,y1,y2,feasible,drag_pred,lift_pred
void write_pareto_csv(const std::filesystem::path& path, const std::vector<ParetoPoint>& front,
                      const std::vector<std::string>& comments = {});

struct SensitivityPoint {
    double spread = 0.0;  // max - min over feasible z
    int feasible_samples = 0;
    bool flagged = false;  // no feasible z
};

// For each row of `y_points`, evaluate the QoI at x = W1 y + W2 z for every row
// of `z_samples` that keeps x inside [-1, 1]^m.
std::vector<SensitivityPoint> inactive_sensitivity_check(const Eigen::MatrixXd& y_points,
                                                         const Eigen::MatrixXd& z_samples,
                                                         const Eigen::MatrixXd& W1,
                                                         const Eigen::MatrixXd& W2,
                                                         const qoi::QoiEvaluator& evaluator);

// Uniform 101 x 101 grid over the bounding box of Y (n = 2), header y1,y2,f.
void write_contour_csv(const std::filesystem::path& path, const ResponseSurface& surface,
                       const Eigen::MatrixXd& Y, int resolution = 101,
                       const std::vector<std::string>& comments = {});

// gnuplot scripts: 1-D scatter, or 2-D scatter with optional contour overlay.
std::string shadow_gnuplot(const std::string& data_file, int active_dimension,
                           const std::string& output_png, const std::string& contour_file = {});
std::string pareto_gnuplot(const std::string& pareto_file, const std::string& output_png);

}  // namespace foilspace::analysis
