#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

namespace foilspace::activesubspace {

// Input covariance assumed when forming C = H Sigma H + v v^T.
//   Identity: Sigma = I, the literal H^2 + v v^T.
//   Third:    Sigma = I/3, the covariance of uniform inputs on [-1, 1]^m.
enum class Convention { Identity, Third };

std::string_view to_string(Convention convention);
Convention convention_from_string(std::string_view name);
double covariance_scale(Convention convention);

// f(x) ~ 1/2 x^T H x + v^T x + c
struct QuadraticModel {
    Eigen::MatrixXd H;
    Eigen::VectorXd v;
    double c = 0.0;
    double residual_rms = 0.0;
    long samples = 0;
    // True when samples < 2 * coefficient_count(m); the fit is still returned.
    bool undersampled = false;

    int dimension() const { return static_cast<int>(v.size()); }
    double evaluate(const Eigen::VectorXd& x) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
};

// (m + 2 choose 2)
long coefficient_count(int m);

// Columns: 1, x_1..x_m, then x_i x_j for i <= j in lexicographic order.
Eigen::MatrixXd quadratic_design_matrix(const Eigen::MatrixXd& X);

// Rank is judged against this fraction of the largest pivot.
inline constexpr double kRankTolerance = 1e-10;

// Least-squares quadratic through column-pivoted Householder QR.
// Throws ContractViolation if N < (m+2 choose 2), IllPosedFit if rank deficient.
QuadraticModel fit_quadratic(const Eigen::MatrixXd& X, const Eigen::VectorXd& f);

Eigen::MatrixXd c_matrix(const QuadraticModel& model, Convention convention = Convention::Identity);

// Columns of W are eigenvectors; values are non-increasing. Each column is
// flipped so its largest-magnitude entry is positive (ties: lowest index).
struct Eigenpairs {
    Eigen::MatrixXd W;
    Eigen::VectorXd values;
};

// Throws ContractViolation if C is asymmetric beyond 1e-10 (relative to its scale).
Eigenpairs eigendecompose(const Eigen::MatrixXd& C);

// Floor applied to eigenvalues (times lambda_1) before taking log ratios.
inline constexpr double kEigenvalueFloor = 1e-14;

// argmax_{1 <= i <= max_n} log(lambda_i / lambda_{i+1}); ties go to smaller n.
int choose_dimension(const Eigen::VectorXd& values, int max_n);

struct SubspacePartition {
    Eigen::MatrixXd W1;
    Eigen::MatrixXd W2;
    int n = 0;
};

SubspacePartition partition(const Eigenpairs& eig, int n);

// || A A^T - B B^T ||_2, the sine of the largest principal angle.
double subspace_distance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B);

struct Range {
    double min = 0.0;
    double mean = 0.0;
    double max = 0.0;
};

struct BootstrapSummary {
    // Point estimates from the full data.
    Eigenpairs estimate;
    // Index i -> range of lambda_{i+1} across replicates.
    std::vector<Range> eigenvalue_ranges;
    // Index n-1 -> range of the subspace error for dimension n, n = 1..m-1.
    std::vector<Range> subspace_error;
    // Raw replicate eigenvalues, replicate-major.
    std::vector<Eigen::VectorXd> replicate_eigenvalues;
    int n = 1;
    int n_boot = 0;
    int skipped = 0;
    int retries = 0;
    std::uint64_t seed = 0;
    Convention convention = Convention::Identity;

    const Range& error_for(int dimension) const { return subspace_error.at(static_cast<std::size_t>(dimension - 1)); }
};

struct BootstrapOptions {
    int n_boot = 100;
    std::uint64_t seed = 0;
    int n = 1;
    Convention convention = Convention::Identity;
    int max_retries = 10;
    // 0 picks hardware concurrency; results never depend on this.
    unsigned threads = 1;
};

// Resample (x_i, f_i) pairs with replacement, refit, and compare each replicate
// to the full-data estimate. Replicate k draws from stream (seed, k); a rank
// deficient replicate is redrawn from (seed, k, attempt) up to max_retries
// times and then skipped.
BootstrapSummary bootstrap(const Eigen::MatrixXd& X, const Eigen::VectorXd& f,
                           const BootstrapOptions& options);

struct ConvergenceRow {
    long N = 0;
    Range error;
    int skipped = 0;
    int failed_evaluations = 0;
};

// Evaluates rows of normalized inputs; throws EvaluationError carrying the row.
using BatchEvaluator = std::function<double(const Eigen::VectorXd&)>;

// For each N: sample [-1,1]^m -> evaluate -> fit -> bootstrap, recording the
// subspace error for dimension n. Cell seeds derive from (seed, N).
std::vector<ConvergenceRow> convergence_study(int dimension, const BatchEvaluator& qoi,
                                              const std::vector<long>& schedule,
                                              const BootstrapOptions& options);

}  // namespace foilspace::activesubspace
