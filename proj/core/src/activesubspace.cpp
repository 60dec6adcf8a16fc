#include "foilspace/activesubspace.hpp"

#include "foilspace/errors.hpp"
#include "foilspace/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <thread>

namespace foilspace::activesubspace {
namespace {

void apply_sign_rule(Eigen::MatrixXd& W) {
    for (Eigen::Index j = 0; j < W.cols(); ++j) {
        Eigen::Index best = 0;
        double best_abs = -1.0;
        for (Eigen::Index i = 0; i < W.rows(); ++i) {
            // Strict comparison keeps the lowest index on ties.
            if (std::abs(W(i, j)) > best_abs) {
                best_abs = std::abs(W(i, j));
                best = i;
            }
        }
        if (W(best, j) < 0.0) W.col(j) *= -1.0;
    }
}

Range summarize(const std::vector<double>& values) {
    Range r;
    if (values.empty()) return r;
    r.min = *std::min_element(values.begin(), values.end());
    r.max = *std::max_element(values.begin(), values.end());
    double sum = 0.0;
    for (double v : values) sum += v;
    r.mean = sum / static_cast<double>(values.size());
    return r;
}

struct Replicate {
    std::optional<Eigen::VectorXd> values;
    std::vector<double> errors;
    int retries = 0;
};

Replicate run_replicate(const Eigen::MatrixXd& X, const Eigen::VectorXd& f, const Eigen::MatrixXd& W_hat,
                        const BootstrapOptions& options, int k) {
    const Eigen::Index N = X.rows();
    const Eigen::Index m = X.cols();
    const std::uint64_t replicate_seed = derive_seed(options.seed, static_cast<std::uint64_t>(k));
    Replicate rep;
    Eigen::MatrixXd Xk(N, m);
    Eigen::VectorXd fk(N);
    for (int attempt = 0; attempt <= options.max_retries; ++attempt) {
        Stream rng(replicate_seed, static_cast<std::uint64_t>(attempt));
        for (Eigen::Index j = 0; j < N; ++j) {
            const auto idx = static_cast<Eigen::Index>(rng.index(static_cast<std::uint64_t>(N)));
            Xk.row(j) = X.row(idx);
            fk[j] = f[idx];
        }
        try {
            const auto model = fit_quadratic(Xk, fk);
            const auto eig = eigendecompose(c_matrix(model, options.convention));
            rep.values = eig.values;
            for (Eigen::Index d = 1; d < m; ++d) {
                rep.errors.push_back(subspace_distance(eig.W.leftCols(d), W_hat.leftCols(d)));
            }
            return rep;
        } catch (const IllPosedFit&) {
            ++rep.retries;
        }
    }
    return rep;
}

}  // namespace

std::string_view to_string(Convention convention) {
    return convention == Convention::Identity ? "identity" : "third";
}

Convention convention_from_string(std::string_view name) {
    if (name == "identity") return Convention::Identity;
    if (name == "third") return Convention::Third;
    throw ContractViolation("unknown covariance convention '" + std::string(name) + "' (expected identity|third)");
}

double covariance_scale(Convention convention) {
    return convention == Convention::Identity ? 1.0 : 1.0 / 3.0;
}

double QuadraticModel::evaluate(const Eigen::VectorXd& x) const {
    return 0.5 * x.dot(H * x) + v.dot(x) + c;
}

Eigen::VectorXd QuadraticModel::gradient(const Eigen::VectorXd& x) const {
    return H * x + v;
}

long coefficient_count(int m) {
    return static_cast<long>(m + 2) * (m + 1) / 2;
}

Eigen::MatrixXd quadratic_design_matrix(const Eigen::MatrixXd& X) {
    const Eigen::Index N = X.rows();
    const Eigen::Index m = X.cols();
    Eigen::MatrixXd A(N, coefficient_count(static_cast<int>(m)));
    A.col(0).setOnes();
    A.middleCols(1, m) = X;
    Eigen::Index col = m + 1;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i; j < m; ++j) A.col(col++) = X.col(i).cwiseProduct(X.col(j));
    }
    return A;
}

QuadraticModel fit_quadratic(const Eigen::MatrixXd& X, const Eigen::VectorXd& f) {
    const Eigen::Index N = X.rows();
    const int m = static_cast<int>(X.cols());
    if (m < 1) throw ContractViolation("quadratic fit needs at least one input column");
    if (f.size() != N) {
        throw ContractViolation("quadratic fit: " + std::to_string(N) + " input rows but " + std::to_string(f.size()) +
                                " outputs");
    }
    const long count = coefficient_count(m);
    if (N < count) {
        throw ContractViolation("quadratic fit in " + std::to_string(m) + " dimensions needs at least " +
                                std::to_string(count) + " samples, got " + std::to_string(N));
    }
    if (!X.allFinite() || !f.allFinite()) throw ContractViolation("quadratic fit: non-finite data");

    const Eigen::MatrixXd A = quadratic_design_matrix(X);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(kRankTolerance);
    if (qr.rank() < count) {
        throw IllPosedFit("quadratic design matrix is rank deficient: rank " + std::to_string(qr.rank()) + " of " +
                              std::to_string(count),
                          static_cast<long>(qr.rank()), count);
    }
    const Eigen::VectorXd b = qr.solve(f);

    QuadraticModel model;
    model.c = b[0];
    model.v = b.segment(1, m);
    model.H = Eigen::MatrixXd::Zero(m, m);
    Eigen::Index col = m + 1;
    for (int i = 0; i < m; ++i) {
        model.H(i, i) = 2.0 * b[col++];
        for (int j = i + 1; j < m; ++j) {
            model.H(i, j) = b[col];
            model.H(j, i) = b[col];
            ++col;
        }
    }
    model.residual_rms = std::sqrt((A * b - f).squaredNorm() / static_cast<double>(N));
    model.samples = static_cast<long>(N);
    model.undersampled = N < 2 * count;
    return model;
}

Eigen::MatrixXd c_matrix(const QuadraticModel& model, Convention convention) {
    const Eigen::MatrixXd C = covariance_scale(convention) * (model.H * model.H) + model.v * model.v.transpose();
    return 0.5 * (C + C.transpose());
}

Eigenpairs eigendecompose(const Eigen::MatrixXd& C) {
    if (C.rows() != C.cols() || C.rows() < 1) throw ContractViolation("eigendecompose needs a non-empty square matrix");
    const double scale = std::max(1.0, C.cwiseAbs().maxCoeff());
    if ((C - C.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ContractViolation("eigendecompose: matrix is not symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(C);
    if (solver.info() != Eigen::Success) throw ContractViolation("eigendecompose: solver failed to converge");
    Eigenpairs out;
    out.values = solver.eigenvalues().reverse();
    out.W = solver.eigenvectors().rowwise().reverse();
    apply_sign_rule(out.W);
    return out;
}

int choose_dimension(const Eigen::VectorXd& values, int max_n) {
    const auto m = static_cast<int>(values.size());
    if (m < 2) throw ContractViolation("choose_dimension needs at least two eigenvalues");
    const double lead = values[0];
    if (!std::isfinite(lead) || !(lead > 0.0)) {
        throw NoStructure("all eigenvalues are at the floor; no active subspace to choose");
    }
    const double floor = kEigenvalueFloor * lead;
    const int limit = std::clamp(max_n, 1, m - 1);
    const auto log_gap = [&](int i) { return std::log(std::max(values[i - 1], floor) / std::max(values[i], floor)); };
    int best_n = 1;
    double best_gap = log_gap(1);
    for (int i = 2; i <= limit; ++i) {
        const double gap = log_gap(i);
        if (gap > best_gap + 1e-12 * std::max(1.0, std::abs(best_gap))) {
            best_gap = gap;
            best_n = i;
        }
    }
    return best_n;
}

SubspacePartition partition(const Eigenpairs& eig, int n) {
    const auto m = static_cast<int>(eig.W.cols());
    if (n < 1 || n > m) throw ContractViolation("active dimension must lie in [1, " + std::to_string(m) + "]");
    return {eig.W.leftCols(n), eig.W.rightCols(m - n), n};
}

double subspace_distance(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B) {
    if (A.rows() != B.rows() || A.cols() != B.cols() || A.cols() < 1) {
        throw ContractViolation("subspace_distance: bases must have the same non-empty shape");
    }
    const auto check = [](const Eigen::MatrixXd& M, const char* name) {
        const Eigen::MatrixXd G = M.transpose() * M - Eigen::MatrixXd::Identity(M.cols(), M.cols());
        if (G.cwiseAbs().maxCoeff() > 1e-8) {
            throw ContractViolation(std::string("subspace_distance: ") + name + " does not have orthonormal columns");
        }
    };
    check(A, "A");
    check(B, "B");
    const Eigen::MatrixXd D = A * A.transpose() - B * B.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(D, Eigen::EigenvaluesOnly);
    const double d = solver.eigenvalues().cwiseAbs().maxCoeff();
    return std::min(d, 1.0);
}

BootstrapSummary bootstrap(const Eigen::MatrixXd& X, const Eigen::VectorXd& f, const BootstrapOptions& options) {
    if (options.n_boot < 1) throw ContractViolation("bootstrap needs n_boot >= 1");
    const auto m = static_cast<int>(X.cols());
    if (m >= 2 && (options.n < 1 || options.n > m - 1)) {
        throw ContractViolation("bootstrap dimension n must lie in [1, " + std::to_string(m - 1) + "]");
    }

    BootstrapSummary summary;
    summary.estimate = eigendecompose(c_matrix(fit_quadratic(X, f), options.convention));
    summary.n = options.n;
    summary.n_boot = options.n_boot;
    summary.seed = options.seed;
    summary.convention = options.convention;

    std::vector<Replicate> reps(static_cast<std::size_t>(options.n_boot));
    unsigned threads = options.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : options.threads;
    threads = std::min<unsigned>(threads, static_cast<unsigned>(options.n_boot));
    const auto work = [&](unsigned t) {
        for (int k = static_cast<int>(t); k < options.n_boot; k += static_cast<int>(threads)) {
            reps[static_cast<std::size_t>(k)] = run_replicate(X, f, summary.estimate.W, options, k);
        }
    };
    if (threads <= 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t);
    }

    // Reduce in replicate order so the summary never depends on scheduling.
    std::vector<std::vector<double>> eig_by_index(static_cast<std::size_t>(m));
    std::vector<std::vector<double>> err_by_dim(static_cast<std::size_t>(std::max(0, m - 1)));
    for (const auto& rep : reps) {
        summary.retries += rep.retries;
        if (!rep.values) {
            ++summary.skipped;
            continue;
        }
        summary.replicate_eigenvalues.push_back(*rep.values);
        for (int i = 0; i < m; ++i) eig_by_index[static_cast<std::size_t>(i)].push_back((*rep.values)[i]);
        for (std::size_t d = 0; d < rep.errors.size(); ++d) err_by_dim[d].push_back(rep.errors[d]);
    }
    if (summary.replicate_eigenvalues.empty()) {
        throw IllPosedFit("every bootstrap replicate was rank deficient", 0, coefficient_count(m));
    }
    for (const auto& v : eig_by_index) summary.eigenvalue_ranges.push_back(summarize(v));
    for (const auto& v : err_by_dim) summary.subspace_error.push_back(summarize(v));
    return summary;
}

std::vector<ConvergenceRow> convergence_study(int dimension, const BatchEvaluator& qoi,
                                              const std::vector<long>& schedule, const BootstrapOptions& options) {
    if (schedule.empty()) throw ContractViolation("convergence schedule must be non-empty");
    if (!std::is_sorted(schedule.begin(), schedule.end()) ||
        std::adjacent_find(schedule.begin(), schedule.end()) != schedule.end()) {
        throw ContractViolation("convergence schedule must be strictly ascending");
    }
    if (!qoi) throw ContractViolation("convergence study needs an evaluator");

    std::vector<ConvergenceRow> rows;
    for (long N : schedule) {
        if (N < 1) throw ContractViolation("convergence schedule entries must be positive");
        const std::string tag = std::to_string(N);
        Eigen::MatrixXd X(N, dimension);
        Eigen::VectorXd f(N);
        {
            // Same stream layout as sampling::sample_hypercube.
            const std::uint64_t sample_seed = derive_seed(options.seed, "convergence/sample/" + tag);
            for (long i = 0; i < N; ++i) {
                Stream rng(sample_seed, static_cast<std::uint64_t>(i));
                for (int j = 0; j < dimension; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
            }
        }
        ConvergenceRow row;
        row.N = N;
        Eigen::Index kept = 0;
        long first_failure = -1;
        std::string first_message;
        for (long i = 0; i < N; ++i) {
            try {
                const double value = qoi(X.row(i).transpose());
                X.row(kept) = X.row(i);
                f[kept] = value;
                ++kept;
            } catch (const EvaluationError& e) {
                ++row.failed_evaluations;
                if (first_failure < 0) {
                    first_failure = i;
                    first_message = e.what();
                }
            }
        }
        if (kept < coefficient_count(dimension)) {
            throw EvaluationError("convergence N=" + tag + ": only " + std::to_string(kept) +
                                      " evaluations succeeded; first failure at sample " +
                                      std::to_string(first_failure) + ": " + first_message,
                                  first_failure);
        }
        BootstrapOptions cell = options;
        cell.seed = derive_seed(options.seed, "convergence/bootstrap/" + tag);
        const auto summary = bootstrap(X.topRows(kept), f.head(kept), cell);
        row.error = summary.error_for(options.n);
        row.skipped = summary.skipped;
        rows.push_back(row);
    }
    return rows;
}

}  // namespace foilspace::activesubspace
