#include "foilspace/analysis.hpp"

#include "foilspace/activesubspace.hpp"
#include "foilspace/csv.hpp"
#include "foilspace/errors.hpp"
#include "foilspace/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace foilspace::analysis {
namespace {

constexpr double kFeasibleSlack = 1e-12;
constexpr double kOrthonormalTolerance = 1e-8;

bool in_cube(const Eigen::VectorXd& x) { return x.size() == 0 || x.cwiseAbs().maxCoeff() <= 1.0 + kFeasibleSlack; }

// Tuples of n non-negative ints summing to `total`, first exponent descending.
void exponents_of_degree(int n, int total, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
    if (static_cast<int>(prefix.size()) == n - 1) {
        prefix.push_back(total);
        out.push_back(prefix);
        prefix.pop_back();
        return;
    }
    for (int e = total; e >= 0; --e) {
        prefix.push_back(e);
        exponents_of_degree(n, total - e, prefix, out);
        prefix.pop_back();
    }
}

Eigen::MatrixXd monomial_matrix(const Eigen::MatrixXd& Y, const std::vector<std::vector<int>>& exponents) {
    Eigen::MatrixXd A(Y.rows(), static_cast<Eigen::Index>(exponents.size()));
    for (Eigen::Index r = 0; r < Y.rows(); ++r) {
        for (std::size_t k = 0; k < exponents.size(); ++k) {
            double term = 1.0;
            for (std::size_t i = 0; i < exponents[k].size(); ++i) {
                for (int p = 0; p < exponents[k][i]; ++p) term *= Y(r, static_cast<Eigen::Index>(i));
            }
            A(r, static_cast<Eigen::Index>(k)) = term;
        }
    }
    return A;
}

void check_orthonormal(const Eigen::MatrixXd& W, const std::string& who) {
    const Eigen::MatrixXd G = W.transpose() * W;
    if ((G - Eigen::MatrixXd::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff() > kOrthonormalTolerance) {
        throw ContractViolation(who + ": basis columns are not orthonormal");
    }
}

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
    for (const auto& c : comments) out << "# " << c << '\n';
}

}  // namespace

ShadowData shadow_project(const Eigen::MatrixXd& X, const Eigen::VectorXd& f, const Eigen::MatrixXd& W1) {
    if (X.cols() != W1.rows()) {
        throw ContractViolation("shadow_project: X has " + std::to_string(X.cols()) + " columns but W1 has " +
                                std::to_string(W1.rows()) + " rows");
    }
    if (f.size() != X.rows()) throw ContractViolation("shadow_project: f length does not match rows of X");
    if (W1.cols() < 1) throw ContractViolation("shadow_project: W1 needs at least one column");
    ShadowData s;
    s.Y = X * W1;
    s.f = f;
    for (Eigen::Index j = 0; j < W1.cols(); ++j) s.labels.push_back("y" + std::to_string(j + 1));
    return s;
}

void write_shadow_csv(const std::filesystem::path& path, const ShadowData& shadow,
                      const std::vector<std::string>& comments) {
    auto out = csv::open_for_write(path);
    write_comments(out, comments);
    auto header = shadow.labels;
    header.push_back("f");
    csv::write_header(out, header);
    std::vector<double> row(header.size());
    for (Eigen::Index i = 0; i < shadow.Y.rows(); ++i) {
        for (Eigen::Index j = 0; j < shadow.Y.cols(); ++j) row[static_cast<std::size_t>(j)] = shadow.Y(i, j);
        row.back() = shadow.f[i];
        csv::write_row(out, row);
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<std::vector<int>> monomial_exponents(int n, int degree) {
    if (n < 1 || degree < 0) throw ContractViolation("monomial_exponents: need n >= 1 and degree >= 0");
    std::vector<std::vector<int>> out;
    std::vector<int> prefix;
    for (int d = 0; d <= degree; ++d) exponents_of_degree(n, d, prefix, out);
    return out;
}

double ResponseSurface::evaluate_active(const Eigen::VectorXd& y) const {
    if (y.size() != active_dimension()) throw ContractViolation("response surface: wrong active dimension");
    const Eigen::MatrixXd row = monomial_matrix(y.transpose(), exponents);
    return (row * coefficients)(0);
}

double ResponseSurface::evaluate(const Eigen::VectorXd& x) const {
    if (x.size() != W1.rows()) throw ContractViolation("response surface: wrong input dimension");
    return evaluate_active(W1.transpose() * x);
}

ResponseSurface fit_link_function(const ShadowData& shadow, const Eigen::MatrixXd& W1, int degree) {
    if (shadow.Y.cols() != W1.cols()) throw ContractViolation("fit_link_function: Y and W1 disagree on n");
    if (shadow.f.size() != shadow.Y.rows()) throw ContractViolation("fit_link_function: f length mismatch");
    ResponseSurface rs;
    rs.W1 = W1;
    rs.degree = degree;
    rs.exponents = monomial_exponents(static_cast<int>(W1.cols()), degree);
    const auto columns = static_cast<Eigen::Index>(rs.exponents.size());
    if (shadow.Y.rows() < columns) {
        throw ContractViolation("fit_link_function: " + std::to_string(shadow.Y.rows()) + " rows for " +
                                std::to_string(columns) + " monomials");
    }
    const Eigen::MatrixXd A = monomial_matrix(shadow.Y, rs.exponents);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
    qr.setThreshold(activesubspace::kRankTolerance);
    if (qr.rank() < columns) {
        throw IllPosedFit("fit_link_function: monomial matrix has rank " + std::to_string(qr.rank()) + " < " +
                              std::to_string(columns),
                          qr.rank(), columns);
    }
    rs.coefficients = qr.solve(shadow.f);
    const Eigen::VectorXd residual = A * rs.coefficients - shadow.f;
    const double n = static_cast<double>(shadow.f.size());
    rs.residual_rms = std::sqrt(residual.squaredNorm() / n);
    const double ss_tot = (shadow.f.array() - shadow.f.mean()).square().sum();
    rs.r_squared = ss_tot > 0.0 ? 1.0 - residual.squaredNorm() / ss_tot : 1.0;
    return rs;
}

VertexMinimum y_min(const Eigen::VectorXd& w) {
    VertexMinimum out;
    out.vertex.resize(w.size());
    for (Eigen::Index i = 0; i < w.size(); ++i) out.vertex[i] = w[i] > 0.0 ? -1.0 : 1.0;
    out.value = -w.cwiseAbs().sum();
    return out;
}

std::string_view to_string(ZPolicy policy) { return policy == ZPolicy::Zero ? "zero" : "random-feasible"; }

ZPolicy z_policy_from_string(std::string_view name) {
    if (name == "zero") return ZPolicy::Zero;
    if (name == "random-feasible") return ZPolicy::RandomFeasible;
    throw ContractViolation("unknown z policy '" + std::string(name) + "' (expected zero|random-feasible)");
}

ParetoSegment pareto_segment(const Eigen::MatrixXd& W1, const Eigen::MatrixXd& W2, int gamma_count, ZPolicy policy,
                             std::uint64_t seed) {
    if (W1.cols() != 2) throw ContractViolation("pareto_segment: W1 must have exactly two columns");
    if (W2.rows() != W1.rows() && W2.size() != 0) throw ContractViolation("pareto_segment: W1 and W2 row counts differ");
    if (gamma_count < 2) throw ContractViolation("pareto_segment: gamma_count must be >= 2");
    const Eigen::Index m = W1.rows();
    Eigen::MatrixXd W(m, W1.cols() + W2.cols());
    W.leftCols(W1.cols()) = W1;
    if (W2.cols() > 0) W.rightCols(W2.cols()) = W2;
    check_orthonormal(W, "pareto_segment");

    ParetoSegment seg;
    seg.y1_min = y_min(W1.col(0)).value;
    seg.y2_min = y_min(W1.col(1)).value;
    seg.Y.resize(gamma_count, 2);
    seg.X.resize(gamma_count, m);
    const auto k = W2.cols();
    for (int i = 0; i < gamma_count; ++i) {
        const double gamma = static_cast<double>(i) / (gamma_count - 1);
        seg.gamma.push_back(gamma);
        // + 0.0 turns -0 into +0 at the segment endpoints.
        const Eigen::Vector2d y(gamma * seg.y1_min + 0.0, (1.0 - gamma) * seg.y2_min + 0.0);
        seg.Y.row(i) = y.transpose();
        const Eigen::VectorXd base = W1 * y;
        Eigen::VectorXd x = base;
        bool feasible = in_cube(x);
        int tries = 0;
        if (policy == ZPolicy::RandomFeasible && k > 0) {
            feasible = false;
            Stream rng(seed, static_cast<std::uint64_t>(i));
            Eigen::VectorXd cube(m);
            while (!feasible && tries < kMaxZTries) {
                ++tries;
                for (Eigen::Index j = 0; j < m; ++j) cube[j] = rng.uniform(-1.0, 1.0);
                const double scale = rng.uniform01();
                const Eigen::VectorXd candidate = base + W2 * (scale * (W2.transpose() * cube));
                if (in_cube(candidate)) {
                    x = candidate;
                    feasible = true;
                }
            }
        }
        seg.X.row(i) = x.transpose();
        seg.feasible.push_back(feasible);
        seg.z_tries.push_back(tries);
    }
    return seg;
}

std::vector<ParetoPoint> pareto_front(const ParetoSegment& segment, const ResponseSurface& lift,
                                      const ResponseSurface& drag, bool strict) {
    if (lift.W1.rows() != segment.X.cols() || drag.W1.rows() != segment.X.cols()) {
        throw ContractViolation("pareto_front: surfaces do not share the segment's input dimension");
    }
    std::vector<ParetoPoint> front;
    for (Eigen::Index i = 0; i < segment.X.rows(); ++i) {
        const bool feasible = segment.feasible[static_cast<std::size_t>(i)];
        if (strict && !feasible) continue;
        ParetoPoint p;
        p.gamma = segment.gamma[static_cast<std::size_t>(i)];
        p.y1 = segment.Y(i, 0);
        p.y2 = segment.Y(i, 1);
        p.feasible = feasible;
        p.x = segment.X.row(i).transpose();
        p.lift = lift.evaluate(p.x);
        p.drag = drag.evaluate(p.x);
        front.push_back(std::move(p));
    }
    return front;
}

void write_pareto_csv(const std::filesystem::path& path, const std::vector<ParetoPoint>& front,
                      const std::vector<std::string>& comments) {
    auto out = csv::open_for_write(path);
    write_comments(out, comments);
    csv::write_header(out, {"gamma", "y1", "y2", "feasible", "drag_pred", "lift_pred"});
    for (const auto& p : front) {
        csv::write_row(out, {p.gamma, p.y1, p.y2, p.feasible ? 1.0 : 0.0, p.drag, p.lift});
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<SensitivityPoint> inactive_sensitivity_check(const Eigen::MatrixXd& y_points,
                                                         const Eigen::MatrixXd& z_samples,
                                                         const Eigen::MatrixXd& W1, const Eigen::MatrixXd& W2,
                                                         const qoi::QoiEvaluator& evaluator) {
    if (y_points.cols() != W1.cols()) throw ContractViolation("sensitivity check: y points do not match W1");
    if (z_samples.cols() != W2.cols()) throw ContractViolation("sensitivity check: z samples do not match W2");
    if (W1.rows() != evaluator.dimension() || (W2.cols() > 0 && W2.rows() != W1.rows())) {
        throw ContractViolation("sensitivity check: basis does not match the evaluator dimension");
    }
    std::vector<SensitivityPoint> out;
    for (Eigen::Index i = 0; i < y_points.rows(); ++i) {
        const Eigen::VectorXd base = W1 * y_points.row(i).transpose();
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        SensitivityPoint sp;
        for (Eigen::Index s = 0; s < z_samples.rows(); ++s) {
            const Eigen::VectorXd x = W2.cols() > 0 ? Eigen::VectorXd(base + W2 * z_samples.row(s).transpose()) : base;
            if (!in_cube(x)) continue;
            double value;
            try {
                value = evaluator.evaluate(x);
            } catch (const EvaluationError&) {
                continue;
            }
            ++sp.feasible_samples;
            lo = std::min(lo, value);
            hi = std::max(hi, value);
        }
        sp.flagged = sp.feasible_samples == 0;
        sp.spread = sp.flagged ? 0.0 : hi - lo;
        out.push_back(sp);
    }
    return out;
}

void write_contour_csv(const std::filesystem::path& path, const ResponseSurface& surface, const Eigen::MatrixXd& Y,
                       int resolution, const std::vector<std::string>& comments) {
    if (surface.active_dimension() != 2 || Y.cols() != 2) throw ContractViolation("contour export needs n = 2");
    if (Y.rows() < 1 || resolution < 2) throw ContractViolation("contour export needs data and resolution >= 2");
    const Eigen::Vector2d lo = Y.colwise().minCoeff().transpose();
    const Eigen::Vector2d hi = Y.colwise().maxCoeff().transpose();
    auto out = csv::open_for_write(path);
    write_comments(out, comments);
    csv::write_header(out, {"y1", "y2", "f"});
    for (int i = 0; i < resolution; ++i) {
        const double y1 = lo[0] + (hi[0] - lo[0]) * i / (resolution - 1);
        for (int j = 0; j < resolution; ++j) {
            const double y2 = lo[1] + (hi[1] - lo[1]) * j / (resolution - 1);
            csv::write_row(out, {y1, y2, surface.evaluate_active(Eigen::Vector2d(y1, y2))});
        }
        out << '\n';  // gnuplot block separator
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::string shadow_gnuplot(const std::string& data_file, int active_dimension, const std::string& output_png,
                           const std::string& contour_file) {
    std::ostringstream os;
    os << "set terminal pngcairo size 800,600\n"
       << "set output '" << output_png << "'\n"
       << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set key off\n";
    if (active_dimension == 1) {
        os << "set xlabel 'y1'\nset ylabel 'f'\n"
           << "plot '" << data_file << "' using 1:2 with points pt 7 ps 0.6\n";
    } else {
        os << "set xlabel 'y1'\nset ylabel 'y2'\nset cblabel 'f'\n"
           << "set palette rgbformulae 33,13,10\n";
        if (!contour_file.empty()) {
            os << "set contour base\nset cntrparam levels 12\nunset surface\nset view map\n"
               << "set table $contours\n"
               << "splot '" << contour_file << "' using 1:2:3 with lines\n"
               << "unset table\n"
               << "plot '" << data_file << "' using 1:2:3 with points pt 7 ps 0.6 palette, "
               << "$contours using 1:2 with lines lc rgb 'black'\n";
        } else {
            os << "plot '" << data_file << "' using 1:2:3 with points pt 7 ps 0.6 palette\n";
        }
    }
    return os.str();
}

std::string pareto_gnuplot(const std::string& pareto_file, const std::string& output_png) {
    std::ostringstream os;
    os << "set terminal pngcairo size 800,600\n"
       << "set output '" << output_png << "'\n"
       << "set datafile separator ','\n"
       << "set datafile commentschars '#'\n"
       << "set xlabel 'drag (predicted)'\nset ylabel 'lift (predicted)'\n"
       << "set key bottom right\n"
       << "plot '" << pareto_file << "' using ($4 > 0 ? $5 : 1/0):6 with linespoints pt 6 title 'feasible', "
       << "'' using ($4 > 0 ? 1/0 : $5):6 with points pt 2 title 'infeasible'\n";
    return os.str();
}

}  // namespace foilspace::analysis
