#include "foilspace/commands.hpp"

#include "foilspace/activesubspace.hpp"
#include "foilspace/analysis.hpp"
#include "foilspace/artifacts.hpp"
#include "foilspace/csv.hpp"
#include "foilspace/cst.hpp"
#include "foilspace/errors.hpp"
#include "foilspace/geometry.hpp"
#include "foilspace/parsec.hpp"
#include "foilspace/qoi.hpp"
#include "foilspace/random.hpp"
#include "foilspace/sampling.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <ostream>
#include <sstream>

namespace foilspace::cli {
namespace {

namespace as = foilspace::activesubspace;
using qoi::Parameterization;

qoi::Parameterization resolve_parameterization(const Config& cfg) {
    if (!cfg.parameterization.empty()) return qoi::parameterization_from_string(cfg.parameterization);
    return cfg.box == "cst-table3" ? Parameterization::Cst : Parameterization::Parsec;
}

sampling::ParameterBox resolve_box(const Config& cfg) {
    if (!cfg.box.empty()) return sampling::load_box(cfg.box);
    return resolve_parameterization(cfg) == Parameterization::Cst ? sampling::cst_table3() : sampling::parsec_table2();
}

bool is_panel(const Config& cfg) { return cfg.qoi.rfind("panel", 0) == 0; }
bool is_dataset(const Config& cfg) { return cfg.qoi.rfind("dataset:", 0) == 0; }

bool uses_box(const Config& cfg) { return !cfg.box.empty() || !cfg.parameterization.empty() || is_panel(cfg); }

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, sep)) out.push_back(part);
    return out;
}

double parse_number(const std::string& s, const std::string& what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) throw ContractViolation(what + ": '" + s + "' is not a number");
    return v;
}

std::string tagged(const std::string& stem, const std::string& tag, const std::string& ext) { return stem + tag + ext; }

std::filesystem::path input_or(const Config& cfg, const std::string& given, const std::string& fallback) {
    return given.empty() ? cfg.path(fallback) : std::filesystem::path(given);
}

void require_file(const std::filesystem::path& p, const std::string& hint) {
    if (!std::filesystem::exists(p)) throw IoError("missing input '" + p.string() + "'; " + hint);
}

// Synthetic quadratic with a two-dimensional dominant structure: H = Q diag(l) Q^T,
// v in span(q1, q2). Q comes from a seeded Gaussian matrix.
struct QuadraticGenerator {
    Eigen::MatrixXd H;
    Eigen::VectorXd v;
    double c = 1.0;
};

QuadraticGenerator quadratic_generator(int m, std::uint64_t seed) {
    Stream rng(derive_seed(seed, "qoi/quadratic"), 0);
    Eigen::MatrixXd G(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) G(i, j) = rng.normal();
    const Eigen::MatrixXd Q = Eigen::HouseholderQR<Eigen::MatrixXd>(G).householderQ();
    Eigen::VectorXd lambda(m);
    for (int i = 0; i < m; ++i) lambda[i] = i == 0 ? 4.0 : i == 1 ? 2.0 : 0.02 / i;
    QuadraticGenerator g;
    g.H = Q * lambda.asDiagonal() * Q.transpose();
    g.H = 0.5 * (g.H + g.H.transpose());
    g.v = 0.3 * Q.col(0) + (m > 1 ? Eigen::VectorXd(0.2 * Q.col(1)) : Eigen::VectorXd::Zero(m));
    return g;
}

Eigen::VectorXd ridge_direction(int m, std::uint64_t seed) {
    Stream rng(derive_seed(seed, "qoi/ridge"), 0);
    Eigen::VectorXd w(m);
    for (int i = 0; i < m; ++i) w[i] = rng.normal();
    return w / w.norm();
}

int input_dimension(const Config& cfg) {
    if (uses_box(cfg)) return resolve_box(cfg).dimension();
    if (is_dataset(cfg)) return qoi::load_dataset(cfg.qoi.substr(8))->dimension();
    return cfg.m;
}

struct BuiltQoi {
    qoi::EvaluatorPtr evaluator;
    json info;
};

BuiltQoi build_qoi(const Config& cfg, const std::string& spec, int m) {
    const auto parts = split(spec, ':');
    const std::string kind = parts.empty() ? std::string() : parts[0];
    BuiltQoi b;
    if (kind == "quadratic") {
        const auto g = quadratic_generator(m, cfg.seed);
        b.evaluator = qoi::synthetic_quadratic(g.H, g.v, g.c);
        as::QuadraticModel model;
        model.H = g.H;
        model.v = g.v;
        const auto conv = as::convention_from_string(cfg.convention);
        const auto eig = as::eigendecompose(as::c_matrix(model, conv));
        b.info = {{"kind", "quadratic"}, {"H", to_json(g.H)}, {"v", to_json(g.v)}, {"c", g.c},
                  {"convention", std::string(as::to_string(conv))},
                  {"analytic_eigenvalues", to_json(eig.values)},
                  {"analytic_eigenvectors", to_json(Eigen::MatrixXd(eig.W.transpose()))}};
    } else if (kind == "ridge") {
        const auto profile = qoi::ridge_profile_from_string(parts.size() > 1 ? parts[1] : "quadratic");
        const double noise = parts.size() > 2 ? parse_number(parts[2], "ridge noise") : 0.0;
        const auto w = ridge_direction(m, cfg.seed);
        b.evaluator = qoi::ridge(w, profile, noise, derive_seed(cfg.seed, "qoi/ridge/noise"));
        b.info = {{"kind", "ridge"}, {"profile", std::string(qoi::to_string(profile))}, {"noise", noise},
                  {"w", to_json(w)}};
    } else if (kind == "panel") {
        const std::string which = parts.size() > 1 ? parts[1] : "lift";
        if (which != "lift" && which != "drag") throw ContractViolation("panel output must be lift or drag");
        const auto p = resolve_parameterization(cfg);
        const auto pair = qoi::panel_surrogate(p, resolve_box(cfg));
        b.evaluator = which == "lift" ? pair.lift : pair.drag;
        const qoi::SurrogateCoefficients k;
        b.info = {{"kind", "panel"}, {"output", which}, {"parameterization", std::string(qoi::to_string(p))},
                  {"kappa0", k.kappa0}, {"kappa1", k.kappa1}, {"grid", k.grid_size}};
    } else if (kind == "dataset") {
        const std::string path = spec.substr(8);
        require_file(path, "pass --qoi dataset:PATH with an existing CSV");
        auto d = qoi::load_dataset(path);
        b.info = {{"kind", "dataset"}, {"path", path}, {"provenance", d->provenance()}, {"rows", d->X().rows()}};
        b.evaluator = std::move(d);
    } else {
        throw ContractViolation("unknown --qoi '" + spec +
                                "' (expected quadratic | ridge[:profile[:noise]] | panel[:lift|:drag] | dataset:PATH)");
    }
    if (b.evaluator->dimension() != m) {
        throw ContractViolation("QoI dimension " + std::to_string(b.evaluator->dimension()) +
                                " does not match input dimension " + std::to_string(m));
    }
    b.info["description"] = b.evaluator->description();
    return b;
}

Eigen::MatrixXd read_samples(const std::filesystem::path& path) {
    require_file(path, "run `foilspace sample` first or pass --samples");
    const auto table = csv::read(path);
    for (std::size_t j = 0; j < table.header.size(); ++j) {
        if (table.header[j] != "x" + std::to_string(j + 1)) {
            throw ParseError(path.string() + ": expected header x1..xm", 1);
        }
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(table.header.size()));
    for (std::size_t i = 0; i < table.rows.size(); ++i)
        for (std::size_t j = 0; j < table.header.size(); ++j)
            X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = table.rows[i][j];
    return X;
}

struct Analysis {
    std::shared_ptr<qoi::DatasetQoi> data;
    as::QuadraticModel model;
    as::Eigenpairs eig;
    int n = 1;
};

Analysis analyze(const Config& cfg, const std::filesystem::path& path) {
    require_file(path, "run `foilspace evaluate` first or pass --data");
    Analysis a;
    a.data = qoi::load_dataset(path);
    if (!a.data->has_outputs()) throw ContractViolation(path.string() + " has no f column; evaluate it first");
    a.model = as::fit_quadratic(a.data->X(), a.data->f());
    a.eig = as::eigendecompose(as::c_matrix(a.model, as::convention_from_string(cfg.convention)));
    const int m = a.model.dimension();
    if (cfg.dim > 0) {
        if (cfg.dim >= m) throw ContractViolation("--dim must be below the input dimension " + std::to_string(m));
        a.n = cfg.dim;
    } else {
        a.n = as::choose_dimension(a.eig.values, m - 1);
    }
    return a;
}

json range_json(const as::Range& r) { return {{"min", r.min}, {"mean", r.mean}, {"max", r.max}}; }

json surface_json(const analysis::ResponseSurface& rs) {
    return {{"degree", rs.degree},      {"exponents", rs.exponents},       {"coefficients", to_json(rs.coefficients)},
            {"W1", to_json(rs.W1)},     {"residual_rms", rs.residual_rms}, {"r_squared", rs.r_squared}};
}

Eigen::VectorXd parse_param_values(const std::string& text) {
    const auto parts = split(text, ',');
    Eigen::VectorXd v(static_cast<Eigen::Index>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<Eigen::Index>(i)] = parse_number(parts[i], "--params");
    return v;
}

}  // namespace

void cmd_sample(const Config& cfg, std::ostream& log) {
    if (cfg.n < 1) throw ContractViolation("--n must be positive");
    const std::uint64_t seed = derive_seed(cfg.seed, "sample");
    Eigen::MatrixXd X;
    if (uses_box(cfg)) {
        const auto box = resolve_box(cfg);
        X = sampling::sample(box, static_cast<int>(cfg.n), seed).X;
        write_text(cfg.path("box.json"), sampling::box_to_json(box) + "\n");
    } else {
        X = sampling::sample_hypercube(cfg.m, static_cast<int>(cfg.n), seed);
    }
    sampling::write_samples(cfg.path("samples.csv"), X, {meta_comment(cfg)});
    log << "sample: " << X.rows() << " x " << X.cols() << " -> " << cfg.path("samples.csv").string() << '\n';
}

void cmd_shapes(const Config& cfg, std::ostream& log) {
    const auto X = read_samples(input_or(cfg, cfg.samples, "samples.csv"));
    const auto records = qoi::export_designs(X, resolve_parameterization(cfg), resolve_box(cfg), cfg.path("shapes"),
                                             cfg.grid, {meta_comment(cfg)});
    long feasible = 0;
    for (const auto& r : records) feasible += r.feasible ? 1 : 0;
    log << "shapes: " << records.size() << " designs, " << feasible << " feasible -> "
        << cfg.path("shapes").string() << '\n';
}

void cmd_evaluate(const Config& cfg, std::ostream& log, const std::string& tag) {
    const auto X = read_samples(input_or(cfg, cfg.samples, "samples.csv"));
    std::string spec = cfg.qoi;
    if (tag == "_lift") spec = "panel:lift";
    if (tag == "_drag") spec = "panel:drag";
    const auto built = build_qoi(cfg, spec, static_cast<int>(X.cols()));
    const auto batch = qoi::evaluate_batch(*built.evaluator, X);
    qoi::write_dataset(cfg.path(tagged("dataset", tag, ".csv")), batch.X, batch.f, {meta_comment(cfg)});
    json failures = json::array();
    for (std::size_t k = 0; k < batch.failed_rows.size(); ++k) {
        failures.push_back({{"row", batch.failed_rows[k]}, {"message", batch.failure_messages[k]}});
    }
    write_json(cfg.path(tagged("evaluate", tag, ".json")), cfg,
               {{"qoi", built.info}, {"rows", X.rows()}, {"kept", batch.kept_rows.size()}, {"failed", failures}});
    log << "evaluate" << tag << ": " << batch.kept_rows.size() << " ok, " << batch.failed_rows.size()
        << " failed -> " << cfg.path(tagged("dataset", tag, ".csv")).string() << '\n';
}

void cmd_fit(const Config& cfg, std::ostream& log, const std::string& tag) {
    const auto path = input_or(cfg, cfg.data, tagged("dataset", tag, ".csv"));
    require_file(path, "run `foilspace evaluate` first or pass --data");
    const auto data = qoi::load_dataset(path);
    const auto model = as::fit_quadratic(data->X(), data->f());
    write_json(cfg.path(tagged("fit", tag, ".json")), cfg,
               {{"H", to_json(model.H)},
                {"v", to_json(model.v)},
                {"c", model.c},
                {"residual_rms", model.residual_rms},
                {"samples", model.samples},
                {"coefficient_count", as::coefficient_count(model.dimension())},
                {"undersampled", model.undersampled}});
    log << "fit" << tag << ": m=" << model.dimension() << " N=" << model.samples
        << " rms=" << csv::format(model.residual_rms, 6) << (model.undersampled ? " (undersampled)" : "") << '\n';
}

void cmd_eigs(const Config& cfg, std::ostream& log, const std::string& tag) {
    const auto a = analyze(cfg, input_or(cfg, cfg.data, tagged("dataset", tag, ".csv")));
    json gaps = json::array();
    for (Eigen::Index i = 0; i + 1 < a.eig.values.size(); ++i) {
        const double floor = as::kEigenvalueFloor * a.eig.values[0];
        gaps.push_back(std::log(std::max(a.eig.values[i], floor) / std::max(a.eig.values[i + 1], floor)));
    }
    write_json(cfg.path(tagged("eigs", tag, ".json")), cfg,
               {{"convention", cfg.convention},
                {"eigenvalues", to_json(a.eig.values)},
                {"eigenvectors", to_json(Eigen::MatrixXd(a.eig.W.transpose()))},
                {"log_gaps", gaps},
                {"n", a.n},
                {"undersampled", a.model.undersampled}});
    log << "eigs" << tag << ": lambda1=" << csv::format(a.eig.values[0], 6) << " n=" << a.n << '\n';
}

void cmd_bootstrap(const Config& cfg, std::ostream& log, const std::string& tag) {
    const auto a = analyze(cfg, input_or(cfg, cfg.data, tagged("dataset", tag, ".csv")));
    as::BootstrapOptions opts;
    opts.n_boot = cfg.nboot;
    opts.seed = derive_seed(cfg.seed, "bootstrap" + tag);
    opts.n = a.n;
    opts.convention = as::convention_from_string(cfg.convention);
    opts.threads = cfg.threads;
    const auto s = as::bootstrap(a.data->X(), a.data->f(), opts);

    json values = json::array();
    auto ev = csv::open_for_write(cfg.path(tagged("bootstrap", tag, "_eigenvalues.csv")));
    ev << "# " << meta_comment(cfg) << '\n';
    csv::write_header(ev, {"index", "estimate", "min", "mean", "max"});
    for (std::size_t i = 0; i < s.eigenvalue_ranges.size(); ++i) {
        const auto& r = s.eigenvalue_ranges[i];
        const double est = s.estimate.values[static_cast<Eigen::Index>(i)];
        csv::write_row(ev, {static_cast<double>(i + 1), est, r.min, r.mean, r.max});
        json row = range_json(r);
        row["index"] = i + 1;
        row["estimate"] = est;
        values.push_back(row);
    }
    json errors = json::array();
    auto se = csv::open_for_write(cfg.path(tagged("bootstrap", tag, "_subspace.csv")));
    se << "# " << meta_comment(cfg) << '\n';
    csv::write_header(se, {"dimension", "min", "mean", "max"});
    for (std::size_t d = 0; d < s.subspace_error.size(); ++d) {
        const auto& r = s.subspace_error[d];
        csv::write_row(se, {static_cast<double>(d + 1), r.min, r.mean, r.max});
        json row = range_json(r);
        row["dimension"] = d + 1;
        errors.push_back(row);
    }
    if (!ev || !se) throw IoError("write failed for bootstrap CSVs in '" + cfg.out + "'");
    write_json(cfg.path(tagged("bootstrap", tag, ".json")), cfg,
               {{"n", s.n},
                {"n_boot", s.n_boot},
                {"skipped", s.skipped},
                {"retries", s.retries},
                {"convention", cfg.convention},
                {"eigenvalues", values},
                {"subspace_error", errors}});
    log << "bootstrap" << tag << ": " << s.n_boot << " replicates, " << s.skipped << " skipped, error(n=" << s.n
        << ") mean " << csv::format(s.error_for(s.n).mean, 4) << '\n';
}

void cmd_shadow(const Config& cfg, std::ostream& log, const std::string& tag) {
    const auto a = analyze(cfg, input_or(cfg, cfg.data, tagged("dataset", tag, ".csv")));
    const int n = std::min(a.n, 2);
    const Eigen::MatrixXd W1 = a.eig.W.leftCols(n);
    const auto shadow = analysis::shadow_project(a.data->X(), a.data->f(), W1);
    const std::string csv_name = tagged("shadow", tag, ".csv");
    analysis::write_shadow_csv(cfg.path(csv_name), shadow, {meta_comment(cfg)});
    const auto rs = analysis::fit_link_function(shadow, W1, cfg.degree);
    std::string contour_name;
    if (n == 2) {
        contour_name = tagged("contour", tag, ".csv");
        analysis::write_contour_csv(cfg.path(contour_name), rs, shadow.Y, 101, {meta_comment(cfg)});
    }
    write_text(cfg.path(tagged("shadow", tag, ".gp")),
               "# " + meta_comment(cfg) + "\n" +
                   analysis::shadow_gnuplot(csv_name, n, tagged("shadow", tag, ".png"), contour_name));
    write_json(cfg.path(tagged("link", tag, ".json")), cfg, {{"n", n}, {"surface", surface_json(rs)}});
    log << "shadow" << tag << ": n=" << n << " degree=" << cfg.degree << " R^2=" << csv::format(rs.r_squared, 6)
        << '\n';
}

void cmd_pareto(const Config& cfg, std::ostream& log) {
    Config lift_cfg = cfg;
    lift_cfg.dim = 1;
    const auto lift = analyze(lift_cfg, input_or(cfg, cfg.lift_data, "dataset_lift.csv"));
    Config drag_cfg = cfg;
    drag_cfg.dim = 2;
    const auto drag = analyze(drag_cfg, input_or(cfg, cfg.drag_data, "dataset_drag.csv"));
    const auto m = drag.eig.W.rows();
    if (lift.eig.W.rows() != m) throw ContractViolation("lift and drag datasets have different input dimensions");
    if (m < 2) throw ContractViolation("pareto needs at least two inputs");

    const Eigen::MatrixXd W1L = lift.eig.W.leftCols(1);
    const Eigen::MatrixXd W1D = drag.eig.W.leftCols(2);
    const Eigen::MatrixXd W2D = drag.eig.W.rightCols(m - 2);
    const auto lift_rs = analysis::fit_link_function(
        analysis::shadow_project(lift.data->X(), lift.data->f(), W1L), W1L, cfg.lift_degree);
    const auto drag_rs = analysis::fit_link_function(
        analysis::shadow_project(drag.data->X(), drag.data->f(), W1D), W1D, cfg.drag_degree);

    const auto policy = analysis::z_policy_from_string(cfg.z_policy);
    const auto segment =
        analysis::pareto_segment(W1D, W2D, cfg.gamma_count, policy, derive_seed(cfg.seed, "pareto/z"));
    const auto front = analysis::pareto_front(segment, lift_rs, drag_rs, cfg.strict);
    analysis::write_pareto_csv(cfg.path("pareto.csv"), front, {meta_comment(cfg)});

    auto designs = csv::open_for_write(cfg.path("pareto_designs.csv"));
    designs << "# " << meta_comment(cfg) << '\n';
    std::vector<std::string> header{"gamma", "feasible"};
    for (Eigen::Index j = 0; j < m; ++j) header.push_back("x" + std::to_string(j + 1));
    csv::write_header(designs, header);
    long feasible = 0;
    for (const auto& p : front) {
        std::vector<double> row{p.gamma, p.feasible ? 1.0 : 0.0};
        for (Eigen::Index j = 0; j < m; ++j) row.push_back(p.x[j]);
        csv::write_row(designs, row);
        feasible += p.feasible ? 1 : 0;
    }
    if (!designs) throw IoError("write failed for pareto_designs.csv");
    write_text(cfg.path("pareto.gp"), "# " + meta_comment(cfg) + "\n" + analysis::pareto_gnuplot("pareto.csv", "pareto.png"));
    write_json(cfg.path("pareto.json"), cfg,
               {{"y1_min", segment.y1_min},
                {"y2_min", segment.y2_min},
                {"points", front.size()},
                {"feasible_points", feasible},
                {"z_policy", cfg.z_policy},
                {"z_tries", segment.z_tries},
                // Reported, not enforced: how closely the lift direction matches drag's second eigenvector.
                {"lift_vs_drag_w2_cosine", std::abs(W1L.col(0).dot(W1D.col(1)))},
                {"lift_surface", surface_json(lift_rs)},
                {"drag_surface", surface_json(drag_rs)}});
    log << "pareto: " << front.size() << " points, " << feasible << " feasible -> " << cfg.path("pareto.csv").string()
        << '\n';
}

void cmd_convergence(const Config& cfg, std::ostream& log) {
    std::vector<long> schedule = cfg.schedule;
    if (schedule.empty()) {
        for (long N = 100; N <= 6400; N *= 2) schedule.push_back(N);
    }
    const int m = input_dimension(cfg);
    const auto built = build_qoi(cfg, cfg.qoi, m);
    as::BootstrapOptions opts;
    opts.n_boot = cfg.nboot;
    opts.seed = derive_seed(cfg.seed, "convergence");
    opts.n = cfg.dim > 0 ? cfg.dim : 1;
    opts.convention = as::convention_from_string(cfg.convention);
    opts.threads = cfg.threads;
    const auto evaluator = built.evaluator;
    const auto rows =
        as::convergence_study(m, [&](const Eigen::VectorXd& x) { return evaluator->evaluate(x); }, schedule, opts);

    auto out = csv::open_for_write(cfg.path("convergence.csv"));
    out << "# " << meta_comment(cfg) << '\n';
    csv::write_header(out, {"N", "error_min", "error_mean", "error_max", "skipped", "failed_evaluations"});
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    json table = json::array();
    for (const auto& r : rows) {
        csv::write_row(out, {static_cast<double>(r.N), r.error.min, r.error.mean, r.error.max,
                             static_cast<double>(r.skipped), static_cast<double>(r.failed_evaluations)});
        json row = range_json(r.error);
        row["N"] = r.N;
        row["skipped"] = r.skipped;
        row["failed_evaluations"] = r.failed_evaluations;
        table.push_back(row);
        if (r.error.mean > 0.0) {
            const double x = std::log(static_cast<double>(r.N));
            const double y = std::log(r.error.mean);
            sx += x, sy += y, sxx += x * x, sxy += x * y, ++k;
        }
    }
    if (!out) throw IoError("write failed for convergence.csv");
    json slope = nullptr;
    if (k >= 2) slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    write_json(cfg.path("convergence.json"), cfg,
               {{"qoi", built.info}, {"n", opts.n}, {"rows", table}, {"loglog_slope", slope}});
    log << "convergence: " << rows.size() << " cells, log-log slope "
        << (slope.is_null() ? std::string("n/a") : csv::format(slope.get<double>(), 4)) << '\n';
}

void cmd_validate(const Config& cfg, std::ostream& log) {
    const auto p = resolve_parameterization(cfg);
    std::string text = cfg.params;
    if (!text.empty() && text.front() != '{' && std::filesystem::exists(text)) {
        std::ifstream in(text);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    }
    const bool is_json = text.find('{') != std::string::npos;
    geometry::AirfoilSurfacePair pair;
    geometry::ValidityOptions opts;
    json params;
    json extra = json::object();
    if (p == Parameterization::Parsec) {
        parsec::ParsecParams pp;
        if (text.empty() || text == "center") {
            const Eigen::VectorXd c = resolve_box(cfg).center();
            pp = parsec::ParsecParams::from_span({c.data(), static_cast<std::size_t>(c.size())});
        } else if (is_json) {
            pp = parsec::from_json(text);
        } else {
            const Eigen::VectorXd v = parse_param_values(text);
            pp = parsec::ParsecParams::from_span({v.data(), static_cast<std::size_t>(v.size())});
        }
        pair = parsec::solve_coefficients(pp);
        opts.sharp_trailing_edge = parsec::has_sharp_trailing_edge(pp);
        params = json::parse(parsec::to_json(pp));
        double residual = 0.0;
        for (auto side : {parsec::Side::Upper, parsec::Side::Lower}) {
            residual = std::max(residual, parsec::solve_surface(parsec::build_constraint_system(pp, side)).residual_inf);
        }
        extra["constraint_residual_inf"] = residual;
        extra["leading_edge_radius"] = pp[11];
    } else {
        cst::CstParams cp;
        if (text.empty() || text == "center") {
            const Eigen::VectorXd c = resolve_box(cfg).center();
            cp = cst::CstParams::from_flat({c.data(), static_cast<std::size_t>(c.size())});
        } else if (is_json) {
            cp = cst::from_json(text);
        } else {
            const Eigen::VectorXd v = parse_param_values(text);
            cp = cst::CstParams::from_flat({v.data(), static_cast<std::size_t>(v.size())});
        }
        pair = cst::to_surface_pair(cp);
        params = json::parse(cst::to_json(cp));
        extra["leading_edge_radius"] = cst::leading_edge_radius(cp.upper[0]);
    }
    opts.grid_size = cfg.grid;
    const auto r = geometry::validate_airfoil(pair, opts);
    json body{{"parameterization", std::string(qoi::to_string(p))},
              {"params", params},
              {"feasible", r.feasible},
              {"bounded", r.bounded},
              {"sign_conforming", r.sign_conforming},
              {"endpoints_fixed", r.endpoints_fixed},
              {"min_gap", r.min_gap},
              {"min_gap_at", r.min_gap_at},
              {"lower_bound", r.lower_bound},
              {"upper_bound", r.upper_bound},
              {"grid_size", r.grid_size},
              {"upper_coefficients", to_json(pair.upper.coeffs.values)},
              {"lower_coefficients", to_json(pair.lower.coeffs.values)}};
    for (auto& [key, value] : extra.items()) body[key] = value;
    write_json(cfg.path("validate.json"), cfg, body);
    log << "validate: feasible=" << (r.feasible ? "true" : "false") << " min_gap=" << csv::format(r.min_gap, 6)
        << " at l=" << csv::format(r.min_gap_at, 6) << '\n';
}

void cmd_run_all(const Config& cfg, std::ostream& log) {
    if (is_dataset(cfg)) {
        Config c = cfg;
        c.data = cfg.qoi.substr(8);
        cmd_fit(c, log);
        cmd_eigs(c, log);
        cmd_bootstrap(c, log);
        cmd_shadow(c, log);
        return;
    }
    cmd_sample(cfg, log);
    if (is_panel(cfg)) {
        cmd_shapes(cfg, log);
        for (const std::string tag : {"_lift", "_drag"}) {
            cmd_evaluate(cfg, log, tag);
            cmd_fit(cfg, log, tag);
            cmd_eigs(cfg, log, tag);
            cmd_bootstrap(cfg, log, tag);
            cmd_shadow(cfg, log, tag);
        }
        cmd_pareto(cfg, log);
        return;
    }
    cmd_evaluate(cfg, log);
    cmd_fit(cfg, log);
    cmd_eigs(cfg, log);
    cmd_bootstrap(cfg, log);
    cmd_shadow(cfg, log);
}

}  // namespace foilspace::cli
