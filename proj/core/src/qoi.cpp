#include "foilspace/qoi.hpp"

#include "foilspace/csv.hpp"
#include "foilspace/cst.hpp"
#include "foilspace/errors.hpp"
#include "foilspace/parsec.hpp"
#include "foilspace/random.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace foilspace::qoi {
namespace {

void check_dimension(const Eigen::VectorXd& x, int m, const std::string& who) {
    if (x.size() != m) {
        throw ContractViolation(who + ": expected " + std::to_string(m) + " inputs, got " + std::to_string(x.size()));
    }
}

class QuadraticQoi final : public QoiEvaluator {
public:
    QuadraticQoi(Eigen::MatrixXd H, Eigen::VectorXd v, double c) : H_(std::move(H)), v_(std::move(v)), c_(c) {}

    std::string name() const override { return "quadratic"; }
    int dimension() const override { return static_cast<int>(v_.size()); }
    std::string description() const override { return "1/2 x^T H x + v^T x + c"; }
    double evaluate(const Eigen::VectorXd& x) const override {
        check_dimension(x, dimension(), "quadratic");
        return 0.5 * x.dot(H_ * x) + v_.dot(x) + c_;
    }

private:
    Eigen::MatrixXd H_;
    Eigen::VectorXd v_;
    double c_;
};

// Standard normal keyed on the exact bit pattern of x.
double hashed_normal(const Eigen::VectorXd& x, std::uint64_t seed) {
    std::uint64_t h = splitmix64(seed);
    for (Eigen::Index i = 0; i < x.size(); ++i) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(x[i]));
    const double u1 = (static_cast<double>(splitmix64(h) >> 11) + 0.5) * 0x1.0p-53;
    const double u2 = static_cast<double>(splitmix64(h ^ 0x5851f42d4c957f2dULL) >> 11) * 0x1.0p-53;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

class RidgeQoi final : public QoiEvaluator {
public:
    RidgeQoi(Eigen::VectorXd w, RidgeProfile profile, double noise, std::uint64_t seed)
        : w_(std::move(w)), profile_(profile), noise_(noise), seed_(seed) {
        w_ /= w_.norm();
    }

    std::string name() const override { return "ridge"; }
    int dimension() const override { return static_cast<int>(w_.size()); }
    std::string description() const override {
        std::ostringstream os;
        os << "g(w^T x), g = " << to_string(profile_) << ", noise sigma = " << noise_;
        return os.str();
    }
    double evaluate(const Eigen::VectorXd& x) const override {
        check_dimension(x, dimension(), "ridge");
        double f = ridge_profile(profile_, w_.dot(x));
        if (noise_ != 0.0) f += noise_ * hashed_normal(x, seed_);
        return f;
    }

private:
    Eigen::VectorXd w_;
    RidgeProfile profile_;
    double noise_;
    std::uint64_t seed_;
};

enum class PanelOutput { Lift, Drag };

class PanelQoi final : public QoiEvaluator {
public:
    PanelQoi(Parameterization p, sampling::ParameterBox box, SurrogateCoefficients k, PanelOutput which)
        : p_(p), box_(std::move(box)), k_(k), which_(which) {}

    std::string name() const override { return which_ == PanelOutput::Lift ? "panel-lift" : "panel-drag"; }
    int dimension() const override { return box_.dimension(); }
    std::string description() const override {
        return std::string("qualitative ") + (which_ == PanelOutput::Lift ? "thin-airfoil lift" : "thickness drag") +
               " surrogate over " + std::string(to_string(p_)) + " shapes (not CFD)";
    }
    double evaluate(const Eigen::VectorXd& x) const override {
        check_dimension(x, dimension(), name());
        geometry::AirfoilSurfacePair pair;
        try {
            pair = decode(p_, box_, x);
        } catch (const EvaluationError&) {
            throw;
        } catch (const Error& e) {
            throw EvaluationError(std::string("decode failed: ") + e.what());
        }
        const auto out = panel_outputs(pair, validity_options(p_, box_, x), k_);
        return which_ == PanelOutput::Lift ? out.lift : out.drag;
    }

private:
    Parameterization p_;
    sampling::ParameterBox box_;
    SurrogateCoefficients k_;
    PanelOutput which_;
};

std::string report_summary(const geometry::ValidityReport& r) {
    std::ostringstream os;
    os.precision(6);
    os << "feasible=" << (r.feasible ? "true" : "false") << " bounded=" << (r.bounded ? "true" : "false")
       << " endpoints_fixed=" << (r.endpoints_fixed ? "true" : "false") << " min_gap=" << r.min_gap
       << " at l=" << r.min_gap_at << " grid=" << r.grid_size;
    return os.str();
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) out.push_back(field);
    return out;
}

}  // namespace

EvaluatorPtr synthetic_quadratic(Eigen::MatrixXd H, Eigen::VectorXd v, double c) {
    if (H.rows() != H.cols() || H.rows() != v.size() || v.size() < 1) {
        throw ContractViolation("synthetic quadratic: H must be m x m and v of length m");
    }
    const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
    if ((H - H.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ContractViolation("synthetic quadratic: H must be symmetric");
    }
    return std::make_shared<QuadraticQoi>(std::move(H), std::move(v), c);
}

std::string_view to_string(RidgeProfile profile) {
    switch (profile) {
        case RidgeProfile::Linear: return "linear";
        case RidgeProfile::Quadratic: return "quadratic";
        case RidgeProfile::Exp: return "exp";
    }
    return "unknown";
}

RidgeProfile ridge_profile_from_string(std::string_view name) {
    if (name == "linear") return RidgeProfile::Linear;
    if (name == "quadratic") return RidgeProfile::Quadratic;
    if (name == "exp") return RidgeProfile::Exp;
    throw ContractViolation("unknown ridge profile '" + std::string(name) + "' (expected linear|quadratic|exp)");
}

double ridge_profile(RidgeProfile profile, double y) {
    switch (profile) {
        case RidgeProfile::Linear: return y;
        case RidgeProfile::Quadratic: return y * y;
        case RidgeProfile::Exp: return std::exp(y);
    }
    return 0.0;
}

EvaluatorPtr ridge(Eigen::VectorXd w, RidgeProfile profile, double noise, std::uint64_t noise_seed) {
    if (w.size() < 1 || !w.allFinite() || !(w.norm() > 0.0)) {
        throw ContractViolation("ridge direction must be a finite non-zero vector");
    }
    if (!std::isfinite(noise) || noise < 0.0) throw ContractViolation("ridge noise must be finite and >= 0");
    return std::make_shared<RidgeQoi>(std::move(w), profile, noise, noise_seed);
}

std::string_view to_string(Parameterization p) { return p == Parameterization::Parsec ? "parsec" : "cst"; }

Parameterization parameterization_from_string(std::string_view name) {
    if (name == "parsec") return Parameterization::Parsec;
    if (name == "cst") return Parameterization::Cst;
    throw ContractViolation("unknown parameterization '" + std::string(name) + "' (expected parsec|cst)");
}

geometry::AirfoilSurfacePair decode(Parameterization p, const sampling::ParameterBox& box,
                                    const Eigen::VectorXd& normalized) {
    const Eigen::VectorXd physical = sampling::denormalize(normalized, box);
    const std::span<const double> values(physical.data(), static_cast<std::size_t>(physical.size()));
    if (p == Parameterization::Parsec) return parsec::solve_coefficients(parsec::ParsecParams::from_span(values));
    return cst::to_surface_pair(cst::CstParams::from_flat(values));
}

geometry::ValidityOptions validity_options(Parameterization p, const sampling::ParameterBox& box,
                                           const Eigen::VectorXd& normalized) {
    geometry::ValidityOptions opts;
    if (p == Parameterization::Parsec) {
        const Eigen::VectorXd physical = sampling::denormalize(normalized, box);
        opts.sharp_trailing_edge = physical.size() >= 6 && physical[4] == 0.0 && physical[5] == 0.0;
    }
    return opts;
}

double lift_like(const geometry::AirfoilSurfacePair& pair, int grid_size) {
    if (grid_size < 3 || grid_size % 2 == 0) throw ContractViolation("lift quadrature needs an odd grid >= 3");
    // With t = sin(theta/2): dc/dl (cos theta - 1) = -t dc/dt, smooth on [0, pi].
    const auto integrand = [&](double theta) {
        const double t = std::sin(0.5 * theta);
        const double dct = 0.5 * (geometry::shape_derivative_t(pair.upper.coeffs, pair.upper.basis, t) +
                                  geometry::shape_derivative_t(pair.lower.coeffs, pair.lower.basis, t));
        return -t * dct;
    };
    const int intervals = grid_size - 1;
    const double h = std::numbers::pi / intervals;
    double sum = integrand(0.0) + integrand(std::numbers::pi);
    for (int i = 1; i < intervals; ++i) sum += (i % 2 ? 4.0 : 2.0) * integrand(i * h);
    return 2.0 * (h / 3.0) * sum;
}

double drag_like(const geometry::AirfoilSurfacePair& pair, const SurrogateCoefficients& k) {
    double thickness = 0.0;
    for (double t : geometry::t_grid(k.grid_size)) {
        thickness = std::max(thickness, geometry::eval_shape_t(pair.upper, t) - geometry::eval_shape_t(pair.lower, t));
    }
    return k.kappa0 + k.kappa1 * thickness * thickness;
}

SurrogateOutputs panel_outputs(const geometry::AirfoilSurfacePair& pair, const geometry::ValidityOptions& validity,
                               const SurrogateCoefficients& k) {
    geometry::ValidityOptions opts = validity;
    opts.grid_size = k.grid_size;
    const auto report = geometry::validate_airfoil(pair, opts);
    if (!report.feasible || !report.bounded) {
        throw EvaluationError("infeasible airfoil: " + report_summary(report));
    }
    return {lift_like(pair, k.grid_size % 2 ? k.grid_size : k.grid_size + 1), drag_like(pair, k)};
}

PanelPair panel_surrogate(Parameterization p, sampling::ParameterBox box, SurrogateCoefficients k) {
    box.validate();
    const int expected = p == Parameterization::Parsec ? 11 : box.dimension();
    if (box.dimension() != expected || (p == Parameterization::Cst && box.dimension() % 2 != 0)) {
        throw ContractViolation("box dimension " + std::to_string(box.dimension()) + " does not fit the " +
                                std::string(to_string(p)) + " parameterization");
    }
    return {std::make_shared<PanelQoi>(p, box, k, PanelOutput::Lift),
            std::make_shared<PanelQoi>(p, std::move(box), k, PanelOutput::Drag)};
}

DatasetQoi::DatasetQoi(Eigen::MatrixXd X, std::optional<Eigen::VectorXd> f, double tolerance, std::string provenance)
    : X_(std::move(X)), f_(std::move(f)), tolerance_(tolerance), provenance_(std::move(provenance)) {
    if (X_.cols() < 1) throw ContractViolation("dataset needs at least one input column");
    if (f_ && f_->size() != X_.rows()) throw ContractViolation("dataset outputs do not match row count");
    if (!f_) return;
    for (Eigen::Index i = 0; i < X_.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < X_.rows(); ++j) {
            if ((X_.row(i) - X_.row(j)).cwiseAbs().maxCoeff() <= tolerance_ && (*f_)[i] != (*f_)[j]) {
                throw ContractViolation("dataset rows " + std::to_string(i + 1) + " and " + std::to_string(j + 1) +
                                        " share x but disagree on f");
            }
        }
    }
}

std::string DatasetQoi::description() const {
    return "file-backed dataset, " + std::to_string(X_.rows()) + " rows" +
           (provenance_.empty() ? std::string() : "; " + provenance_);
}

const Eigen::VectorXd& DatasetQoi::f() const {
    if (!f_) throw ContractViolation("dataset has no f column (unevaluated design set)");
    return *f_;
}

double DatasetQoi::evaluate(const Eigen::VectorXd& x) const {
    check_dimension(x, dimension(), "dataset");
    if (!f_) throw EvaluationError("dataset has no outputs to look up");
    for (Eigen::Index i = 0; i < X_.rows(); ++i) {
        if ((X_.row(i).transpose() - x).cwiseAbs().maxCoeff() <= tolerance_) return (*f_)[i];
    }
    throw EvaluationError("point not present in dataset");
}

std::shared_ptr<DatasetQoi> load_dataset(const std::filesystem::path& path, double tolerance) {
    const auto table = csv::read(path);
    const auto& header = table.header;
    const bool has_f = !header.empty() && header.back() == "f";
    const std::size_t m = has_f ? header.size() - 1 : header.size();
    if (m < 1) throw ParseError(path.string() + ": header has no input columns", 1);
    for (std::size_t i = 0; i < m; ++i) {
        if (header[i] != "x" + std::to_string(i + 1)) {
            throw ParseError(path.string() + ": header column " + std::to_string(i + 1) + " is '" + header[i] +
                                 "', expected 'x" + std::to_string(i + 1) + "'",
                             1);
        }
    }
    Eigen::MatrixXd X(static_cast<Eigen::Index>(table.rows.size()), static_cast<Eigen::Index>(m));
    Eigen::VectorXd f(static_cast<Eigen::Index>(table.rows.size()));
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        for (std::size_t c = 0; c < m; ++c) X(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = table.rows[r][c];
        if (has_f) f[static_cast<Eigen::Index>(r)] = table.rows[r][m];
    }
    std::string provenance;
    for (const auto& c : table.comments) {
        if (!provenance.empty()) provenance += "; ";
        provenance += c.substr(c.find_first_not_of("# "));
    }
    try {
        return std::make_shared<DatasetQoi>(std::move(X), has_f ? std::optional<Eigen::VectorXd>(std::move(f)) : std::nullopt,
                                            tolerance, std::move(provenance));
    } catch (const ContractViolation& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_dataset(const std::filesystem::path& path, const Eigen::MatrixXd& X, const Eigen::VectorXd& f,
                   const std::vector<std::string>& comments) {
    if (f.size() != X.rows()) throw ContractViolation("write_dataset: output count does not match rows");
    auto out = csv::open_for_write(path);
    for (const auto& c : comments) out << "# " << c << '\n';
    std::vector<std::string> header;
    for (Eigen::Index j = 0; j < X.cols(); ++j) header.push_back("x" + std::to_string(j + 1));
    header.push_back("f");
    csv::write_header(out, header);
    std::vector<double> row(static_cast<std::size_t>(X.cols() + 1));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) row[static_cast<std::size_t>(j)] = X(i, j);
        row.back() = f[i];
        csv::write_row(out, row);
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

std::vector<ExportRecord> export_designs(const Eigen::MatrixXd& X, Parameterization p, const sampling::ParameterBox& box,
                                         const std::filesystem::path& directory, int grid_size,
                                         const std::vector<std::string>& comments) {
    if (X.cols() != box.dimension()) {
        throw ContractViolation("export_designs: rows have " + std::to_string(X.cols()) + " columns, box has " +
                                std::to_string(box.dimension()));
    }
    std::error_code ec;
    std::filesystem::create_directories(directory, ec);
    if (ec) throw IoError("cannot create '" + directory.string() + "': " + ec.message());

    std::vector<ExportRecord> records;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        ExportRecord rec;
        rec.row = static_cast<long>(i);
        const Eigen::VectorXd x = X.row(i).transpose();
        try {
            const auto pair = decode(p, box, x);
            rec.feasible = geometry::validate_airfoil(pair, validity_options(p, box, x)).feasible;
            char name[32];
            std::snprintf(name, sizeof name, "design_%05ld.dat", rec.row);
            rec.file = name;
            geometry::write_coordinate_loop(directory / rec.file, pair, grid_size);
        } catch (const IoError&) {
            throw;
        } catch (const Error&) {
            rec.feasible = false;
            rec.file.clear();
        }
        records.push_back(rec);
    }

    auto out = csv::open_for_write(directory / "manifest.csv");
    for (const auto& c : comments) out << "# " << c << '\n';
    out << "row,file,feasible";
    for (Eigen::Index j = 0; j < X.cols(); ++j) out << ",x" << (j + 1);
    out << '\n';
    for (const auto& rec : records) {
        out << rec.row << ',' << rec.file << ',' << (rec.feasible ? 1 : 0);
        for (Eigen::Index j = 0; j < X.cols(); ++j) out << ',' << csv::format(X(rec.row, j), 17);
        out << '\n';
    }
    if (!out) throw IoError("write failed for manifest in '" + directory.string() + "'");
    return records;
}

Manifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    Manifest manifest;
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    std::size_t m = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_fields(line);
        if (!have_header) {
            if (fields.size() < 4 || fields[0] != "row" || fields[1] != "file" || fields[2] != "feasible") {
                throw ParseError(path.string() + ": manifest header must start with row,file,feasible,x1", lineno);
            }
            m = fields.size() - 3;
            have_header = true;
            continue;
        }
        if (fields.size() != m + 3) throw ParseError(path.string() + ": wrong field count", lineno);
        ExportRecord rec;
        rec.file = fields[1];
        rec.feasible = fields[2] == "1";
        std::vector<double> x(m);
        try {
            rec.row = std::stol(fields[0]);
        } catch (const std::exception&) {
            throw ParseError(path.string() + ": bad row index", lineno);
        }
        for (std::size_t j = 0; j < m; ++j) {
            const auto& s = fields[j + 3];
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x[j]);
            if (ec != std::errc{} || ptr != s.data() + s.size()) throw ParseError(path.string() + ": not a number", lineno);
        }
        manifest.records.push_back(rec);
        rows.push_back(std::move(x));
    }
    if (!have_header) throw ParseError(path.string() + ": missing header", 0);
    manifest.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < m; ++j) manifest.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
    return manifest;
}

BatchResult evaluate_batch(const QoiEvaluator& qoi, const Eigen::MatrixXd& X) {
    if (X.cols() != qoi.dimension()) {
        throw ContractViolation("evaluate_batch: " + qoi.name() + " expects " + std::to_string(qoi.dimension()) +
                                " inputs, rows have " + std::to_string(X.cols()));
    }
    BatchResult result;
    std::vector<double> values;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        try {
            values.push_back(qoi.evaluate(X.row(i).transpose()));
            result.kept_rows.push_back(static_cast<long>(i));
        } catch (const EvaluationError& e) {
            result.failed_rows.push_back(static_cast<long>(i));
            result.failure_messages.push_back(e.what());
        }
    }
    result.X.resize(static_cast<Eigen::Index>(result.kept_rows.size()), X.cols());
    result.f.resize(static_cast<Eigen::Index>(values.size()));
    for (std::size_t k = 0; k < result.kept_rows.size(); ++k) {
        result.X.row(static_cast<Eigen::Index>(k)) = X.row(result.kept_rows[k]);
        result.f[static_cast<Eigen::Index>(k)] = values[k];
    }
    return result;
}

}  // namespace foilspace::qoi
