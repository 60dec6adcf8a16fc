#include "foilspace/sampling.hpp"

#include "foilspace/csv.hpp"
#include "foilspace/errors.hpp"
#include "foilspace/random.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace foilspace::sampling {
namespace {

std::string num(double v) { return csv::format(v, 17); }

const std::string& label_at(const ParameterBox& box, Eigen::Index i) {
    static const std::string empty;
    return static_cast<std::size_t>(i) < box.labels.size() ? box.labels[static_cast<std::size_t>(i)] : empty;
}

std::vector<std::string> default_labels(Eigen::Index m) {
    std::vector<std::string> labels;
    for (Eigen::Index i = 0; i < m; ++i) labels.push_back("x" + std::to_string(i + 1));
    return labels;
}

}  // namespace

void ParameterBox::canonicalize() {
    if (lower.size() != upper.size()) throw ContractViolation("box lower/upper lengths differ");
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (lower[i] > upper[i]) std::swap(lower[i], upper[i]);
    }
    validate();
}

void ParameterBox::validate() const {
    if (lower.size() < 1) throw ContractViolation("box must have at least one coordinate");
    if (lower.size() != upper.size()) throw ContractViolation("box lower/upper lengths differ");
    if (!labels.empty() && labels.size() != static_cast<std::size_t>(lower.size())) {
        throw ContractViolation("box has " + std::to_string(labels.size()) + " labels for " +
                                std::to_string(lower.size()) + " coordinates");
    }
    for (Eigen::Index i = 0; i < lower.size(); ++i) {
        if (!std::isfinite(lower[i]) || !std::isfinite(upper[i]) || !(lower[i] < upper[i])) {
            throw ContractViolation("box coordinate " + label_at(*this, i) + " has invalid interval [" + num(lower[i]) +
                                    ", " + num(upper[i]) + "]");
        }
    }
}

ParameterBox ParameterBox::from_bounds(Eigen::VectorXd lower, Eigen::VectorXd upper, std::vector<std::string> labels) {
    ParameterBox box;
    if (labels.empty()) labels = default_labels(lower.size());
    box.lower = std::move(lower);
    box.upper = std::move(upper);
    box.labels = std::move(labels);
    box.canonicalize();
    return box;
}

ParameterBox make_box(const Eigen::VectorXd& center, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw ContractViolation("box fraction must lie in (0, 1)");
    if (center.size() < 1) throw ContractViolation("box center must be non-empty");
    Eigen::VectorXd lo(center.size());
    Eigen::VectorXd hi(center.size());
    for (Eigen::Index i = 0; i < center.size(); ++i) {
        if (!std::isfinite(center[i])) throw ContractViolation("box center x" + std::to_string(i + 1) + " is not finite");
        if (center[i] == 0.0) {
            throw DomainError("degenerate interval for x" + std::to_string(i + 1) + ": center is zero");
        }
        lo[i] = center[i] * (1.0 - fraction);
        hi[i] = center[i] * (1.0 + fraction);
    }
    return ParameterBox::from_bounds(std::move(lo), std::move(hi));
}

Eigen::VectorXd normalize(const Eigen::VectorXd& physical, const ParameterBox& box) {
    if (physical.size() != box.dimension()) {
        throw ContractViolation("normalize: expected " + std::to_string(box.dimension()) + " coordinates, got " +
                                std::to_string(physical.size()));
    }
    Eigen::VectorXd out(physical.size());
    for (Eigen::Index i = 0; i < physical.size(); ++i) {
        const double width = box.upper[i] - box.lower[i];
        const double slack = kBoxTolerance * width;
        if (!(physical[i] >= box.lower[i] - slack && physical[i] <= box.upper[i] + slack)) {
            throw RangeError("coordinate " + label_at(box, i) + " = " + num(physical[i]) + " outside [" +
                             num(box.lower[i]) + ", " + num(box.upper[i]) + "]");
        }
        out[i] = 2.0 * (physical[i] - box.lower[i]) / width - 1.0;
    }
    return out;
}

Eigen::VectorXd denormalize(const Eigen::VectorXd& normalized, const ParameterBox& box) {
    if (normalized.size() != box.dimension()) {
        throw ContractViolation("denormalize: expected " + std::to_string(box.dimension()) + " coordinates, got " +
                                std::to_string(normalized.size()));
    }
    Eigen::VectorXd out(normalized.size());
    for (Eigen::Index i = 0; i < normalized.size(); ++i) {
        const double z = normalized[i];
        if (!(z >= -1.0 - kBoxTolerance && z <= 1.0 + kBoxTolerance)) {
            throw RangeError("normalized coordinate " + label_at(box, i) + " = " + num(z) + " outside [-1, 1]");
        }
        out[i] = box.lower[i] + 0.5 * (z + 1.0) * (box.upper[i] - box.lower[i]);
    }
    return out;
}

Eigen::MatrixXd sample_hypercube(int dimension, int count, std::uint64_t seed) {
    if (count < 1) throw ContractViolation("sample count must be >= 1");
    if (dimension < 1) throw ContractViolation("sample dimension must be >= 1");
    Eigen::MatrixXd X(count, dimension);
    for (int i = 0; i < count; ++i) {
        Stream rng(seed, static_cast<std::uint64_t>(i));
        for (int j = 0; j < dimension; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
    }
    return X;
}

SampleSet sample(const ParameterBox& box, int count, std::uint64_t seed) {
    box.validate();
    SampleSet set;
    set.X = sample_hypercube(box.dimension(), count, seed);
    set.seed = seed;
    set.box = box;
    return set;
}

ParameterBox parsec_table2() {
    Eigen::VectorXd lo(11);
    Eigen::VectorXd hi(11);
    // Rows as published; x7 and x9 list (lower, upper) reversed and are sorted below.
    lo << 0.242, 0.242, 0.048, -0.072, -0.004, 0.008, -2.223, 7.40, -0.400, 0.400, 0.012;
    hi << 0.363, 0.363, 0.072, -0.048, 0.004, 0.012, -3.335, 11.10, -0.600, 0.600, 0.018;
    return ParameterBox::from_bounds(std::move(lo), std::move(hi));
}

ParameterBox cst_table3() {
    Eigen::VectorXd lo(10);
    Eigen::VectorXd hi(10);
    lo << 0.12, 0.8, 0.8, 0.8, 0.8, -0.12, 0.8, 0.8, 0.8, 0.8;
    hi << 0.18, 1.2, 1.2, 1.2, 1.2, -0.18, 1.2, 1.2, 1.2, 1.2;
    return ParameterBox::from_bounds(std::move(lo), std::move(hi));
}

std::string box_to_json(const ParameterBox& box) {
    nlohmann::ordered_json j;
    j["labels"] = box.labels.empty() ? default_labels(box.dimension()) : box.labels;
    j["lower"] = std::vector<double>(box.lower.begin(), box.lower.end());
    j["upper"] = std::vector<double>(box.upper.begin(), box.upper.end());
    return j.dump(2);
}

ParameterBox box_from_json(std::string_view text) {
    try {
        const auto j = nlohmann::json::parse(text);
        const auto lo = j.at("lower").get<std::vector<double>>();
        const auto hi = j.at("upper").get<std::vector<double>>();
        std::vector<std::string> labels;
        if (j.contains("labels")) labels = j.at("labels").get<std::vector<std::string>>();
        return ParameterBox::from_bounds(Eigen::Map<const Eigen::VectorXd>(lo.data(), static_cast<Eigen::Index>(lo.size())),
                                         Eigen::Map<const Eigen::VectorXd>(hi.data(), static_cast<Eigen::Index>(hi.size())),
                                         std::move(labels));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("box JSON: ") + e.what());
    }
}

ParameterBox load_box(std::string_view name_or_path) {
    if (name_or_path == "parsec-table2") return parsec_table2();
    if (name_or_path == "cst-table3") return cst_table3();
    std::ifstream in{std::string(name_or_path)};
    if (!in) {
        throw IoError("box '" + std::string(name_or_path) +
                      "' is neither a built-in table (parsec-table2, cst-table3) nor a readable file");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return box_from_json(ss.str());
}

void write_samples(const std::filesystem::path& path, const Eigen::MatrixXd& X, const std::vector<std::string>& comments) {
    auto out = csv::open_for_write(path);
    for (const auto& c : comments) out << "# " << c << '\n';
    csv::write_header(out, default_labels(X.cols()));
    std::vector<double> row(static_cast<std::size_t>(X.cols()));
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
        for (Eigen::Index j = 0; j < X.cols(); ++j) row[static_cast<std::size_t>(j)] = X(i, j);
        csv::write_row(out, row);
    }
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace foilspace::sampling
