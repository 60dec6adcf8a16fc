#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace foilspace::sampling {

// Axis-aligned box defining the uniform density over physical parameters.
// Invariant: lower(i) < upper(i) for every coordinate.
struct ParameterBox {
    Eigen::VectorXd lower;
    Eigen::VectorXd upper;
    std::vector<std::string> labels;

    int dimension() const { return static_cast<int>(lower.size()); }
    Eigen::VectorXd center() const { return 0.5 * (lower + upper); }

    // Sorts reversed pairs and checks the invariant. Throws ContractViolation.
    void canonicalize();
    void validate() const;

    // Builds labels x1..xm when none are given.
    static ParameterBox from_bounds(Eigen::VectorXd lower, Eigen::VectorXd upper,
                                    std::vector<std::string> labels = {});
};

// center * (1 -/+ fraction), sorted per coordinate. A zero center coordinate
// gives a degenerate interval and throws DomainError naming the coordinate.
ParameterBox make_box(const Eigen::VectorXd& center, double fraction);

// Affine map of the box onto [-1, 1]^m and back. Out-of-box input throws
// RangeError naming the offending coordinate.
Eigen::VectorXd normalize(const Eigen::VectorXd& physical, const ParameterBox& box);
Eigen::VectorXd denormalize(const Eigen::VectorXd& normalized, const ParameterBox& box);

// Slack allowed on the box boundary when checking membership.
inline constexpr double kBoxTolerance = 1e-12;

struct SampleSet {
    Eigen::MatrixXd X;  // N x m, rows in [-1, 1]^m
    std::uint64_t seed = 0;
    ParameterBox box;
};

// N iid uniform draws on [-1, 1]^m. Row i comes from stream (seed, i), so the
// result does not depend on generation order.
SampleSet sample(const ParameterBox& box, int count, std::uint64_t seed);

// Uniform rows on [-1, 1]^m without a physical box.
Eigen::MatrixXd sample_hypercube(int dimension, int count, std::uint64_t seed);

// Built-in boxes reproducing the published PARSEC and CST parameter ranges.
ParameterBox parsec_table2();
ParameterBox cst_table3();

// "parsec-table2", "cst-table3", or a path to a box JSON file.
ParameterBox load_box(std::string_view name_or_path);

// {"labels": [...], "lower": [...], "upper": [...]}
std::string box_to_json(const ParameterBox& box);
ParameterBox box_from_json(std::string_view text);

// x1..xm header; 17 significant digits; optional leading comment lines.
void write_samples(const std::filesystem::path& path, const Eigen::MatrixXd& X,
                   const std::vector<std::string>& comments = {});

}  // namespace foilspace::sampling
