#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace foilspace::cli {

// Everything a subcommand may read. Paths left empty default to files inside `out`.
struct Config {
    std::string command;
    std::string box;               // parsec-table2 | cst-table3 | path to box JSON
    std::string parameterization;  // parsec | cst, inferred from the box when empty
    std::string qoi = "ridge";     // quadratic | ridge[:profile[:noise]] | panel[:lift|:drag] | dataset:PATH
    long n = 1000;
    int m = 10;  // input dimension for synthetic QoIs without a box
    std::uint64_t seed = 0;
    int nboot = 100;
    int dim = 0;  // active dimension, 0 = largest log gap
    std::string convention = "identity";
    std::string out = "foilspace-out";
    std::string samples;
    std::string data;
    std::string lift_data;
    std::string drag_data;
    std::string params;
    int degree = 2;
    int lift_degree = 1;
    int drag_degree = 2;
    int gamma_count = 101;
    std::string z_policy = "zero";
    bool strict = false;
    std::vector<long> schedule;
    unsigned threads = 1;
    int grid = 201;

    std::filesystem::path path(const std::string& name) const { return std::filesystem::path(out) / name; }
    // FNV-1a over every field except the output directory, as 16 hex digits.
    std::string hash() const;
};

void cmd_sample(const Config& cfg, std::ostream& log);
void cmd_shapes(const Config& cfg, std::ostream& log);
void cmd_evaluate(const Config& cfg, std::ostream& log, const std::string& tag = {});
void cmd_fit(const Config& cfg, std::ostream& log, const std::string& tag = {});
void cmd_eigs(const Config& cfg, std::ostream& log, const std::string& tag = {});
void cmd_bootstrap(const Config& cfg, std::ostream& log, const std::string& tag = {});
void cmd_shadow(const Config& cfg, std::ostream& log, const std::string& tag = {});
void cmd_pareto(const Config& cfg, std::ostream& log);
void cmd_convergence(const Config& cfg, std::ostream& log);
void cmd_validate(const Config& cfg, std::ostream& log);
void cmd_run_all(const Config& cfg, std::ostream& log);

}  // namespace foilspace::cli
