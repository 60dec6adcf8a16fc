#pragma once

#include "foilspace/commands.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace foilspace::cli {

using nlohmann::json;

// Provenance carried by every artifact: tool version, root seed, config hash.
std::string meta_comment(const Config& cfg);
json meta_json(const Config& cfg);

json to_json(const Eigen::VectorXd& v);
// Row-major nested arrays.
json to_json(const Eigen::MatrixXd& M);
Eigen::VectorXd vector_from_json(const json& j);
Eigen::MatrixXd matrix_from_json(const json& j);

// Pretty JSON (sorted keys) with a trailing newline and a "meta" block.
void write_json(const std::filesystem::path& path, const Config& cfg, json body);
json read_json(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace foilspace::cli
