#include "foilspace/artifacts.hpp"

#include "foilspace/csv.hpp"
#include "foilspace/errors.hpp"
#include "foilspace/random.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace foilspace::cli {

std::string Config::hash() const {
    std::ostringstream os;
    os << "command=" << command << "\nbox=" << box << "\nparameterization=" << parameterization << "\nqoi=" << qoi
       << "\nn=" << n << "\nm=" << m << "\nseed=" << seed << "\nnboot=" << nboot << "\ndim=" << dim
       << "\nconvention=" << convention << "\nsamples=" << samples << "\ndata=" << data << "\nlift_data=" << lift_data
       << "\ndrag_data=" << drag_data << "\nparams=" << params << "\ndegree=" << degree
       << "\nlift_degree=" << lift_degree << "\ndrag_degree=" << drag_degree << "\ngamma_count=" << gamma_count
       << "\nz_policy=" << z_policy << "\nstrict=" << strict << "\ngrid=" << grid << "\nschedule=";
    for (long s : schedule) os << s << ',';
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(os.str())));
    return buf;
}

std::string meta_comment(const Config& cfg) {
    return std::string("foilspace ") + FOILSPACE_VERSION_STRING + " seed=" + std::to_string(cfg.seed) +
           " config=" + cfg.hash() + " rng=" + std::string(kRngName);
}

json meta_json(const Config& cfg) {
    return json{{"tool", "foilspace"},
                {"version", FOILSPACE_VERSION_STRING},
                {"command", cfg.command},
                {"seed", cfg.seed},
                {"config", cfg.hash()},
                {"rng", std::string(kRngName)}};
}

json to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
    return a;
}

json to_json(const Eigen::MatrixXd& M) {
    json a = json::array();
    for (Eigen::Index i = 0; i < M.rows(); ++i) a.push_back(to_json(Eigen::VectorXd(M.row(i).transpose())));
    return a;
}

Eigen::VectorXd vector_from_json(const json& j) {
    if (!j.is_array()) throw ParseError("expected a JSON array of numbers");
    Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
    return v;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("expected a JSON array of rows");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(j[0].size()));
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (j[i].size() != j[0].size()) throw ParseError("ragged matrix in JSON");
        M.row(static_cast<Eigen::Index>(i)) = vector_from_json(j[i]).transpose();
    }
    return M;
}

void write_json(const std::filesystem::path& path, const Config& cfg, json body) {
    json doc = json::object();
    doc["meta"] = meta_json(cfg);
    for (auto& [key, value] : body.items()) doc[key] = value;
    write_text(path, doc.dump(2) + "\n");
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    auto out = csv::open_for_write(path);
    out << text;
    if (!out) throw IoError("write failed for '" + path.string() + "'");
}

}  // namespace foilspace::cli
