#include "foilspace/app.hpp"

#include "foilspace/commands.hpp"
#include "foilspace/errors.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

namespace foilspace::cli {
namespace {

using nlohmann::json;

std::string env_name(std::string flag) {
    std::transform(flag.begin(), flag.end(), flag.begin(), [](unsigned char c) {
        return c == '-' ? '_' : static_cast<char>(std::toupper(c));
    });
    return "FOILSPACE_" + flag;
}

// Each subcommand declares only the flags it reads, so unknown flags are rejected.
class Options {
public:
    Options(CLI::App* sub, Config& cfg) : sub_(sub), cfg_(cfg) {}

    Options& seed() { return add("seed", cfg_.seed, "Root seed; every random stream derives from it"); }
    Options& out() { return add("out", cfg_.out, "Output directory"); }
    Options& box() {
        add("box", cfg_.box, "parsec-table2 | cst-table3 | path to a box JSON file");
        sub_->get_option("--box")->type_name("BOX");
        add("parameterization", cfg_.parameterization, "parsec | cst (inferred from --box when omitted)")
            .check_last(CLI::IsMember({"parsec", "cst"}));
        return *this;
    }
    Options& qoi() {
        add("qoi", cfg_.qoi, "quadratic | ridge[:linear|quadratic|exp[:noise]] | panel[:lift|:drag] | dataset:PATH");
        return add("m", cfg_.m, "Input dimension for synthetic QoIs when no box is given").check_last(CLI::PositiveNumber);
    }
    Options& n() { return add("n", cfg_.n, "Number of samples").check_last(CLI::PositiveNumber); }
    Options& nboot() { return add("nboot", cfg_.nboot, "Bootstrap replicates").check_last(CLI::PositiveNumber); }
    Options& dim() { return add("dim", cfg_.dim, "Active dimension (0 picks the largest eigenvalue gap)"); }
    Options& convention() {
        return add("convention", cfg_.convention, "Input covariance in C = H S H + v v^T")
            .check_last(CLI::IsMember({"identity", "third"}));
    }
    Options& threads() { return add("threads", cfg_.threads, "Bootstrap worker threads (results do not depend on it)"); }
    Options& samples() { return add("samples", cfg_.samples, "Samples CSV (default OUT/samples.csv)"); }
    Options& data() { return add("data", cfg_.data, "Dataset CSV x1..xm,f (default OUT/dataset.csv)"); }
    Options& grid() { return add("grid", cfg_.grid, "Points per surface in exported shapes and validity checks"); }

    template <typename T>
    Options& add(const std::string& name, T& target, const std::string& help) {
        last_ = sub_->add_option("--" + name, target, help)->envname(env_name(name))->capture_default_str();
        return *this;
    }
    Options& check_last(const CLI::Validator& v) {
        last_->check(v);
        return *this;
    }
    CLI::App* sub() { return sub_; }

private:
    CLI::App* sub_;
    Config& cfg_;
    CLI::Option* last_ = nullptr;
};

const char* hint_for(const std::string& kind) {
    static const std::map<std::string, const char*> hints{
        {"usage", "run `foilspace --help` or `foilspace <command> --help`"},
        {"parse_error", "check the file format: header x1..xm[,f], numeric fields, '#' for comments"},
        {"io_error", "check that input files exist (run the preceding pipeline step) and --out is writable"},
        {"contract_violation", "check flag values and that input dimensions agree"},
        {"domain_error", "a parameter lies outside its admissible range"},
        {"range_error", "a point lies outside the parameter box"},
        {"ill_posed_fit", "add samples: the quadratic fit needs at least (m+2 choose 2) well-spread rows"},
        {"conditioning_error", "the PARSEC constraint system is near singular; check crest locations"},
        {"no_structure", "the fitted model is flat; the QoI shows no active direction"},
        {"evaluation_error", "too many QoI evaluations failed; inspect evaluate.json"},
        {"singularity", "derivative requested at the leading edge"},
    };
    const auto it = hints.find(kind);
    return it == hints.end() ? "unexpected failure" : it->second;
}

void report(std::ostream& err, const std::string& command, const std::string& kind, const std::string& message,
            json extra = json::object()) {
    json body{{"kind", kind}, {"message", message}, {"hint", hint_for(kind)}, {"command", command}};
    for (auto& [k, v] : extra.items()) body[k] = v;
    err << json{{"error", body}}.dump() << '\n';
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"foilspace: active subspaces of parameterized airfoil shapes"};
    app.set_version_flag("--version", std::string(FOILSPACE_VERSION_STRING));
    app.require_subcommand(1, 1);
    Config cfg;

    std::map<CLI::App*, std::function<void()>> actions;
    auto command = [&](const std::string& name, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        return Options(sub, cfg);
    };

    {
        auto o = command("sample", "Draw uniform samples on [-1,1]^m");
        o.box().qoi().n().seed().out();
        actions[o.sub()] = [&] { cmd_sample(cfg, out); };
    }
    {
        auto o = command("shapes", "Export coordinate loops for sampled designs");
        o.box().samples().grid().seed().out();
        actions[o.sub()] = [&] { cmd_shapes(cfg, out); };
    }
    {
        auto o = command("evaluate", "Evaluate a QoI on the samples");
        o.box().qoi().samples().seed().convention().out();
        actions[o.sub()] = [&] { cmd_evaluate(cfg, out); };
    }
    {
        auto o = command("fit", "Least-squares global quadratic model");
        o.data().seed().out();
        actions[o.sub()] = [&] { cmd_fit(cfg, out); };
    }
    {
        auto o = command("eigs", "Eigen-decomposition of the model-based C matrix");
        o.data().convention().dim().seed().out();
        actions[o.sub()] = [&] { cmd_eigs(cfg, out); };
    }
    {
        auto o = command("bootstrap", "Bootstrap ranges for eigenvalues and subspace errors");
        o.data().convention().dim().nboot().threads().seed().out();
        actions[o.sub()] = [&] { cmd_bootstrap(cfg, out); };
    }
    {
        auto o = command("shadow", "Shadow-plot data, link-function fit and gnuplot script");
        o.data().convention().dim().seed().out();
        o.add("degree", cfg.degree, "Total degree of the link polynomial");
        actions[o.sub()] = [&] { cmd_shadow(cfg, out); };
    }
    {
        auto o = command("pareto", "Active-variable Pareto segment from lift and drag datasets");
        o.convention().seed().out();
        o.add("lift-data", cfg.lift_data, "Lift dataset (default OUT/dataset_lift.csv)");
        o.add("drag-data", cfg.drag_data, "Drag dataset (default OUT/dataset_drag.csv)");
        o.add("lift-degree", cfg.lift_degree, "Degree of the lift link polynomial");
        o.add("drag-degree", cfg.drag_degree, "Degree of the drag link polynomial");
        o.add("gamma-count", cfg.gamma_count, "Points on the segment");
        o.add("z-policy", cfg.z_policy, "Inactive coordinates").check_last(CLI::IsMember({"zero", "random-feasible"}));
        o.sub()->add_flag("--strict", cfg.strict, "Drop infeasible segment points")->envname("FOILSPACE_STRICT");
        actions[o.sub()] = [&] { cmd_pareto(cfg, out); };
    }
    {
        auto o = command("convergence", "Subspace error vs N under bootstrap");
        o.box().qoi().nboot().dim().convention().threads().seed().out();
        o.sub()->add_option("--schedule", cfg.schedule, "Comma-separated ascending N values (default 100..6400 doubling)")
            ->delimiter(',')
            ->envname("FOILSPACE_SCHEDULE");
        actions[o.sub()] = [&] { cmd_convergence(cfg, out); };
    }
    {
        auto o = command("validate", "Geometric validity of one parameter vector");
        o.box().grid().seed().out();
        o.add("params", cfg.params, "JSON text, JSON file, comma list, or 'center' of the box");
        actions[o.sub()] = [&] { cmd_validate(cfg, out); };
    }
    {
        auto o = command("run-all", "sample -> evaluate -> fit -> eigs -> bootstrap -> shadow (-> pareto for panel)");
        o.box().qoi().n().nboot().dim().convention().threads().grid().seed().out();
        o.add("degree", cfg.degree, "Total degree of the link polynomial");
        o.add("z-policy", cfg.z_policy, "Inactive coordinates").check_last(CLI::IsMember({"zero", "random-feasible"}));
        o.add("gamma-count", cfg.gamma_count, "Points on the Pareto segment");
        actions[o.sub()] = [&] { cmd_run_all(cfg, out); };
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        report(err, "", "usage", e.what());
        return 2;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.command = chosen->get_name();
    try {
        actions.at(chosen)();
    } catch (const ParseError& e) {
        report(err, cfg.command, e.kind(), e.what(), {{"line", e.line()}});
        return 1;
    } catch (const EvaluationError& e) {
        report(err, cfg.command, e.kind(), e.what(), {{"row", e.row()}});
        return 1;
    } catch (const IllPosedFit& e) {
        report(err, cfg.command, e.kind(), e.what(), {{"rank", e.rank()}, {"columns", e.columns()}});
        return 1;
    } catch (const Error& e) {
        report(err, cfg.command, e.kind(), e.what());
        return 1;
    } catch (const std::exception& e) {
        report(err, cfg.command, "internal", e.what());
        return 1;
    }
    return 0;
}

}  // namespace foilspace::cli
