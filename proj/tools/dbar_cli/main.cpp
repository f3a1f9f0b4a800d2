#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "dbar/cli/experiments.hpp"
#include "dbar/error.hpp"

namespace {

constexpr int kExitFailedCheck = 1;
constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

std::string experiment_help() {
    std::string s = "experiment to run:";
    for (const auto& n : dbar::cli::experiment_names()) s += " " + n;
    return s;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace dbar::cli;

    CLI::App app{"Cauchy-Green and dbar solver experiments"};
    app.set_version_flag("--version", "dbar 1.0.0");

    std::string config_path, experiment, out, format, seed, nodes, mesh;
    std::vector<std::string> sets;
    bool list = false;

    app.add_option("-c,--config", config_path, "INI config file")->envname("DBAR_CONFIG");
    app.add_option("-e,--experiment", experiment, experiment_help())->envname("DBAR_EXPERIMENT");
    app.add_option("-o,--out", out, "output path (default stdout)")->envname("DBAR_OUT");
    app.add_option("-f,--format", format, "csv or json")->envname("DBAR_FORMAT");
    app.add_option("--seed", seed, "random seed")->envname("DBAR_SEED");
    app.add_option("--nodes", nodes, "boundary nodes per curve")->envname("DBAR_NODES");
    app.add_option("--mesh", mesh, "area mesh parameter")->envname("DBAR_MESH");
    app.add_option("--set", sets, "experiment setting key=value (repeatable)");
    app.add_flag("--list", list, "list experiments and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitConfig;
    }

    if (list) {
        for (const auto& n : experiment_names()) std::cout << n << "\n";
        return 0;
    }

    ExperimentConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config(config_path, experiment);
        if (!experiment.empty()) cfg.experiment = experiment;
        if (!out.empty()) cfg.out = out;
        if (!format.empty()) set_value(cfg, "format", format);
        if (!seed.empty()) set_value(cfg, "seed", seed);
        if (!nodes.empty()) set_value(cfg, "nodes", nodes);
        if (!mesh.empty()) set_value(cfg, "mesh", mesh);
        for (const auto& s : sets) {
            auto eq = s.find('=');
            if (eq == std::string::npos) throw dbar::PreconditionError("--set expects key=value, got '" + s + "'");
            set_value(cfg, s.substr(0, eq), s.substr(eq + 1));
        }
        validate(cfg);
    } catch (const std::exception& e) {
        std::cerr << "dbar: " << e.what() << "\n";
        return kExitConfig;
    }

    RunResult r;
    try {
        r = run(cfg);
        emit(r.table, cfg.format, cfg.out);
        if (!cfg.out.empty()) {
            std::ofstream meta(cfg.out + ".meta.json");
            meta << run_metadata(cfg, r).dump(2) << "\n";
        }
    } catch (const dbar::PreconditionError& e) {
        std::cerr << "dbar: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "dbar: " << e.what() << "\n";
        return kExitRuntime;
    }

    std::cerr << cfg.experiment << ": " << r.summary() << "\n";
    return r.passed() ? 0 : kExitFailedCheck;
}
