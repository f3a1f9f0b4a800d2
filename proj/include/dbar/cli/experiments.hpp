#pragma once

#include <string>
#include <vector>

#include "dbar/cli/config.hpp"
#include "dbar/cli/result_table.hpp"

namespace dbar::cli {

struct Check {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool passed = false;
};

struct RunResult {
    ResultTable table;
    std::vector<Check> checks;
    double seconds = 0.0;

    bool passed() const;
    std::string summary() const;
};

// Runs the configured experiment. Throws PreconditionError for bad settings.
RunResult run(const ExperimentConfig& cfg);

// meta sidecar: config echo, checks and timings
nlohmann::ordered_json run_metadata(const ExperimentConfig& cfg, const RunResult& r);

}  // namespace dbar::cli
