#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace dbar::cli {

enum class Format { csv, json };

Format parse_format(const std::string& s);
const char* format_name(Format f);

const std::vector<std::string>& experiment_names();

// One experiment run. Experiment-specific settings live in params; every
// value is kept as text so the echo in the output reproduces the run.
struct ExperimentConfig {
    std::string experiment;
    std::string out;  // empty: stdout
    Format format = Format::csv;
    std::uint64_t seed = 1;
    int nodes = 0;  // boundary nodes per curve, 0 keeps the default
    int mesh = 0;   // area mesh parameter, 0 keeps the default
    std::map<std::string, std::string> params;

    std::optional<std::string> param(const std::string& key) const;
};

// Flat key = value text with optional [section] headers. Keys before any
// section, or in [general], apply to every run; keys in the section named
// like the selected experiment override them.
ExperimentConfig parse_config(std::istream& in, const std::string& experiment_override = "");
ExperimentConfig load_config(const std::string& path, const std::string& experiment_override = "");

// apply "key=value" to the config (core keys or params)
void set_value(ExperimentConfig& cfg, const std::string& key, const std::string& value);

void validate(const ExperimentConfig& cfg);

// the config as a rerunnable file
std::string to_ini(const ExperimentConfig& cfg);

}  // namespace dbar::cli
