#include "dbar/cli/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "dbar/error.hpp"

namespace dbar::cli {

namespace {

template <class T>
T parse_number(const std::string& key, const std::string& v) {
    T x{};
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size())
        throw PreconditionError("config: '" + key + "' expects a number, got '" + v + "'");
    return x;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

}  // namespace

Format parse_format(const std::string& s) {
    if (s == "csv") return Format::csv;
    if (s == "json") return Format::json;
    throw PreconditionError("unknown format '" + s + "' (csv or json)");
}

const char* format_name(Format f) { return f == Format::csv ? "csv" : "json"; }

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"cauchy-green", "plemelj", "solve",     "residual",
                                                "equality",     "no-gain", "mollifier", "holder-fit"};
    return names;
}

std::optional<std::string> ExperimentConfig::param(const std::string& key) const {
    auto it = params.find(key);
    if (it == params.end()) return std::nullopt;
    return it->second;
}

void set_value(ExperimentConfig& cfg, const std::string& key_in, const std::string& value_in) {
    std::string key = trim(key_in), value = trim(value_in);
    if (key.empty()) throw PreconditionError("config: empty key");
    if (key == "experiment") cfg.experiment = value;
    else if (key == "out") cfg.out = value;
    else if (key == "format") cfg.format = parse_format(value);
    else if (key == "seed") cfg.seed = parse_number<std::uint64_t>(key, value);
    else if (key == "nodes") cfg.nodes = parse_number<int>(key, value);
    else if (key == "mesh") cfg.mesh = parse_number<int>(key, value);
    else cfg.params[key] = value;
}

ExperimentConfig parse_config(std::istream& in, const std::string& experiment_override) {
    boost::property_tree::ptree tree;
    try {
        boost::property_tree::read_ini(in, tree);
    } catch (const boost::property_tree::ini_parser_error& e) {
        throw PreconditionError(std::string("config: ") + e.what());
    }
    ExperimentConfig cfg;
    std::vector<std::pair<std::string, const boost::property_tree::ptree*>> sections;
    // top-level keys first
    for (const auto& [k, v] : tree) {
        if (v.empty()) set_value(cfg, k, v.data());
        else sections.emplace_back(k, &v);
    }
    for (const auto& [name, sec] : sections)
        if (name == "general")
            for (const auto& [k, v] : *sec) set_value(cfg, k, v.data());
    if (!experiment_override.empty()) cfg.experiment = experiment_override;
    for (const auto& [name, sec] : sections)
        if (name == cfg.experiment)
            for (const auto& [k, v] : *sec) set_value(cfg, k, v.data());
    return cfg;
}

ExperimentConfig load_config(const std::string& path, const std::string& experiment_override) {
    std::ifstream f(path);
    if (!f) throw PreconditionError("cannot open config file '" + path + "'");
    return parse_config(f, experiment_override);
}

void validate(const ExperimentConfig& cfg) {
    const auto& names = experiment_names();
    if (cfg.experiment.empty()) throw PreconditionError("no experiment selected");
    if (std::find(names.begin(), names.end(), cfg.experiment) == names.end())
        throw PreconditionError("unknown experiment '" + cfg.experiment + "'");
    if (cfg.nodes < 0 || cfg.mesh < 0) throw PreconditionError("resolutions must be positive");
    if (cfg.nodes > 0 && cfg.nodes < 16) throw PreconditionError("nodes must be at least 16");
    if (cfg.mesh > 0 && cfg.mesh < 16) throw PreconditionError("mesh must be at least 16");
}

std::string to_ini(const ExperimentConfig& cfg) {
    std::ostringstream os;
    os << "experiment = " << cfg.experiment << "\n";
    os << "format = " << format_name(cfg.format) << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "nodes = " << cfg.nodes << "\n";
    os << "mesh = " << cfg.mesh << "\n";
    if (!cfg.out.empty()) os << "out = " << cfg.out << "\n";
    for (const auto& [k, v] : cfg.params) os << k << " = " << v << "\n";
    return os.str();
}

}  // namespace dbar::cli
