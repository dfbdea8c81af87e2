#include "stochlab/config.hpp"

#include <algorithm>
#include <fstream>
#include <set>

namespace stochlab {

namespace {

void require_keys(const nlohmann::json& j, const std::string& scope,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) {
        throw ConfigError("'" + (scope.empty() ? std::string("config root")
                                               : scope.substr(0, scope.size() - 1)) +
                          "' must be a JSON object");
    }
    for (const auto& item : j.items()) {
        if (!allowed.contains(item.key())) {
            throw ConfigError("unknown key '" + scope + item.key() + "'");
        }
    }
}

double require_number(const nlohmann::json& j, const std::string& field) {
    if (!j.is_number()) {
        throw ConfigError("field '" + field + "' must be a number");
    }
    return j.get<double>();
}

std::uint64_t require_unsigned(const nlohmann::json& j, const std::string& field) {
    if (!(j.is_number_unsigned() ||
          (j.is_number_integer() && j.get<std::int64_t>() >= 0))) {
        throw ConfigError("field '" + field + "' must be a non-negative integer");
    }
    return j.get<std::uint64_t>();
}

}  // namespace

ExperimentConfig parse_config(const nlohmann::json& j) {
    if (!j.is_object()) throw ConfigError("config root must be a JSON object");
    require_keys(j, "", {"master_seed", "grid", "paths", "driver", "basis",
                         "suite", "tolerances", "output"});

    ExperimentConfig config;
    SuiteConfig& sc = config.suite_config;

    if (j.contains("master_seed")) {
        sc.master_seed = require_unsigned(j["master_seed"], "master_seed");
    }
    if (j.contains("grid")) {
        const auto& g = j["grid"];
        require_keys(g, "grid.", {"horizon", "steps"});
        if (g.contains("horizon")) {
            sc.horizon = require_number(g["horizon"], "grid.horizon");
        }
        if (g.contains("steps")) {
            sc.steps = require_unsigned(g["steps"], "grid.steps");
        }
        if (!(sc.horizon > 0.0)) {
            throw ConfigError("field 'grid.horizon' must be positive");
        }
        if (sc.steps < 1 || sc.steps > 1u << 20) {
            throw ConfigError("field 'grid.steps' must be in [1, 2^20]");
        }
    }
    if (j.contains("paths")) {
        sc.paths = require_unsigned(j["paths"], "paths");
        if (sc.paths < 1 || sc.paths > 100000000) {
            throw ConfigError("field 'paths' must be in [1, 10^8]");
        }
    }
    if (j.contains("basis")) {
        const auto& b = j["basis"];
        require_keys(b, "basis.", {"time_bins", "degree"});
        if (b.contains("time_bins")) {
            sc.time_bins = static_cast<int>(
                require_unsigned(b["time_bins"], "basis.time_bins"));
        }
        if (b.contains("degree")) {
            sc.degree =
                static_cast<int>(require_unsigned(b["degree"], "basis.degree"));
        }
        if (sc.time_bins < 1 || static_cast<std::size_t>(sc.time_bins) > sc.steps) {
            throw ConfigError("field 'basis.time_bins' must be in [1, grid.steps]");
        }
        if (sc.degree < 0 || sc.degree > 8) {
            throw ConfigError("field 'basis.degree' must be in [0, 8]");
        }
    }
    if (j.contains("driver")) {
        const auto& d = j["driver"];
        require_keys(d, "driver.",
                     {"process", "hurst", "gamma", "c_gamma", "rate", "jump_size"});
        if (d.contains("process")) {
            if (!d["process"].is_string()) {
                throw ConfigError("field 'driver.process' must be a string");
            }
            config.driver.process = d["process"].get<std::string>();
            static const std::set<std::string> known = {"brownian", "fbm",
                                                        "stable", "poisson"};
            if (!known.contains(config.driver.process)) {
                throw ConfigError("field 'driver.process' must be one of "
                                  "brownian, fbm, stable, poisson");
            }
        }
        if (d.contains("hurst")) {
            config.driver.hurst = require_number(d["hurst"], "driver.hurst");
        }
        if (d.contains("gamma")) {
            config.driver.gamma = require_number(d["gamma"], "driver.gamma");
        }
        if (d.contains("c_gamma")) {
            config.driver.c_gamma = require_number(d["c_gamma"], "driver.c_gamma");
        }
        if (d.contains("rate")) {
            config.driver.rate = require_number(d["rate"], "driver.rate");
        }
        if (d.contains("jump_size")) {
            config.driver.jump_size =
                require_number(d["jump_size"], "driver.jump_size");
        }
        if (!(config.driver.hurst > 0.0 && config.driver.hurst < 1.0)) {
            throw ConfigError("field 'driver.hurst' must lie in (0, 1)");
        }
        if (!(config.driver.gamma > 0.0 && config.driver.gamma < 2.0)) {
            throw ConfigError("field 'driver.gamma' must lie in (0, 2)");
        }
        if (!(config.driver.c_gamma > 0.0)) {
            throw ConfigError("field 'driver.c_gamma' must be positive");
        }
        if (!(config.driver.rate > 0.0)) {
            throw ConfigError("field 'driver.rate' must be positive");
        }
    }
    if (j.contains("suite")) {
        if (!j["suite"].is_array()) {
            throw ConfigError("field 'suite' must be an array of check names");
        }
        const auto& known = default_suite();
        for (const auto& name : j["suite"]) {
            if (!name.is_string()) {
                throw ConfigError("field 'suite' entries must be strings");
            }
            const std::string s = name.get<std::string>();
            if (std::find(known.begin(), known.end(), s) == known.end()) {
                throw ConfigError("field 'suite' names unknown check '" + s + "'");
            }
            config.suite.push_back(s);
        }
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) {
            throw ConfigError("field 'tolerances' must be an object keyed by "
                              "check name");
        }
        const auto& known = default_suite();
        for (const auto& item : t.items()) {
            if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
                throw ConfigError("field 'tolerances' names unknown check '" +
                                  item.key() + "'");
            }
            const auto& entry = item.value();
            if (!entry.is_object()) {
                throw ConfigError("field 'tolerances." + item.key() +
                                  "' must be an object");
            }
            require_keys(entry, "tolerances." + item.key() + ".",
                         {"value", "override"});
            if (!entry.contains("value")) {
                throw ConfigError("field 'tolerances." + item.key() +
                                  "' requires a \"value\"");
            }
            ToleranceOverride ov;
            ov.value = require_number(entry["value"],
                                      "tolerances." + item.key() + ".value");
            if (!entry.contains("override") || !entry["override"].is_boolean() ||
                !entry["override"].get<bool>()) {
                throw ConfigError("field 'tolerances." + item.key() +
                                  "' requires \"override\": true");
            }
            ov.override_flag = true;
            if (!(ov.value > 0.0)) {
                throw ConfigError("field 'tolerances." + item.key() +
                                  ".value' must be positive");
            }
            sc.tolerance_overrides[item.key()] = ov;
        }
    }
    if (j.contains("output")) {
        const auto& o = j["output"];
        require_keys(o, "output.", {"report", "metadata"});
        if (o.contains("report")) {
            if (!o["report"].is_string()) {
                throw ConfigError("field 'output.report' must be a string");
            }
            config.output.report = o["report"].get<std::string>();
        }
        if (o.contains("metadata")) {
            if (!o["metadata"].is_string()) {
                throw ConfigError("field 'output.metadata' must be a string");
            }
            config.output.metadata = o["metadata"].get<std::string>();
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::json config_to_json(const ExperimentConfig& config) {
    const SuiteConfig& sc = config.suite_config;
    nlohmann::json j;
    j["master_seed"] = sc.master_seed;
    j["grid"] = {{"horizon", sc.horizon}, {"steps", sc.steps}};
    j["paths"] = sc.paths;
    j["basis"] = {{"time_bins", sc.time_bins}, {"degree", sc.degree}};
    j["driver"] = {{"process", config.driver.process},
                   {"hurst", config.driver.hurst},
                   {"gamma", config.driver.gamma},
                   {"c_gamma", config.driver.c_gamma},
                   {"rate", config.driver.rate},
                   {"jump_size", config.driver.jump_size}};
    j["suite"] = config.suite.empty() ? default_suite() : config.suite;
    nlohmann::json tolerances = nlohmann::json::object();
    for (const auto& [name, ov] : sc.tolerance_overrides) {
        tolerances[name] = {{"value", ov.value}, {"override", ov.override_flag}};
    }
    j["tolerances"] = tolerances;
    j["output"] = {{"report", config.output.report},
                   {"metadata", config.output.metadata}};
    return j;
}

std::string config_schema() {
    return R"(Config file schema (JSON object; unknown keys are rejected):

{
  "master_seed": 7,               // non-negative integer
  "grid": {
    "horizon": 1.0,               // T > 0
    "steps": 256                  // N in [1, 2^20]
  },
  "paths": 100000,                // M in [1, 10^8]
  "basis": {
    "time_bins": 16,              // B in [1, grid.steps]
    "degree": 3                   // p in [0, 8]
  },
  "driver": {                     // parameterizes the exportable ensemble
    "process": "brownian",        // brownian | fbm | stable | poisson
    "hurst": 0.5,                 // fbm: H in (0, 1)
    "gamma": 1.5,                 // stable: index in (0, 2)
    "c_gamma": 1.0,               // stable: scale > 0
    "rate": 1.0,                  // poisson: rate > 0
    "jump_size": 1.0              // poisson: atom size
  },
  "suite": ["ito_isometry"],      // subset of the default suite; omit for all
  "tolerances": {                 // loosen-only, must set "override": true
    "clark_ocone": {"value": 0.02, "override": true}
  },
  "output": {
    "report": "report.json",      // byte-stable for a fixed config
    "metadata": "report.meta.json" // timings live here, not in the report
  }
}

Default suite order:
  ito_isometry, centering, clark_ocone, variance_identity, adjointness,
  malliavin, fbm_covariance, stable_charfn, mixed_generator, kolmogorov,
  feynman_kac, dupire

Environment: STOCHLAB_THREADS caps the worker thread count (default: hardware).
)";
}

}  // namespace stochlab
