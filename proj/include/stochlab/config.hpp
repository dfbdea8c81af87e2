#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "stochlab/suite.hpp"

namespace stochlab {

// Driver selection for the shared ensemble. The named checks fix their own
// drivers where the oracle demands one; this block parameterizes the
// exportable ensemble and is validated regardless.
struct DriverSpec {
    std::string process = "brownian";  // brownian | fbm | stable | poisson
    double hurst = 0.5;
    double gamma = 1.5;
    double c_gamma = 1.0;
    double rate = 1.0;
    double jump_size = 1.0;
};

struct OutputSpec {
    std::string report = "report.json";
    std::string metadata = "report.meta.json";
};

struct ExperimentConfig {
    SuiteConfig suite_config;
    DriverSpec driver;
    std::vector<std::string> suite;  // empty selects the full default suite
    OutputSpec output;
};

// Thrown on malformed or out-of-range configs; the message names the
// offending field.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

// Echo used in the report file; round-trips every accepted field.
nlohmann::json config_to_json(const ExperimentConfig& config);

// Human-readable schema for the `schema` subcommand.
std::string config_schema();

}  // namespace stochlab
