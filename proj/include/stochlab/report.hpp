#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

namespace stochlab {

// Structured record of one operator-identity check.
struct IdentityReport {
    std::string name;
    double estimate = 0.0;
    double target = 0.0;
    double std_error = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::map<std::string, double> metadata;

    static IdentityReport make(std::string name, double estimate, double target,
                               double std_error, double tolerance) {
        IdentityReport r;
        r.name = std::move(name);
        r.estimate = estimate;
        r.target = target;
        r.std_error = std_error;
        r.tolerance = tolerance;
        r.pass = std::abs(estimate - target) <= tolerance;
        return r;
    }

    double deviation() const { return std::abs(estimate - target); }
};

nlohmann::json to_json(const IdentityReport& report);

bool all_pass(const std::vector<IdentityReport>& reports);

}  // namespace stochlab
