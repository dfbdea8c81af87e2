#include "stochlab/report.hpp"

#include <algorithm>

namespace stochlab {

nlohmann::json to_json(const IdentityReport& report) {
    nlohmann::json j;
    j["name"] = report.name;
    j["estimate"] = report.estimate;
    j["target"] = report.target;
    j["std_error"] = report.std_error;
    j["tolerance"] = report.tolerance;
    j["verdict"] = report.pass ? "pass" : "fail";
    if (!report.metadata.empty()) {
        j["metadata"] = report.metadata;
    }
    return j;
}

bool all_pass(const std::vector<IdentityReport>& reports) {
    return std::all_of(reports.begin(), reports.end(),
                       [](const IdentityReport& r) { return r.pass; });
}

}  // namespace stochlab
