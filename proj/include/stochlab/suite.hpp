#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "stochlab/adjoint.hpp"
#include "stochlab/report.hpp"

namespace stochlab {

// Tolerances may only be loosened, and only with an explicit override flag;
// overrides are echoed in the report.
struct ToleranceOverride {
    double value = 0.0;
    bool override_flag = false;
};

struct SuiteConfig {
    std::uint64_t master_seed = 7;
    double horizon = 1.0;
    std::size_t steps = 256;
    std::size_t paths = 100000;
    int time_bins = 16;
    int degree = 3;
    std::map<std::string, ToleranceOverride> tolerance_overrides;
};

struct CheckResult {
    std::string name;
    std::vector<IdentityReport> reports;
};

struct RunReport {
    nlohmann::json config_echo;
    std::vector<CheckResult> checks;
    bool overall_pass = true;
    std::map<std::string, double> wall_ms;  // timing; kept out of the report file
};

// Names accepted by run_check, in default-suite order.
const std::vector<std::string>& default_suite();

// Batch harness: owns the shared Brownian ensemble, basis, and Gram system,
// built lazily and reused across checks.
class SuiteRunner {
public:
    explicit SuiteRunner(SuiteConfig config);
    ~SuiteRunner();

    const SuiteConfig& config() const { return config_; }

    CheckResult run_check(const std::string& name);
    RunReport run(const std::vector<std::string>& suite);

    // Shared artifacts, exposed for the acceptance harness and exporters.
    const PathEnsemble& brownian_ensemble();
    const IntegrandBasis& basis();
    const GramSystem& gram();

    // The four reference functionals F(B_T) with their Clark-Ocone residual
    // tolerances and closed-form variances.
    struct Functional {
        std::string name;
        RandomVariableSample sample;
        double residual_tolerance;
        double closed_form_variance;
    };
    std::vector<Functional> reference_functionals();

    std::vector<IdentityReport> check_ito_isometry();
    std::vector<IdentityReport> check_centering();
    std::vector<IdentityReport> check_clark_ocone();
    std::vector<IdentityReport> check_variance_identity();
    std::vector<IdentityReport> check_adjointness();
    std::vector<IdentityReport> check_malliavin();
    std::vector<IdentityReport> check_fbm_covariance();
    std::vector<IdentityReport> check_stable_charfn();
    std::vector<IdentityReport> check_mixed_generator();
    std::vector<IdentityReport> check_kolmogorov();
    std::vector<IdentityReport> check_feynman_kac();
    std::vector<IdentityReport> check_dupire();

private:
    void apply_overrides(const std::string& check_name,
                         std::vector<IdentityReport>& reports) const;

    SuiteConfig config_;
    std::unique_ptr<PathEnsemble> brownian_;
    std::unique_ptr<IntegrandBasis> basis_;
    std::unique_ptr<GramSystem> gram_;
};

// Report JSON without timings (byte-stable for a fixed config); timings go
// to the metadata JSON.
nlohmann::json run_report_to_json(const RunReport& report);
nlohmann::json run_metadata_to_json(const RunReport& report);

}  // namespace stochlab
