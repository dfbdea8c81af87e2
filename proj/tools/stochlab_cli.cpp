// Batch harness: run the verification suite from a JSON config, export
// plot-ready CSV data, or print the config schema.
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 config/usage error,
// 3 runtime numerical error.

#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "stochlab/config.hpp"
#include "stochlab/io.hpp"
#include "stochlab/parallel.hpp"
#include "stochlab/paths.hpp"
#include "stochlab/stats.hpp"
#include "stochlab/suite.hpp"

namespace {

int run_command(const std::string& config_path) {
    stochlab::ExperimentConfig config;
    try {
        config = stochlab::load_config(config_path);
    } catch (const stochlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        stochlab::SuiteRunner runner(config.suite_config);
        const std::vector<std::string>& suite =
            config.suite.empty() ? stochlab::default_suite() : config.suite;
        stochlab::RunReport report = runner.run(suite);
        report.config_echo = stochlab::config_to_json(config);

        {
            std::ofstream out(config.output.report);
            if (!out) {
                std::cerr << "cannot write report file '" << config.output.report
                          << "'\n";
                return 3;
            }
            out << stochlab::run_report_to_json(report).dump(2) << "\n";
        }
        {
            std::ofstream out(config.output.metadata);
            if (!out) {
                std::cerr << "cannot write metadata file '"
                          << config.output.metadata << "'\n";
                return 3;
            }
            out << stochlab::run_metadata_to_json(report).dump(2) << "\n";
        }

        for (const stochlab::CheckResult& check : report.checks) {
            for (const stochlab::IdentityReport& r : check.reports) {
                std::cout << (r.pass ? "pass" : "FAIL") << "  " << r.name << "\n";
            }
        }
        std::cout << "overall: " << (report.overall_pass ? "pass" : "FAIL")
                  << " (report: " << config.output.report << ")\n";
        return report.overall_pass ? 0 : 1;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}

// CSV of the fitted Clark-Ocone integrand for F = B_T^2 against the Ito
// oracle 2 B_t. Columns: t, x_bin, fitted, oracle.
int export_clark_ocone_integrand(const stochlab::ExperimentConfig& config,
                                 const std::string& out_path) {
    stochlab::SuiteRunner runner(config.suite_config);
    const stochlab::PathEnsemble& ens = runner.brownian_ensemble();
    const stochlab::IntegrandBasis& basis = runner.basis();
    const Eigen::VectorXd terminal = ens.values.col(ens.values.cols() - 1);
    const stochlab::RandomVariableSample f{terminal.array().square().matrix(),
                                           "F=B_T^2"};
    const stochlab::RieszRepresenter rep =
        stochlab::covariant_derivative(f, basis, runner.gram());

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write '" << out_path << "'\n";
        return 3;
    }
    out << "t,x_bin,fitted,oracle\n";
    // One row per (time bin, state probe): fitted integrand evaluated via the
    // basis expansion at probe states, oracle = 2x.
    const int bins = basis.time_bins();
    const int degree = basis.degree();
    const double bin_dt = ens.grid.horizon / static_cast<double>(bins);
    std::vector<double> powers(static_cast<std::size_t>(degree) + 1);
    for (int b = 0; b < bins; ++b) {
        const double t = (static_cast<double>(b) + 0.5) * bin_dt;
        for (int q = -8; q <= 8; ++q) {
            const double x = 0.25 * static_cast<double>(q);
            basis.state_powers(x, powers.data());
            double fitted = 0.0;
            for (int p = 0; p <= degree; ++p) {
                fitted += rep.coefficients(basis.element_index(b, p)) * powers[p];
            }
            out << t << "," << x << "," << fitted << "," << 2.0 * x << "\n";
        }
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

// CSV of the sampled fBM covariance against R_H for H = 0.75.
// Columns: s, t, sample, closed_form.
int export_covariance_heatmap(const stochlab::ExperimentConfig& config,
                              const std::string& out_path) {
    const double hurst =
        config.driver.process == "fbm" ? config.driver.hurst : 0.75;
    const stochlab::TimeGrid grid(config.suite_config.horizon, 32);
    const std::size_t n_paths = std::min<std::size_t>(config.suite_config.paths,
                                                      20000);
    if (n_paths == 0) {
        std::cerr << "empty ensemble: nothing to export\n";
        return 2;
    }
    const stochlab::PathEnsemble ens = stochlab::simulate_fbm(
        grid, hurst, n_paths,
        stochlab::StreamKey{config.suite_config.master_seed, 100});

    std::ofstream out(out_path);
    if (!out) {
        std::cerr << "cannot write '" << out_path << "'\n";
        return 3;
    }
    out << "s,t,sample,closed_form\n";
    const auto n = static_cast<Eigen::Index>(grid.steps);
    const Eigen::MatrixXd body = ens.values.rightCols(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            const double s = grid.node(static_cast<std::size_t>(i) + 1);
            const double t = grid.node(static_cast<std::size_t>(j) + 1);
            const double sample =
                (body.col(i).array() * body.col(j).array()).mean();
            out << s << "," << t << "," << sample << ","
                << stochlab::fbm_covariance(hurst, s, t) << "\n";
        }
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int export_command(const std::string& config_path, const std::string& selector,
                   const std::string& out_path) {
    stochlab::ExperimentConfig config;
    try {
        config = stochlab::load_config(config_path);
    } catch (const stochlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    try {
        if (selector == "clark_ocone_integrand") {
            return export_clark_ocone_integrand(config, out_path);
        }
        if (selector == "covariance_heatmap") {
            return export_covariance_heatmap(config, out_path);
        }
        std::cerr << "unknown selector '" << selector
                  << "' (known: clark_ocone_integrand, covariance_heatmap)\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "runtime error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"stochlab: operator-factorization verification suite"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "run the suite from a JSON config");
    run->add_option("config", config_path, "config file path")->required();

    std::string export_config;
    std::string selector;
    std::string out_path = "export.csv";
    auto* exp = app.add_subcommand("export", "export plot-ready CSV data");
    exp->add_option("config", export_config, "config file path")->required();
    exp->add_option("selector", selector,
                    "clark_ocone_integrand | covariance_heatmap")
        ->required();
    exp->add_option("-o,--output", out_path, "output CSV path");

    auto* schema = app.add_subcommand("schema", "print the config schema");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (run->parsed()) return run_command(config_path);
    if (exp->parsed()) return export_command(export_config, selector, out_path);
    if (schema->parsed()) {
        std::cout << stochlab::config_schema();
        return 0;
    }
    return 2;
}
