#include "stochlab/suite.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stochlab/functional.hpp"
#include "stochlab/generators.hpp"
#include "stochlab/integration.hpp"
#include "stochlab/paths.hpp"

namespace stochlab {

namespace {

// Stream ids reserved for suite-level randomized artifacts.
constexpr std::uint64_t kAdjointnessStreamBase = 0xAD01;

IdentityReport ratio_report(std::string name, double worst_ratio,
                            std::map<std::string, double> metadata = {}) {
    // "ratio" reports normalize each sub-check by its own tolerance; the
    // aggregate passes iff every sub-check does.
    IdentityReport r;
    r.name = std::move(name);
    r.estimate = worst_ratio;
    r.target = 0.0;
    r.std_error = 0.0;
    r.tolerance = 1.0;
    r.pass = worst_ratio <= 1.0;
    r.metadata = std::move(metadata);
    return r;
}

}  // namespace

const std::vector<std::string>& default_suite() {
    static const std::vector<std::string> names = {
        "ito_isometry",   "centering",        "clark_ocone",
        "variance_identity", "adjointness",   "malliavin",
        "fbm_covariance", "stable_charfn",    "mixed_generator",
        "kolmogorov",     "feynman_kac",      "dupire",
    };
    return names;
}

SuiteRunner::SuiteRunner(SuiteConfig config) : config_(std::move(config)) {}
SuiteRunner::~SuiteRunner() = default;

const PathEnsemble& SuiteRunner::brownian_ensemble() {
    if (!brownian_) {
        brownian_ = std::make_unique<PathEnsemble>(simulate_brownian(
            TimeGrid(config_.horizon, config_.steps), config_.paths,
            StreamKey{config_.master_seed, 0}));
    }
    return *brownian_;
}

const IntegrandBasis& SuiteRunner::basis() {
    if (!basis_) {
        basis_ = std::make_unique<IntegrandBasis>(
            TimeGrid(config_.horizon, config_.steps), config_.time_bins,
            config_.degree);
    }
    return *basis_;
}

const GramSystem& SuiteRunner::gram() {
    if (!gram_) {
        gram_ = std::make_unique<GramSystem>(
            build_gram(basis(), brownian_ensemble(), EnergySpec::brownian()));
    }
    return *gram_;
}

std::vector<SuiteRunner::Functional> SuiteRunner::reference_functionals() {
    const PathEnsemble& ens = brownian_ensemble();
    const double T = config_.horizon;
    const Eigen::VectorXd terminal = ens.values.col(ens.values.cols() - 1);

    std::vector<Functional> out;
    {
        Functional f;
        f.name = "terminal";
        f.sample = {terminal, "F=B_T"};
        f.residual_tolerance = 0.01;
        f.closed_form_variance = T;
        out.push_back(std::move(f));
    }
    {
        Functional f;
        f.name = "terminal_square";
        f.sample = {terminal.array().square().matrix(), "F=B_T^2"};
        f.residual_tolerance = 0.01;
        f.closed_form_variance = 2.0 * T * T;
        out.push_back(std::move(f));
    }
    {
        Functional f;
        f.name = "exponential_martingale";
        f.sample = {(terminal.array() - 0.5 * T).exp().matrix(), "F=exp(B_T-T/2)"};
        f.residual_tolerance = 0.01;
        f.closed_form_variance = std::exp(T) - 1.0;
        out.push_back(std::move(f));
    }
    {
        Functional f;
        f.name = "positive_part";
        f.sample = {terminal.array().max(0.0).matrix(), "F=max(B_T,0)"};
        f.residual_tolerance = 0.02;
        // Quadrature oracle for the half-Gaussian moments.
        const GaussHermiteRule rule(80);
        const double root_t = std::sqrt(T);
        const auto positive = [](double x) { return x > 0.0 ? x : 0.0; };
        const double m1 = rule.gaussian_mean(positive, 0.0, root_t);
        const double m2 = rule.gaussian_mean(
            [&](double x) { return positive(x) * positive(x); }, 0.0, root_t);
        f.closed_form_variance = m2 - m1 * m1;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<IdentityReport> SuiteRunner::check_ito_isometry() {
    const PathEnsemble& ens = brownian_ensemble();
    const double dt = ens.grid.dt();
    const double grid_slack = 5.0 / static_cast<double>(config_.steps);

    struct Case {
        std::string name;
        AdaptedProcessSample u;
    };
    std::vector<Case> cases;
    cases.push_back({"u=1", constant_integrand(ens.grid, ens.path_count(), 1.0)});
    cases.push_back({"u=B_t", state_integrand(ens, [](double x) { return x; })});
    cases.push_back({"u=B_t^2", state_integrand(ens, [](double x) { return x * x; })});

    std::vector<IdentityReport> reports;
    for (auto& c : cases) {
        const RandomVariableSample d = ito_integral(c.u, ens);
        const Eigen::VectorXd squares = d.values.array().square();
        const Eigen::VectorXd energies =
            c.u.values.array().square().rowwise().sum() * dt;
        const Estimate paired = mean_estimate(squares - energies);
        reports.push_back(IdentityReport::make(
            "ito_isometry(" + c.name + ")", squares.mean(), energies.mean(),
            paired.std_error, 4.0 * paired.std_error + grid_slack));
    }
    apply_overrides("ito_isometry", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_centering() {
    const PathEnsemble& ens = brownian_ensemble();
    std::vector<IdentityReport> reports;

    const auto add_case = [&](const std::string& name,
                              const RandomVariableSample& d) {
        const Estimate m = mean_estimate(d.values);
        reports.push_back(IdentityReport::make("centering(" + name + ")", m.value,
                                               0.0, m.std_error,
                                               4.0 * m.std_error));
    };

    add_case("u=1", ito_integral(constant_integrand(ens.grid, ens.path_count(), 1.0), ens));
    add_case("u=B_t", ito_integral(state_integrand(ens, [](double x) { return x; }), ens));
    add_case("u=B_t^2",
             ito_integral(state_integrand(ens, [](double x) { return x * x; }), ens));

    // Compensated Poisson integral on the finite-activity test driver.
    const PathEnsemble poisson = simulate_poisson(
        ens.grid, 3.0, 1.0, ens.path_count(), StreamKey{config_.master_seed, 1});
    const EnergySpec jump_spec =
        EnergySpec::poisson(LevyDensity::point_mass(3.0, 1.0), 0.5);
    const JumpIntegrand one{[](double, double) { return 1.0; }, "v=1"};
    add_case("compensated_poisson(v=1)",
             compensated_poisson_integral(one, poisson, jump_spec));

    apply_overrides("centering", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_clark_ocone() {
    std::vector<IdentityReport> reports;
    for (const Functional& f : reference_functionals()) {
        const RieszRepresenter rep =
            covariant_derivative(f.sample, basis(), gram());
        auto [reconstructed, report] = clark_ocone_reconstruct(
            f.sample, rep, basis(), brownian_ensemble(), f.residual_tolerance);
        reports.push_back(std::move(report));
    }
    apply_overrides("clark_ocone", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_variance_identity() {
    const EnergySpec spec = EnergySpec::brownian();
    std::vector<IdentityReport> reports;
    for (const Functional& f : reference_functionals()) {
        const RieszRepresenter rep =
            covariant_derivative(f.sample, basis(), gram());
        IdentityReport base = variance_identity_check(f.sample, rep, basis(),
                                                      spec, brownian_ensemble());
        // Replace the sampled variance target with the closed-form value;
        // the sampled variance keeps contributing through the combined SE.
        base.metadata["sample_variance"] = base.target;
        base.target = f.closed_form_variance;
        base.pass = base.deviation() <= base.tolerance;
        reports.push_back(std::move(base));
    }
    apply_overrides("variance_identity", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_adjointness() {
    const PathEnsemble& ens = brownian_ensemble();
    const EnergySpec spec = EnergySpec::brownian();
    std::vector<IdentityReport> reports;
    std::uint64_t stream_id = kAdjointnessStreamBase;
    for (const Functional& f : reference_functionals()) {
        const RieszRepresenter rep =
            covariant_derivative(f.sample, basis(), gram());
        std::vector<AdaptedProcessSample> tests;
        auto stream = make_stream(config_.master_seed, stream_id++);
        for (int trial = 0; trial < 10; ++trial) {
            Eigen::VectorXd coeffs(basis().size());
            for (Eigen::Index j = 0; j < coeffs.size(); ++j) {
                coeffs(j) = stream.gaussian();
            }
            tests.push_back(basis().combination_sample(coeffs, ens));
        }
        const std::vector<IdentityReport> sub =
            adjointness_check(f.sample, rep, basis(), tests, spec, ens);
        double worst = 0.0;
        for (const IdentityReport& r : sub) {
            worst = std::max(worst, r.deviation() / r.tolerance);
        }
        reports.push_back(ratio_report("adjointness(" + f.sample.provenance + ")",
                                       worst,
                                       {{"test_integrands", 10.0}}));
    }
    apply_overrides("adjointness", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_malliavin() {
    const PathEnsemble& ens = brownian_ensemble();
    // Degree 5 resolves the trigonometric case; lower degrees bias the fit.
    const IntegrandBasis smooth_basis(ens.grid, config_.time_bins, 5);
    const GramSystem smooth_gram =
        build_gram(smooth_basis, ens, EnergySpec::brownian());
    const Eigen::VectorXd terminal = ens.values.col(ens.values.cols() - 1);

    struct Case {
        std::string name;
        std::function<double(double)> f;
        std::function<double(double)> f_prime;
        double tolerance;
    };
    const std::vector<Case> cases = {
        {"f=x", [](double x) { return x; }, [](double) { return 1.0; }, 0.02},
        {"f=x^2", [](double x) { return x * x; }, [](double x) { return 2.0 * x; },
         0.03},
        {"f=sin", [](double x) { return std::sin(x); },
         [](double x) { return std::cos(x); }, 0.05},
    };

    std::vector<IdentityReport> reports;
    for (const Case& c : cases) {
        RandomVariableSample f_sample{terminal.unaryExpr(c.f), "F=" + c.name};
        const RieszRepresenter rep =
            covariant_derivative(f_sample, smooth_basis, smooth_gram);
        IdentityReport r = malliavin_crosscheck(c.f_prime, ens, rep, smooth_basis,
                                                c.tolerance);
        r.name = "malliavin(" + c.name + ")";
        reports.push_back(std::move(r));
    }
    apply_overrides("malliavin", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_fbm_covariance() {
    const TimeGrid grid(config_.horizon, 128);
    const std::size_t n_paths = 10000;
    std::vector<IdentityReport> reports;
    for (const double hurst : {0.25, 0.5, 0.75}) {
        const PathEnsemble ens = simulate_fbm(grid, hurst, n_paths,
                                              StreamKey{config_.master_seed, 2});
        const auto n = static_cast<Eigen::Index>(grid.steps);
        const Eigen::MatrixXd body = ens.values.rightCols(n);
        double worst = 0.0;
        double worst_gap = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            for (Eigen::Index j = i; j < n; ++j) {
                const Eigen::ArrayXd prod =
                    body.col(i).array() * body.col(j).array();
                const double mean = prod.mean();
                const double var =
                    std::max(0.0, prod.square().mean() - mean * mean);
                const double se = std::sqrt(var / static_cast<double>(n_paths));
                const double target = fbm_covariance(
                    hurst, grid.node(static_cast<std::size_t>(i) + 1),
                    grid.node(static_cast<std::size_t>(j) + 1));
                const double ratio = std::abs(mean - target) / (4.0 * se);
                if (ratio > worst) {
                    worst = ratio;
                    worst_gap = std::abs(mean - target);
                }
            }
        }
        reports.push_back(ratio_report(
            "fbm_covariance(H=" + std::to_string(hurst) + ")", worst,
            {{"max_abs_gap", worst_gap},
             {"paths", static_cast<double>(n_paths)},
             {"steps", static_cast<double>(grid.steps)}}));
    }
    apply_overrides("fbm_covariance", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_stable_charfn() {
    const TimeGrid grid(1.0, 64);
    std::vector<IdentityReport> reports;
    for (const double gamma : {0.8, 1.0, 1.5, 1.9}) {
        StableParams params;
        params.gamma = gamma;
        params.c_gamma = 1.0;
        // Only endpoint marginals are probed here; a coarse jump-record
        // threshold keeps the ensemble light.
        params.truncation = 1.0;
        const PathEnsemble ens = simulate_stable_levy(
            grid, params, config_.paths, StreamKey{config_.master_seed, 3});
        const Eigen::VectorXd endpoint = ens.values.col(ens.values.cols() - 1);
        double worst = 0.0;
        for (int k = 1; k <= 10; ++k) {
            const double xi = 0.25 * static_cast<double>(k);
            const Eigen::VectorXd cos_values =
                (endpoint.array() * xi).cos().matrix();
            const Estimate emp = mean_estimate(cos_values);
            const double target = std::exp(-std::pow(xi, gamma));
            worst = std::max(worst,
                             std::abs(emp.value - target) / (4.0 * emp.std_error));
        }
        reports.push_back(ratio_report(
            "stable_charfn(gamma=" + std::to_string(gamma) + ")", worst,
            {{"xi_points", 10.0}}));
    }
    apply_overrides("stable_charfn", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_mixed_generator() {
    const double t = 0.5;
    const double sigma0 = 0.5;
    const auto bump = [sigma0](double x) {
        return std::exp(-x * x / (2.0 * sigma0 * sigma0));
    };
    // Box sized so the stable tail mass escaping it over the horizon stays
    // below 1e-4; the bound enters the tolerance explicitly.
    const double box = 100.0;
    const std::size_t resolution = 8192;
    const double wrap_bound = 1e-4;

    struct Case {
        std::string name;
        GeneratorParams params;
    };
    const std::vector<Case> cases = {
        {"mixed(alpha=1,beta=1,gamma=1.5)", {1.0, 1.0, 1.5, 1.0}},
        {"diffusion_only(alpha=1)", {1.0, 0.0, 1.5, 1.0}},
        {"stable_only(gamma=1.5)", {0.0, 1.0, 1.5, 1.0}},
    };

    const SpectralField f0 = SpectralField::sample(box, resolution, bump);
    std::vector<IdentityReport> reports;
    for (const Case& c : cases) {
        const SpectralField evolved = spectral_evolve(f0, t, c.params);
        // Probe on exact grid nodes spanning roughly [-2, 2].
        std::vector<std::size_t> probe_idx;
        std::vector<double> probe_x;
        for (int k = -4; k <= 4; ++k) {
            const std::size_t j =
                resolution / 2 + static_cast<std::size_t>((k + 4) * 20) -
                static_cast<std::size_t>(80);
            probe_idx.push_back(j);
            probe_x.push_back(f0.x(j));
        }
        const CurveWithError mc =
            mc_smoothing(bump, t, c.params, probe_x, config_.paths,
                         StreamKey{config_.master_seed, 4});
        double worst = 0.0;
        double worst_gap = 0.0;
        for (std::size_t q = 0; q < probe_idx.size(); ++q) {
            const double gap =
                std::abs(evolved.values[probe_idx[q]] - mc.values[q]);
            const double tol = 4.0 * mc.std_errors[q] + wrap_bound;
            if (gap / tol > worst) {
                worst = gap / tol;
                worst_gap = gap;
            }
        }
        reports.push_back(ratio_report("mixed_generator(" + c.name + ")", worst,
                                       {{"max_abs_gap", worst_gap},
                                        {"wrap_bound", wrap_bound}}));
    }
    apply_overrides("mixed_generator", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_kolmogorov() {
    const double T = config_.horizon;
    KolmogorovGrid grid;
    grid.x_lo = -8.0;
    grid.x_hi = 8.0;
    grid.space_nodes = 801;
    grid.time_steps = 400;
    grid.horizon = T;

    const auto zero = [](double) { return 0.0; };
    const auto one = [](double) { return 1.0; };

    struct Case {
        std::string name;
        std::function<double(double)> terminal;
        std::function<double(double, double)> closed_form;  // (t, x)
        double tolerance;
    };
    const std::vector<Case> cases = {
        {"linear", [](double x) { return x; },
         [](double, double x) { return x; }, 1e-8},
        {"quadratic", [](double x) { return x * x; },
         [T](double t, double x) { return x * x + (T - t); }, 1e-3},
        {"sine", [](double x) { return std::sin(x); },
         [T](double t, double x) { return std::sin(x) * std::exp(-(T - t) / 2.0); },
         1e-3},
    };

    std::vector<IdentityReport> reports;
    for (const Case& c : cases) {
        const PdeTable table = kolmogorov_solve(zero, one, c.terminal, grid);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.space_nodes; ++i) {
            const double x = grid.x(i);
            if (std::abs(x) > 2.0) continue;
            sup = std::max(sup, std::abs(table.u(0, static_cast<Eigen::Index>(i)) -
                                         c.closed_form(0.0, x)));
        }
        IdentityReport r = IdentityReport::make("kolmogorov(" + c.name + ")", sup,
                                                0.0, 0.0, c.tolerance);
        reports.push_back(std::move(r));
    }
    apply_overrides("kolmogorov", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_feynman_kac() {
    const double T = config_.horizon;
    const std::size_t mc_paths = std::min<std::size_t>(config_.paths, 100000);
    std::vector<IdentityReport> reports;

    {
        KolmogorovGrid grid{-8.0, 8.0, 801, 400, T};
        IdentityReport r = feynman_kac_check(
            [](double) { return 0.0; }, [](double) { return 1.0; },
            [](double x) { return x; }, grid,
            {{0.0, 0.0}, {0.0, 1.0}, {0.5 * T, -1.0}}, mc_paths,
            StreamKey{config_.master_seed, 5});
        r.name = "feynman_kac(trivial)";
        reports.push_back(std::move(r));
    }
    {
        KolmogorovGrid grid{-8.0, 8.0, 801, 400, T};
        const auto drift = [](double x) { return -x; };
        const auto vol = [](double) { return 1.0; };
        const auto terminal = [](double x) { return x * x; };
        IdentityReport r = feynman_kac_check(drift, vol, terminal, grid,
                                             {{0.0, 1.0}, {0.5 * T, 0.5}},
                                             mc_paths,
                                             StreamKey{config_.master_seed, 6});
        r.name = "feynman_kac(ou)";
        // Closed-form cross-check at (0, 1): X_T is Gaussian with mean e^{-T}
        // and variance (1 - e^{-2T}) / 2.
        const PdeTable table = kolmogorov_solve(drift, vol, terminal, grid);
        const double closed = std::exp(-2.0 * T) + (1.0 - std::exp(-2.0 * T)) / 2.0;
        r.metadata["pde_at_0_1"] = table.value(0.0, 1.0);
        r.metadata["closed_form_0_1"] = closed;
        if (std::abs(table.value(0.0, 1.0) - closed) > 1e-3) {
            r.pass = false;
            r.estimate = std::max(r.estimate, 2.0);
        }
        reports.push_back(std::move(r));
    }
    {
        KolmogorovGrid grid{0.0, 5.0, 501, 400, T};
        const auto drift = [](double x) { return 0.1 * x; };
        const auto vol = [](double x) { return 0.2 * x; };
        const auto terminal = [](double x) { return x; };
        IdentityReport r = feynman_kac_check(drift, vol, terminal, grid,
                                             {{0.0, 1.0}}, mc_paths,
                                             StreamKey{config_.master_seed, 7});
        r.name = "feynman_kac(geometric)";
        const PdeTable table = kolmogorov_solve(drift, vol, terminal, grid);
        const double closed = std::exp(0.1 * T);
        r.metadata["pde_at_0_1"] = table.value(0.0, 1.0);
        r.metadata["closed_form_0_1"] = closed;
        if (std::abs(table.value(0.0, 1.0) - closed) > 1e-3) {
            r.pass = false;
            r.estimate = std::max(r.estimate, 2.0);
        }
        reports.push_back(std::move(r));
    }
    apply_overrides("feynman_kac", reports);
    return reports;
}

std::vector<IdentityReport> SuiteRunner::check_dupire() {
    const TimeGrid grid(config_.horizon, config_.steps);
    // One representative Brownian path plus a crafted node value for the
    // quadratic example.
    const PathEnsemble ens =
        simulate_brownian(grid, 1, StreamKey{config_.master_seed, 8});
    std::vector<double> path(static_cast<std::size_t>(ens.values.cols()));
    for (Eigen::Index i = 0; i < ens.values.cols(); ++i) {
        path[static_cast<std::size_t>(i)] = ens.values(0, i);
    }
    const std::size_t mid = grid.steps / 2;
    std::vector<double> crafted = path;
    crafted[mid] = 0.7;

    const double h_vert = 1e-4;
    const double h_horiz = grid.dt() / 2.0;

    std::vector<IdentityReport> reports;
    reports.push_back(IdentityReport::make(
        "dupire(vertical, endpoint)",
        vertical_derivative(endpoint_functional(), path, grid, mid, h_vert), 1.0,
        0.0, 1e-8));
    reports.push_back(IdentityReport::make(
        "dupire(vertical, endpoint_square)",
        vertical_derivative(endpoint_square_functional(), crafted, grid, mid,
                            h_vert),
        1.4, 0.0, 1e-8));
    reports.push_back(IdentityReport::make(
        "dupire(vertical, running_integral)",
        vertical_derivative(running_integral_functional(), path, grid, mid,
                            h_vert),
        0.0, 0.0, 1e-8));
    reports.push_back(IdentityReport::make(
        "dupire(horizontal, endpoint)",
        horizontal_derivative(endpoint_functional(), path, grid, mid, h_horiz),
        0.0, 0.0, 1e-8));
    reports.push_back(IdentityReport::make(
        "dupire(horizontal, running_integral)",
        horizontal_derivative(running_integral_functional(), path, grid, mid,
                              h_horiz),
        path[mid], 0.0, 1e-8));
    reports.push_back(IdentityReport::make(
        "dupire(horizontal, separable)",
        horizontal_derivative(separable_functional(), path, grid, mid, h_horiz),
        path[0], 0.0, 1e-8));
    apply_overrides("dupire", reports);
    return reports;
}

void SuiteRunner::apply_overrides(const std::string& check_name,
                                  std::vector<IdentityReport>& reports) const {
    const auto it = config_.tolerance_overrides.find(check_name);
    if (it == config_.tolerance_overrides.end()) return;
    if (!it->second.override_flag) {
        throw std::invalid_argument("tolerance override for '" + check_name +
                                    "' requires the explicit override flag");
    }
    for (IdentityReport& r : reports) {
        if (it->second.value > r.tolerance) {
            r.tolerance = it->second.value;
            r.pass = r.deviation() <= r.tolerance ||
                     (r.target == 0.0 && r.estimate <= r.tolerance);
            r.metadata["tolerance_overridden"] = 1.0;
        }
    }
}

CheckResult SuiteRunner::run_check(const std::string& name) {
    CheckResult result;
    result.name = name;
    if (name == "ito_isometry") result.reports = check_ito_isometry();
    else if (name == "centering") result.reports = check_centering();
    else if (name == "clark_ocone") result.reports = check_clark_ocone();
    else if (name == "variance_identity") result.reports = check_variance_identity();
    else if (name == "adjointness") result.reports = check_adjointness();
    else if (name == "malliavin") result.reports = check_malliavin();
    else if (name == "fbm_covariance") result.reports = check_fbm_covariance();
    else if (name == "stable_charfn") result.reports = check_stable_charfn();
    else if (name == "mixed_generator") result.reports = check_mixed_generator();
    else if (name == "kolmogorov") result.reports = check_kolmogorov();
    else if (name == "feynman_kac") result.reports = check_feynman_kac();
    else if (name == "dupire") result.reports = check_dupire();
    else throw std::invalid_argument("unknown check '" + name + "'");
    return result;
}

RunReport SuiteRunner::run(const std::vector<std::string>& suite) {
    RunReport report;
    for (const std::string& name : suite) {
        const auto start = std::chrono::steady_clock::now();
        CheckResult result = run_check(name);
        const auto stop = std::chrono::steady_clock::now();
        report.wall_ms[name] =
            std::chrono::duration<double, std::milli>(stop - start).count();
        report.overall_pass = report.overall_pass && all_pass(result.reports);
        report.checks.push_back(std::move(result));
    }
    return report;
}

nlohmann::json run_report_to_json(const RunReport& report) {
    nlohmann::json j;
    j["config"] = report.config_echo;
    j["overall_verdict"] = report.overall_pass ? "pass" : "fail";
    nlohmann::json checks = nlohmann::json::array();
    for (const CheckResult& c : report.checks) {
        nlohmann::json jc;
        jc["check"] = c.name;
        nlohmann::json reports = nlohmann::json::array();
        for (const IdentityReport& r : c.reports) reports.push_back(to_json(r));
        jc["reports"] = reports;
        jc["verdict"] = all_pass(c.reports) ? "pass" : "fail";
        checks.push_back(jc);
    }
    j["checks"] = checks;
    return j;
}

nlohmann::json run_metadata_to_json(const RunReport& report) {
    nlohmann::json j;
    j["wall_ms"] = report.wall_ms;
    return j;
}

}  // namespace stochlab
