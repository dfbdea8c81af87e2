#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "stochlab/integration.hpp"
#include "stochlab/stats.hpp"

using namespace stochlab;

namespace {
const StreamKey kSeed{42, 10};
}

TEST_CASE("constant integrand telescopes to the endpoint") {
    const TimeGrid grid(1.0, 128);
    const PathEnsemble ens = simulate_brownian(grid, 1000, kSeed);
    const RandomVariableSample d =
        ito_integral(constant_integrand(grid, 1000, 1.0), ens);
    CHECK((d.values - ens.values.col(128)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Ito formula oracle: integral of 2B dB is B_T^2 - T") {
    const TimeGrid grid(1.0, 256);
    const PathEnsemble ens = simulate_brownian(grid, 100000, kSeed);
    const RandomVariableSample d =
        ito_integral(state_integrand(ens, [](double x) { return 2.0 * x; }), ens);
    const Eigen::VectorXd oracle =
        (ens.values.col(256).array().square() - 1.0).matrix();
    // Discrete Ito formula: B_T^2 = sum 2 B dB + sum (dB)^2, so the gap is
    // the QV fluctuation, O(sqrt(dt)) in L2.
    const double l2_gap = std::sqrt((d.values - oracle).squaredNorm() /
                                    static_cast<double>(d.values.size()));
    CHECK(l2_gap < 4.0 * std::sqrt(2.0 * grid.dt()));
}

TEST_CASE("isometry oracle for u = B_t") {
    const TimeGrid grid(1.0, 256);
    const PathEnsemble ens = simulate_brownian(grid, 100000, kSeed);
    const RandomVariableSample d =
        ito_integral(state_integrand(ens, [](double x) { return x; }), ens);
    const Estimate second = mean_estimate(d.values.array().square().matrix());
    CHECK(std::abs(second.value - 0.5) <= 4.0 * second.std_error + 2.0 * grid.dt());
}

TEST_CASE("ito_integral rejects non-adapted input") {
    const TimeGrid grid(1.0, 8);
    const PathEnsemble ens = simulate_brownian(grid, 10, kSeed);
    AdaptedProcessSample u;
    u.grid = grid;
    u.values = Eigen::MatrixXd::Ones(10, 8);
    u.adapted_by_construction = false;
    CHECK_THROWS(ito_integral(u, ens));
}

TEST_CASE("quadratic variation oracles") {
    const TimeGrid grid(1.0, 256);
    const PathEnsemble ens = simulate_brownian(grid, 100000, kSeed);
    const Eigen::MatrixXd qv = quadratic_variation(ens);
    const Estimate total = mean_estimate(qv.col(256));
    CHECK(std::abs(total.value - 1.0) <= 4.0 * total.std_error);

    PathEnsemble scaled = ens;
    scaled.values *= 2.0;
    const Estimate total4 = mean_estimate(quadratic_variation(scaled).col(256));
    CHECK(std::abs(total4.value - 4.0) <= 4.0 * total4.std_error);
}

TEST_CASE("smooth deterministic path has vanishing QV") {
    for (const std::size_t n : {64u, 256u, 1024u}) {
        const TimeGrid grid(1.0, n);
        PathEnsemble ens;
        ens.grid = grid;
        ens.values.resize(1, static_cast<Eigen::Index>(n) + 1);
        for (std::size_t i = 0; i <= n; ++i) {
            ens.values(0, static_cast<Eigen::Index>(i)) = grid.node(i);
        }
        const double qv = quadratic_variation(ens)(0, static_cast<Eigen::Index>(n));
        CHECK(qv == doctest::Approx(grid.dt()).epsilon(1e-10));
    }
}

TEST_CASE("energy norm oracles") {
    const TimeGrid grid(1.0, 256);
    const PathEnsemble ens = simulate_brownian(grid, 100000, kSeed);

    const Estimate unit = energy_norm_sq(constant_integrand(grid, 100000, 1.0),
                                         EnergySpec::brownian(), ens);
    CHECK(unit.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(unit.std_error == doctest::Approx(0.0));

    const Estimate state = energy_norm_sq(
        state_integrand(ens, [](double x) { return x; }), EnergySpec::brownian(),
        ens);
    CHECK(std::abs(state.value - 0.5) <= 4.0 * state.std_error + 2.0 * grid.dt());

    PathEnsemble scaled = ens;
    scaled.values *= 2.0;
    const Estimate qv_norm = energy_norm_sq(constant_integrand(grid, 100000, 1.0),
                                            EnergySpec::martingale_qv(), scaled);
    CHECK(std::abs(qv_norm.value - 4.0) <= 4.0 * qv_norm.std_error);
}

TEST_CASE("compensated Poisson integral on the finite-activity driver") {
    const TimeGrid grid(1.0, 64);
    const PathEnsemble ens = simulate_poisson(grid, 3.0, 1.0, 100000, kSeed);
    const EnergySpec spec = EnergySpec::poisson(LevyDensity::point_mass(3.0, 1.0),
                                                0.5);
    const JumpIntegrand one{[](double, double) { return 1.0; }, "v=1"};
    const RandomVariableSample d = compensated_poisson_integral(one, ens, spec);

    const Estimate mean = mean_estimate(d.values);
    CHECK(std::abs(mean.value) <= 4.0 * mean.std_error);

    const Estimate var = variance_estimate(d.values);
    CHECK(std::abs(var.value - 3.0) <= 4.0 * var.std_error);

    const JumpIntegrand zero{[](double, double) { return 0.0; }, "v=0"};
    const RandomVariableSample z = compensated_poisson_integral(zero, ens, spec);
    CHECK(z.values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("truncated isometry on the stable driver") {
    const TimeGrid grid(1.0, 64);
    StableParams params;
    params.gamma = 1.5;
    params.c_gamma = 1.0;
    params.truncation = 0.05;
    const PathEnsemble ens = simulate_stable_levy(grid, params, 100000, kSeed);
    const LevyDensity density = LevyDensity::from_stable(params);
    const EnergySpec spec = EnergySpec::poisson(density, params.truncation);

    // v(t, z) = z on eps < |z| <= 2: the two-sided cap keeps the second
    // moment integral finite for gamma < 2 (z^2 nu(dz) diverges at infinity).
    const double cap = 2.0;
    const JumpIntegrand v{
        [cap](double, double z) { return std::abs(z) <= cap ? z : 0.0; },
        "v=z (capped)"};
    const RandomVariableSample d = compensated_poisson_integral(v, ens, spec);

    const double target = levy_integral(
        [cap](double z) { return std::abs(z) <= cap ? z * z : 0.0; }, density,
        params.truncation);
    const Estimate second = mean_estimate(d.values.array().square().matrix());
    CHECK(std::abs(second.value - target) <= 4.0 * second.std_error);
}

TEST_CASE("power-law Levy integral closed form") {
    const LevyDensity density = LevyDensity::power_law(1.0, 1.5);
    const double eps = 0.1;
    // integral over eps < |z| <= 1 of z^2 * |z|^{-2.5} dz = 2 * [2 sqrt(z)]
    const double target = 4.0 * (1.0 - std::sqrt(eps));
    const double got = levy_integral(
        [](double z) { return std::abs(z) <= 1.0 ? z * z : 0.0; }, density, eps);
    CHECK(got == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("mixed divergence: degeneracy, additivity, independence") {
    const TimeGrid grid(1.0, 64);
    const std::size_t m = 100000;
    const PathEnsemble bm = simulate_brownian(grid, m, StreamKey{42, 11});
    const PathEnsemble pois = simulate_poisson(grid, 3.0, 1.0, m, StreamKey{42, 12});
    const EnergySpec jump_spec =
        EnergySpec::poisson(LevyDensity::point_mass(3.0, 1.0), 0.5);
    const AdaptedProcessSample u = constant_integrand(grid, m, 1.0);
    const JumpIntegrand v{[](double, double) { return 1.0; }, "v=1"};

    const RandomVariableSample mixed =
        mixed_divergence(u, v, 1.0, 1.0, bm, pois, jump_spec);
    const RandomVariableSample brownian_part = ito_integral(u, bm);
    const RandomVariableSample jump_part =
        compensated_poisson_integral(v, pois, jump_spec);

    SUBCASE("beta = 0 collapses to the scaled Brownian part") {
        const RandomVariableSample d =
            mixed_divergence(u, v, 2.0, 0.0, bm, pois, jump_spec);
        CHECK((d.values - 2.0 * brownian_part.values).cwiseAbs().maxCoeff() <
              1e-12);
    }

    SUBCASE("variance is additive across independent components") {
        const Estimate var = variance_estimate(mixed.values);
        CHECK(std::abs(var.value - 4.0) <= 4.0 * var.std_error);
    }

    SUBCASE("components are empirically uncorrelated") {
        const Eigen::VectorXd prod =
            (brownian_part.values.array() * jump_part.values.array()).matrix();
        const Estimate cross = mean_estimate(prod);
        CHECK(std::abs(cross.value) <= 4.0 * cross.std_error);
    }
}

TEST_CASE("divergence is exactly linear path-by-path") {
    const TimeGrid grid(1.0, 64);
    const PathEnsemble ens = simulate_brownian(grid, 1000, kSeed);
    const AdaptedProcessSample u = state_integrand(ens, [](double x) { return x; });
    const AdaptedProcessSample w =
        state_integrand(ens, [](double x) { return x * x; });
    AdaptedProcessSample combo;
    combo.grid = grid;
    combo.values = 2.0 * u.values + 3.0 * w.values;
    combo.adapted_by_construction = true;

    const Eigen::VectorXd lhs = ito_integral(combo, ens).values;
    const Eigen::VectorXd rhs = 2.0 * ito_integral(u, ens).values.array().matrix() +
                                3.0 * ito_integral(w, ens).values.array().matrix();
    // Left-to-right summation makes both sides evaluate the same fp sums up
    // to distribution of the scalar multipliers.
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("polarization identity") {
    const TimeGrid grid(1.0, 256);
    const PathEnsemble ens = simulate_brownian(grid, 100000, kSeed);
    const AdaptedProcessSample u = constant_integrand(grid, 100000, 1.0);
    const AdaptedProcessSample w = state_integrand(ens, [](double x) { return x; });

    const Eigen::VectorXd du = ito_integral(u, ens).values;
    const Eigen::VectorXd dw = ito_integral(w, ens).values;
    const Estimate cross = mean_estimate((du.array() * dw.array()).matrix());
    // <1, B_t> energy inner product = E int B_t dt = 0.
    CHECK(std::abs(cross.value) <= 4.0 * cross.std_error + 2.0 * grid.dt());
}
