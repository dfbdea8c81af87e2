#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "stochlab/parallel.hpp"
#include "stochlab/paths.hpp"
#include "stochlab/stats.hpp"

using namespace stochlab;

namespace {
const StreamKey kSeed{42, 0};
}

TEST_CASE("Brownian paths start at zero and have the right law") {
    const TimeGrid grid(1.0, 256);
    const PathEnsemble ens = simulate_brownian(grid, 100000, kSeed);

    CHECK((ens.values.col(0).array() == 0.0).all());

    const Estimate var = variance_estimate(ens.values.col(256));
    CHECK(std::abs(var.value - 1.0) <= 4.0 * var.std_error);

    // Cov(B_{0.5}, B_1) = 0.5.
    const double cov = sample_covariance(ens.values.col(128), ens.values.col(256));
    // SE of the covariance estimated from the product samples.
    const Eigen::VectorXd prod =
        (ens.values.col(128).array() * ens.values.col(256).array()).matrix();
    const Estimate prod_mean = mean_estimate(prod);
    CHECK(std::abs(cov - 0.5) <= 4.0 * prod_mean.std_error);
}

TEST_CASE("fBM marginal variances match the covariance formula") {
    const TimeGrid grid(1.0, 64);
    for (const double hurst : {0.25, 0.5, 0.75}) {
        const PathEnsemble ens = simulate_fbm(grid, hurst, 100000, kSeed);
        const Estimate var_one = variance_estimate(ens.values.col(64));
        CHECK(std::abs(var_one.value - 1.0) <= 4.0 * var_one.std_error);

        const Estimate var_half = variance_estimate(ens.values.col(32));
        const double target = fbm_covariance(hurst, 0.5, 0.5);
        CHECK(std::abs(var_half.value - target) <= 4.0 * var_half.std_error);
    }
}

TEST_CASE("fBM with H = 1/2 has Brownian covariance min(s, t)") {
    const TimeGrid grid(1.0, 32);
    const PathEnsemble ens = simulate_fbm(grid, 0.5, 100000, kSeed);
    for (std::size_t i = 1; i <= 32; i += 7) {
        for (std::size_t j = i; j <= 32; j += 7) {
            const Eigen::VectorXd prod =
                (ens.values.col(static_cast<Eigen::Index>(i)).array() *
                 ens.values.col(static_cast<Eigen::Index>(j)).array())
                    .matrix();
            const Estimate m = mean_estimate(prod);
            const double target = std::min(grid.node(i), grid.node(j));
            CHECK(std::abs(m.value - target) <= 4.0 * m.std_error);
        }
    }
}

TEST_CASE("Volterra with identity kernel reproduces the Brownian paths") {
    const TimeGrid grid(1.0, 64);
    const VolterraKernel identity{[](double, double) { return 1.0; }, "K=1"};
    const PathEnsemble bm = simulate_brownian(grid, 100, kSeed);
    const PathEnsemble vol = simulate_volterra(grid, identity, 100, kSeed);
    CHECK((bm.values - vol.values).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Volterra variance oracles") {
    const TimeGrid grid(1.0, 256);
    const double dt = grid.dt();
    const std::size_t m = 100000;

    // The left-point scheme Var = sum K(1, t_i)^2 dt approaches the integral
    // at rate O(dt); allow that bias on top of the MC band.
    const VolterraKernel moving_avg{[](double t, double s) { return t - s; },
                                    "K=t-s"};
    const PathEnsemble a = simulate_volterra(grid, moving_avg, m, kSeed);
    const Estimate var_a = variance_estimate(a.values.col(256));
    CHECK(std::abs(var_a.value - 1.0 / 3.0) <= 4.0 * var_a.std_error + 2.0 * dt);

    const VolterraKernel ramp{[](double, double s) { return s; }, "K=s"};
    const PathEnsemble b = simulate_volterra(grid, ramp, m, kSeed);
    const Estimate var_b = variance_estimate(b.values.col(256));
    CHECK(std::abs(var_b.value - 1.0 / 3.0) <= 4.0 * var_b.std_error + 2.0 * dt);
}

TEST_CASE("degenerate diffusion is bit-identical to Brownian") {
    const TimeGrid grid(1.0, 128);
    const PathEnsemble bm = simulate_brownian(grid, 500, kSeed);
    const PathEnsemble diff = simulate_diffusion(
        grid, [](double) { return 0.0; }, [](double) { return 1.0; }, 0.0, 500,
        kSeed);
    CHECK((bm.values.array() == diff.values.array()).all());
}

TEST_CASE("Ornstein-Uhlenbeck terminal variance") {
    const TimeGrid grid(1.0, 256);
    const PathEnsemble ens = simulate_diffusion(
        grid, [](double x) { return -x; }, [](double) { return 1.0; }, 0.0,
        100000, kSeed);
    const Estimate var = variance_estimate(ens.values.col(256));
    const double target = (1.0 - std::exp(-2.0)) / 2.0;
    CHECK(std::abs(var.value - target) <= 4.0 * var.std_error + 3.0 * grid.dt());
}

TEST_CASE("geometric diffusion terminal mean") {
    const TimeGrid grid(1.0, 256);
    const PathEnsemble ens = simulate_diffusion(
        grid, [](double x) { return 0.1 * x; },
        [](double x) { return 0.2 * x; }, 1.0, 100000, kSeed);
    const Estimate mean = mean_estimate(ens.values.col(256));
    CHECK(std::abs(mean.value - std::exp(0.1)) <=
          4.0 * mean.std_error + 3.0 * grid.dt());
}

TEST_CASE("stable Levy endpoint law") {
    const TimeGrid grid(1.0, 32);
    StableParams params;
    params.gamma = 1.5;
    params.c_gamma = 1.0;
    params.truncation = 1.0;
    const PathEnsemble ens = simulate_stable_levy(grid, params, 100000, kSeed);
    const Eigen::VectorXd l1 = ens.values.col(32);

    const Estimate cos_mean = mean_estimate((l1.array().cos()).matrix());
    CHECK(std::abs(cos_mean.value - std::exp(-1.0)) <= 4.0 * cos_mean.std_error);

    for (const double xi : {0.3, 1.7}) {
        const Estimate sin_mean = mean_estimate((l1.array() * xi).sin().matrix());
        CHECK(std::abs(sin_mean.value) <= 4.0 * sin_mean.std_error);
    }
}

TEST_CASE("stable self-similarity via two-sample KS") {
    StableParams params;
    params.gamma = 1.5;
    params.c_gamma = 1.0;
    params.truncation = 1.0;
    const std::size_t m = 20000;
    const PathEnsemble two = simulate_stable_levy(TimeGrid(2.0, 16), params, m,
                                                  StreamKey{42, 1});
    const PathEnsemble one = simulate_stable_levy(TimeGrid(1.0, 16), params, m,
                                                  StreamKey{42, 2});
    const double scale = std::pow(2.0, 1.0 / params.gamma);
    std::vector<double> a(m), b(m);
    for (std::size_t i = 0; i < m; ++i) {
        a[i] = two.values(static_cast<Eigen::Index>(i), 16);
        b[i] = scale * one.values(static_cast<Eigen::Index>(i), 16);
    }
    CHECK(ks_statistic(a, b) < ks_critical_value(0.01, m, m));
}

TEST_CASE("stable jump records respect the truncation budget") {
    const TimeGrid grid(1.0, 16);
    StableParams params;
    params.gamma = 1.5;
    params.c_gamma = 1.0;
    const PathEnsemble ens = simulate_stable_levy(grid, params, 200, kSeed);
    CHECK(ens.jump_truncation > 0.0);
    double total = 0.0;
    for (const auto& records : ens.jumps) {
        for (const JumpRecord& rec : records) {
            CHECK(std::abs(rec.size) > ens.jump_truncation);
            CHECK(rec.time >= 0.0);
            CHECK(rec.time <= grid.horizon);
        }
        total += static_cast<double>(records.size());
    }
    // Expected records per path is capped at 1000 by the threshold choice.
    CHECK(total / 200.0 < 1200.0);
}

TEST_CASE("mixture degenerates and additivity") {
    const TimeGrid grid(1.0, 64);
    const PathEnsemble bm = simulate_brownian(grid, 100000, StreamKey{42, 3});

    SUBCASE("beta = 0 reduces to the scaled first component") {
        const PathEnsemble fbm = simulate_fbm(grid, 0.75, 100000, StreamKey{42, 4});
        const PathEnsemble mix = simulate_mixed(2.0, 0.0, bm, fbm);
        CHECK((mix.values - 2.0 * bm.values).cwiseAbs().maxCoeff() < 1e-12);
    }

    SUBCASE("independent fBM mixture adds variances") {
        const PathEnsemble fbm = simulate_fbm(grid, 0.75, 100000, StreamKey{42, 4});
        const PathEnsemble mix = simulate_mixed(1.0, 1.0, bm, fbm);
        const Estimate var = variance_estimate(mix.values.col(64));
        CHECK(std::abs(var.value - 2.0) <= 4.0 * var.std_error);
    }

    SUBCASE("Brownian-stable mixture has additive exponent") {
        StableParams params;
        params.gamma = 1.5;
        params.c_gamma = 1.0;
        params.truncation = 1.0;
        const PathEnsemble levy =
            simulate_stable_levy(grid, params, 100000, StreamKey{42, 5});
        const PathEnsemble mix = simulate_mixed(1.0, 1.0, bm, levy);
        const Estimate cf = mean_estimate(mix.values.col(64).array().cos().matrix());
        CHECK(std::abs(cf.value - std::exp(-1.5)) <= 4.0 * cf.std_error);
    }
}

TEST_CASE("path generation is schedule-independent") {
    const TimeGrid grid(1.0, 64);
    set_max_threads(1);
    const PathEnsemble a = simulate_brownian(grid, 1000, kSeed);
    set_max_threads(4);
    const PathEnsemble b = simulate_brownian(grid, 1000, kSeed);
    set_max_threads(0);
    CHECK((a.values.array() == b.values.array()).all());
}
