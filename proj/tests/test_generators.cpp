#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "stochlab/generators.hpp"

using namespace stochlab;

namespace {

double gaussian_density(double x, double variance) {
    return std::exp(-x * x / (2.0 * variance)) /
           std::sqrt(2.0 * std::numbers::pi * variance);
}

}  // namespace

TEST_CASE("zero-time evolution is the identity") {
    const SpectralField f0 = SpectralField::sample(
        20.0, 512, [](double x) { return std::exp(-x * x); });
    const SpectralField out = spectral_evolve(f0, 0.0, {1.0, 1.0, 1.5, 1.0});
    for (std::size_t j = 0; j < f0.resolution(); ++j) {
        CHECK(out.values[j] == doctest::Approx(f0.values[j]).epsilon(1e-12));
    }
}

TEST_CASE("heat evolution of a Gaussian density") {
    const double v0 = 0.25;
    const double t = 0.5;
    const SpectralField f0 = SpectralField::sample(
        40.0, 4096, [v0](double x) { return gaussian_density(x, v0); });
    const SpectralField out = spectral_evolve(f0, t, {1.0, 0.0, 1.5, 1.0});
    double sup = 0.0;
    for (std::size_t j = 0; j < out.resolution(); ++j) {
        sup = std::max(sup, std::abs(out.values[j] -
                                     gaussian_density(out.x(j), v0 + t)));
    }
    CHECK(sup < 1e-6 + 1e-10);
}

TEST_CASE("Cauchy semigroup closed form") {
    // alpha=0, gamma=1, c=1: the kernel is Cauchy with scale t, and the
    // evolution of a Cauchy density with scale a is Cauchy with scale a + t.
    const double a = 1.0;
    const double t = 0.5;
    const auto cauchy = [](double x, double s) {
        return s / (std::numbers::pi * (x * x + s * s));
    };
    const SpectralField f0 = SpectralField::sample(
        200.0, 16384, [&](double x) { return cauchy(x, a); });
    const SpectralField out = spectral_evolve(f0, t, {0.0, 1.0, 1.0, 1.0});
    double sup = 0.0;
    for (std::size_t j = 0; j < out.resolution(); ++j) {
        if (std::abs(out.x(j)) > 20.0) continue;
        sup = std::max(sup, std::abs(out.values[j] - cauchy(out.x(j), a + t)));
    }
    CHECK(sup < 1e-4 + 2e-3 / 200.0);  // wrap-around of the heavy tail
}

TEST_CASE("semigroup property is exact") {
    const GeneratorParams params{1.0, 1.0, 1.5, 1.0};
    const SpectralField f0 = SpectralField::sample(
        20.0, 1024, [](double x) { return std::exp(-x * x); });
    const SpectralField two_step = spectral_evolve(spectral_evolve(f0, 0.3, params),
                                                   0.45, params);
    const SpectralField one_step = spectral_evolve(f0, 0.75, params);
    double rel = 0.0;
    for (std::size_t j = 0; j < f0.resolution(); ++j) {
        rel = std::max(rel, std::abs(two_step.values[j] - one_step.values[j]));
    }
    CHECK(rel < 1e-12);
}

TEST_CASE("mass conservation and maximum principle") {
    const SpectralField f0 = SpectralField::sample(
        40.0, 2048, [](double x) { return gaussian_density(x, 0.5); });
    const SpectralField out = spectral_evolve(f0, 1.0, {1.0, 1.0, 1.5, 1.0});
    double mass0 = 0.0, mass1 = 0.0, sup1 = 0.0;
    for (std::size_t j = 0; j < f0.resolution(); ++j) {
        mass0 += f0.values[j];
        mass1 += out.values[j];
        sup1 = std::max(sup1, out.values[j]);
    }
    CHECK(mass1 == doctest::Approx(mass0).epsilon(1e-12));
    CHECK(sup1 <= gaussian_density(0.0, 0.5) + 1e-6);
}

TEST_CASE("MC smoothing oracles") {
    const StreamKey seed{42, 30};
    const double t = 0.5;

    SUBCASE("constants are invariant, exactly") {
        const CurveWithError out = mc_smoothing([](double) { return 1.0; }, t,
                                                {1.0, 1.0, 1.5, 1.0},
                                                {-1.0, 0.0, 2.0}, 2000, seed);
        for (double v : out.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }

    SUBCASE("Gaussian smoothing of cosine") {
        const std::vector<double> xs = {-1.0, 0.0, 0.7};
        const CurveWithError out =
            mc_smoothing([](double x) { return std::cos(x); }, t,
                         {1.0, 0.0, 1.5, 1.0}, xs, 200000, seed);
        for (std::size_t q = 0; q < xs.size(); ++q) {
            const double target = std::cos(xs[q]) * std::exp(-t / 2.0);
            CHECK(std::abs(out.values[q] - target) <= 4.0 * out.std_errors[q]);
        }
    }

    SUBCASE("stable smoothing of cosine") {
        const std::vector<double> xs = {-1.0, 0.0, 0.7};
        const CurveWithError out =
            mc_smoothing([](double x) { return std::cos(x); }, t,
                         {0.0, 1.0, 1.5, 1.0}, xs, 200000, seed);
        for (std::size_t q = 0; q < xs.size(); ++q) {
            const double target = std::cos(xs[q]) * std::exp(-t);
            CHECK(std::abs(out.values[q] - target) <= 4.0 * out.std_errors[q]);
        }
    }
}

TEST_CASE("Kolmogorov solver closed forms") {
    KolmogorovGrid grid;
    grid.x_lo = -8.0;
    grid.x_hi = 8.0;
    grid.space_nodes = 801;
    grid.time_steps = 400;
    grid.horizon = 1.0;
    const auto zero = [](double) { return 0.0; };
    const auto one = [](double) { return 1.0; };

    SUBCASE("linear terminal data is invariant") {
        const PdeTable table =
            kolmogorov_solve(zero, one, [](double x) { return x; }, grid);
        for (std::size_t i = 0; i < grid.space_nodes; ++i) {
            CHECK(std::abs(table.u(0, static_cast<Eigen::Index>(i)) - grid.x(i)) <
                  1e-8);
        }
    }

    SUBCASE("quadratic terminal data") {
        const PdeTable table =
            kolmogorov_solve(zero, one, [](double x) { return x * x; }, grid);
        CHECK(std::abs(table.value(0.0, 0.0) - 1.0) < 1e-3);
    }

    SUBCASE("sine terminal data on the interior") {
        const PdeTable table =
            kolmogorov_solve(zero, one, [](double x) { return std::sin(x); },
                             grid);
        double sup = 0.0;
        for (std::size_t i = 0; i < grid.space_nodes; ++i) {
            const double x = grid.x(i);
            if (std::abs(x) > 2.0) continue;
            sup = std::max(sup, std::abs(table.u(0, static_cast<Eigen::Index>(i)) -
                                         std::sin(x) * std::exp(-0.5)));
        }
        CHECK(sup < 1e-3);
    }
}

TEST_CASE("Feynman-Kac cross-checks") {
    KolmogorovGrid grid;
    grid.x_lo = -8.0;
    grid.x_hi = 8.0;
    grid.space_nodes = 801;
    grid.time_steps = 400;
    grid.horizon = 1.0;
    const StreamKey seed{42, 31};

    SUBCASE("trivial martingale case") {
        const IdentityReport r = feynman_kac_check(
            [](double) { return 0.0; }, [](double) { return 1.0; },
            [](double x) { return x; }, grid, {{0.0, 0.0}, {0.0, 1.0}}, 50000,
            seed);
        CHECK(r.pass);
    }

    SUBCASE("OU second moment with closed form") {
        const auto drift = [](double x) { return -x; };
        const auto vol = [](double) { return 1.0; };
        const auto terminal = [](double x) { return x * x; };
        const IdentityReport r = feynman_kac_check(drift, vol, terminal, grid,
                                                   {{0.0, 1.0}}, 50000, seed);
        CHECK(r.pass);
        const PdeTable table = kolmogorov_solve(drift, vol, terminal, grid);
        const double closed = std::exp(-2.0) + (1.0 - std::exp(-2.0)) / 2.0;
        CHECK(std::abs(table.value(0.0, 1.0) - closed) < 1e-3);
    }

    SUBCASE("geometric mean with closed form") {
        KolmogorovGrid pos{0.0, 5.0, 501, 400, 1.0};
        const auto drift = [](double x) { return 0.1 * x; };
        const auto vol = [](double x) { return 0.2 * x; };
        const auto terminal = [](double x) { return x; };
        const IdentityReport r = feynman_kac_check(drift, vol, terminal, pos,
                                                   {{0.0, 1.0}}, 50000, seed);
        CHECK(r.pass);
        const PdeTable table = kolmogorov_solve(drift, vol, terminal, pos);
        CHECK(std::abs(table.value(0.0, 1.0) - std::exp(0.1)) < 1e-3);
    }
}
