#include "stochlab/paths.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "stochlab/parallel.hpp"

namespace stochlab {

namespace {

void require_stable_index(double gamma) {
    if (!(gamma > 0.0) || !(gamma < 2.0)) {
        throw std::invalid_argument("stable index gamma must lie in (0, 2)");
    }
}

Eigen::MatrixXd gaussian_increment_matrix(const TimeGrid& grid,
                                          std::size_t n_paths, StreamKey seed) {
    const std::size_t n = grid.steps;
    const double root_dt = std::sqrt(grid.dt());
    Eigen::MatrixXd dw(n_paths, n);
    parallel_for(0, n_paths, [&](std::size_t m) {
        auto stream = RandomStream::for_path(seed.master_seed,
                                             kPurposeGaussianIncrements, m);
        for (std::size_t i = 0; i < n; ++i) {
            dw(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(i)) =
                root_dt * stream.gaussian();
        }
    });
    return dw;
}

}  // namespace

std::vector<double> sample_stable(RandomStream& stream, double gamma,
                                  double scale, std::size_t n) {
    require_stable_index(gamma);
    if (!(scale > 0.0)) {
        throw std::invalid_argument("stable scale must be positive");
    }
    const double factor = std::pow(scale, 1.0 / gamma);
    std::vector<double> out(n);
    for (double& x : out) x = factor * stream.stable(gamma);
    return out;
}

double fbm_covariance(double hurst, double s, double t) {
    const double h2 = 2.0 * hurst;
    return 0.5 * (std::pow(s, h2) + std::pow(t, h2) -
                  std::pow(std::abs(t - s), h2));
}

double levy_tail_coefficient(double gamma, double c_gamma) {
    require_stable_index(gamma);
    // integral_0^inf (1 - cos u) u^{-1-gamma} du; the gamma = 1 value is the
    // limit of the general expression.
    double tail_integral;
    if (gamma == 1.0) {
        tail_integral = std::numbers::pi / 2.0;
    } else {
        tail_integral = std::tgamma(1.0 - gamma) *
                        std::cos(std::numbers::pi * gamma / 2.0) / gamma;
    }
    return c_gamma / (2.0 * tail_integral);
}

double levy_tail_mass(double gamma, double k_coeff, double eps) {
    return 2.0 * k_coeff * std::pow(eps, -gamma) / gamma;
}

double stable_truncation_for_budget(double gamma, double k_coeff, double T,
                                    double budget) {
    // Solve 2 k eps^{-gamma} T / gamma = budget for eps.
    return std::pow(2.0 * k_coeff * T / (gamma * budget), 1.0 / gamma);
}

PathEnsemble simulate_brownian(const TimeGrid& grid, std::size_t n_paths,
                               StreamKey seed) {
    if (n_paths < 1) throw std::invalid_argument("need at least one path");
    PathEnsemble ens;
    ens.grid = grid;
    ens.label = "brownian";
    ens.seed = seed;
    ens.increments = gaussian_increment_matrix(grid, n_paths, seed);
    ens.values.resize(n_paths, grid.node_count());
    ens.values.col(0).setZero();
    for (std::size_t i = 0; i < grid.steps; ++i) {
        ens.values.col(static_cast<Eigen::Index>(i + 1)) =
            ens.values.col(static_cast<Eigen::Index>(i)) +
            ens.increments.col(static_cast<Eigen::Index>(i));
    }
    return ens;
}

PathEnsemble simulate_fbm(const TimeGrid& grid, double hurst,
                          std::size_t n_paths, StreamKey seed) {
    if (!(hurst > 0.0) || !(hurst < 1.0)) {
        throw std::invalid_argument("Hurst parameter must lie in (0, 1)");
    }
    const std::size_t n = grid.steps;
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            cov(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                fbm_covariance(hurst, grid.node(i + 1), grid.node(j + 1));
        }
    }
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    double jitter = 1e-14 * cov.diagonal().maxCoeff();
    while (llt.info() != Eigen::Success && jitter < 1e-6) {
        Eigen::MatrixXd bumped = cov;
        bumped.diagonal().array() += jitter;
        llt.compute(bumped);
        jitter *= 10.0;
    }
    if (llt.info() != Eigen::Success) {
        throw std::runtime_error(
            "fBM covariance factorization failed: matrix not positive definite "
            "after regularization (grid too fine for this Hurst parameter)");
    }
    const Eigen::MatrixXd chol = llt.matrixL();

    PathEnsemble ens;
    ens.grid = grid;
    ens.label = "fbm(H=" + std::to_string(hurst) + ")";
    ens.seed = seed;
    ens.values.resize(n_paths, grid.node_count());
    ens.values.col(0).setZero();
    parallel_for(0, n_paths, [&](std::size_t m) {
        auto stream = RandomStream::for_path(seed.master_seed, kPurposeFbmNoise, m);
        Eigen::VectorXd z(n);
        for (std::size_t i = 0; i < n; ++i) z(static_cast<Eigen::Index>(i)) = stream.gaussian();
        ens.values.row(static_cast<Eigen::Index>(m)).tail(n) = (chol * z).transpose();
    });
    return ens;
}

PathEnsemble simulate_volterra(const TimeGrid& grid, const VolterraKernel& kernel,
                               std::size_t n_paths, StreamKey seed) {
    const std::size_t n = grid.steps;
    // Left-point kernel weights K(t_j, t_i), i < j, tabulated once.
    Eigen::MatrixXd weights = Eigen::MatrixXd::Zero(n + 1, n);
    for (std::size_t j = 1; j <= n; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double k = kernel.eval(grid.node(j), grid.node(i));
            if (!std::isfinite(k)) {
                throw std::invalid_argument("Volterra kernel not finite on grid");
            }
            weights(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = k;
        }
    }
    PathEnsemble ens;
    ens.grid = grid;
    ens.label = kernel.label.empty() ? "volterra" : "volterra(" + kernel.label + ")";
    ens.seed = seed;
    ens.increments = gaussian_increment_matrix(grid, n_paths, seed);
    ens.values.resize(n_paths, grid.node_count());
    ens.values.col(0).setZero();
    parallel_for(0, n_paths, [&](std::size_t m) {
        const auto row = static_cast<Eigen::Index>(m);
        for (std::size_t j = 1; j <= n; ++j) {
            double x = 0.0;
            for (std::size_t i = 0; i < j; ++i) {
                x += weights(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) *
                     ens.increments(row, static_cast<Eigen::Index>(i));
            }
            ens.values(row, static_cast<Eigen::Index>(j)) = x;
        }
    });
    return ens;
}

PathEnsemble simulate_diffusion(const TimeGrid& grid,
                                const std::function<double(double)>& drift,
                                const std::function<double(double)>& vol,
                                double x0, std::size_t n_paths, StreamKey seed) {
    PathEnsemble ens;
    ens.grid = grid;
    ens.label = "diffusion";
    ens.seed = seed;
    ens.increments = gaussian_increment_matrix(grid, n_paths, seed);
    ens.values.resize(n_paths, grid.node_count());
    ens.values.col(0).setConstant(x0);
    const double dt = grid.dt();
    std::vector<unsigned char> diverged(n_paths, 0);
    parallel_for(0, n_paths, [&](std::size_t m) {
        const auto row = static_cast<Eigen::Index>(m);
        double x = x0;
        for (std::size_t i = 0; i < grid.steps; ++i) {
            x = x + drift(x) * dt + vol(x) * ens.increments(row, static_cast<Eigen::Index>(i));
            if (!std::isfinite(x)) {
                diverged[m] = 1;
                x = 0.0;
            }
            ens.values(row, static_cast<Eigen::Index>(i + 1)) = x;
        }
    });
    const std::size_t bad = static_cast<std::size_t>(
        std::count(diverged.begin(), diverged.end(), 1));
    if (bad > 0) {
        throw std::runtime_error("diffusion simulation diverged on " +
                                 std::to_string(bad) + " of " +
                                 std::to_string(n_paths) + " paths");
    }
    return ens;
}

PathEnsemble simulate_stable_levy(const TimeGrid& grid, const StableParams& params,
                                  std::size_t n_paths, StreamKey seed) {
    require_stable_index(params.gamma);
    const double k_coeff = levy_tail_coefficient(params.gamma, params.c_gamma);
    const double eps = params.truncation > 0.0
                           ? params.truncation
                           : stable_truncation_for_budget(params.gamma, k_coeff,
                                                          grid.horizon);
    const double jump_rate = levy_tail_mass(params.gamma, k_coeff, eps);

    PathEnsemble ens;
    ens.grid = grid;
    ens.label = "stable(gamma=" + std::to_string(params.gamma) + ")";
    ens.seed = seed;
    ens.jump_truncation = eps;
    ens.values.resize(n_paths, grid.node_count());
    ens.values.col(0).setZero();
    ens.jumps.resize(n_paths);

    // Per-step increment scale: char. fn. exp(-dt * c |xi|^gamma).
    const double step_scale = std::pow(grid.dt() * params.c_gamma, 1.0 / params.gamma);
    parallel_for(0, n_paths, [&](std::size_t m) {
        const auto row = static_cast<Eigen::Index>(m);
        auto stream = RandomStream::for_path(seed.master_seed,
                                             kPurposeStableIncrements, m);
        double x = 0.0;
        for (std::size_t i = 0; i < grid.steps; ++i) {
            x += step_scale * stream.stable(params.gamma);
            ens.values(row, static_cast<Eigen::Index>(i + 1)) = x;
        }
        // Jumps above eps from the compound-Poisson decomposition: count
        // Poisson(rate * T), times uniform on (0, T], tail sizes eps * U^{-1/gamma}.
        auto jump_stream = RandomStream::for_path(seed.master_seed,
                                                  kPurposeJumpDecomposition, m);
        const std::uint64_t count = jump_stream.poisson(jump_rate * grid.horizon);
        auto& records = ens.jumps[m];
        records.reserve(count);
        for (std::uint64_t j = 0; j < count; ++j) {
            JumpRecord rec;
            rec.time = grid.horizon * jump_stream.uniform();
            const double magnitude =
                eps * std::pow(jump_stream.uniform(), -1.0 / params.gamma);
            rec.size = (jump_stream.uniform() <= 0.5) ? magnitude : -magnitude;
            records.push_back(rec);
        }
        std::sort(records.begin(), records.end(),
                  [](const JumpRecord& a, const JumpRecord& b) { return a.time < b.time; });
    });
    return ens;
}

PathEnsemble simulate_poisson(const TimeGrid& grid, double rate, double jump_size,
                              std::size_t n_paths, StreamKey seed) {
    if (!(rate > 0.0)) throw std::invalid_argument("Poisson rate must be positive");
    PathEnsemble ens;
    ens.grid = grid;
    ens.label = "poisson(rate=" + std::to_string(rate) + ")";
    ens.seed = seed;
    ens.values.resize(n_paths, grid.node_count());
    ens.values.col(0).setZero();
    ens.jumps.resize(n_paths);
    parallel_for(0, n_paths, [&](std::size_t m) {
        auto stream = RandomStream::for_path(seed.master_seed,
                                             kPurposeJumpDecomposition, m);
        const std::uint64_t count = stream.poisson(rate * grid.horizon);
        auto& records = ens.jumps[m];
        records.reserve(count);
        for (std::uint64_t j = 0; j < count; ++j) {
            records.push_back({grid.horizon * stream.uniform(), jump_size});
        }
        std::sort(records.begin(), records.end(),
                  [](const JumpRecord& a, const JumpRecord& b) { return a.time < b.time; });
        const auto row = static_cast<Eigen::Index>(m);
        std::size_t next = 0;
        double x = 0.0;
        for (std::size_t i = 1; i <= grid.steps; ++i) {
            const double t = grid.node(i);
            while (next < records.size() && records[next].time <= t) {
                x += records[next].size;
                ++next;
            }
            ens.values(row, static_cast<Eigen::Index>(i)) = x;
        }
    });
    return ens;
}

PathEnsemble simulate_mixed(double alpha, double beta,
                            const PathEnsemble& component_a,
                            const PathEnsemble& component_b) {
    if (!(component_a.grid == component_b.grid) ||
        component_a.path_count() != component_b.path_count()) {
        throw std::invalid_argument("mixed components must share grid and path count");
    }
    PathEnsemble ens;
    ens.grid = component_a.grid;
    ens.label = "mixed(" + std::to_string(alpha) + "*" + component_a.label + " + " +
                std::to_string(beta) + "*" + component_b.label + ")";
    ens.seed = component_a.seed;
    ens.values = alpha * component_a.values + beta * component_b.values;
    if (component_b.has_jumps() && beta != 0.0) {
        ens.jump_truncation = component_b.jump_truncation;
        ens.jumps.resize(component_b.jumps.size());
        for (std::size_t m = 0; m < component_b.jumps.size(); ++m) {
            ens.jumps[m] = component_b.jumps[m];
            for (auto& rec : ens.jumps[m]) rec.size *= beta;
        }
    }
    return ens;
}

}  // namespace stochlab
