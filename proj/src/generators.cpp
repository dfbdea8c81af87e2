#include "stochlab/generators.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>

#include "stochlab/paths.hpp"
#include <numbers>
#include <stdexcept>

#include "stochlab/parallel.hpp"
#include "stochlab/stats.hpp"

namespace stochlab {

SpectralField SpectralField::sample(double box_halfwidth, std::size_t resolution,
                                    const std::function<double(double)>& f) {
    if (resolution < 16 || (resolution & (resolution - 1)) != 0) {
        throw std::invalid_argument("spectral resolution must be a power of two >= 16");
    }
    SpectralField field;
    field.box_halfwidth = box_halfwidth;
    field.values.resize(resolution);
    for (std::size_t j = 0; j < resolution; ++j) {
        field.values[j] = f(field.x(j));
    }
    return field;
}

SpectralField spectral_evolve(const SpectralField& f0, double t,
                              const GeneratorParams& params) {
    if (t < 0.0) throw std::invalid_argument("evolution time must be nonnegative");
    const std::size_t n = f0.resolution();
    for (double v : f0.values) {
        if (!std::isfinite(v)) throw std::invalid_argument("non-finite field value");
    }
    if (t == 0.0) return f0;

    std::vector<double> in(f0.values);
    std::vector<fftw_complex> freq(n / 2 + 1);
    fftw_plan forward = fftw_plan_dft_r2c_1d(static_cast<int>(n), in.data(),
                                             freq.data(), FFTW_ESTIMATE);
    fftw_execute(forward);
    fftw_destroy_plan(forward);

    const double stable_weight =
        params.c_gamma * std::pow(params.beta, params.gamma);
    const double diffusion_weight = 0.5 * params.alpha * params.alpha;
    for (std::size_t k = 0; k <= n / 2; ++k) {
        // Mode k has wavenumber pi * k / L on the box [-L, L).
        const double xi = std::numbers::pi * static_cast<double>(k) /
                          f0.box_halfwidth;
        const double symbol = diffusion_weight * xi * xi +
                              (k == 0 ? 0.0 : stable_weight * std::pow(xi, params.gamma));
        const double damp = std::exp(-t * symbol);
        freq[k][0] *= damp;
        freq[k][1] *= damp;
    }

    SpectralField out;
    out.box_halfwidth = f0.box_halfwidth;
    out.values.resize(n);
    fftw_plan backward = fftw_plan_dft_c2r_1d(static_cast<int>(n), freq.data(),
                                              out.values.data(), FFTW_ESTIMATE);
    fftw_execute(backward);
    fftw_destroy_plan(backward);
    for (double& v : out.values) v /= static_cast<double>(n);
    return out;
}

CurveWithError mc_smoothing(const std::function<double(double)>& f, double t,
                            const GeneratorParams& params,
                            const std::vector<double>& x_grid,
                            std::size_t n_draws, StreamKey seed) {
    if (n_draws < 2) throw std::invalid_argument("need at least two draws");
    std::vector<double> shifts(n_draws, 0.0);
    const double root_t = std::sqrt(t);
    const double stable_scale =
        (params.beta != 0.0 && t > 0.0)
            ? std::pow(params.c_gamma * t, 1.0 / params.gamma)
            : 0.0;
    parallel_for(0, n_draws, [&](std::size_t d) {
        auto stream = RandomStream::for_path(seed.master_seed, kPurposeSmoothing, d);
        double shift = 0.0;
        if (params.alpha != 0.0 && t > 0.0) {
            shift += params.alpha * root_t * stream.gaussian();
        }
        if (stable_scale != 0.0) {
            shift += params.beta * stable_scale * stream.stable(params.gamma);
        }
        shifts[d] = shift;
    });

    CurveWithError out;
    out.values.resize(x_grid.size());
    out.std_errors.resize(x_grid.size());
    parallel_for(0, x_grid.size(), [&](std::size_t j) {
        double sum = 0.0;
        double sum_sq = 0.0;
        for (std::size_t d = 0; d < n_draws; ++d) {
            const double y = f(x_grid[j] + shifts[d]);
            sum += y;
            sum_sq += y * y;
        }
        const double mean = sum / static_cast<double>(n_draws);
        const double var = std::max(0.0, sum_sq / static_cast<double>(n_draws) -
                                             mean * mean);
        out.values[j] = mean;
        out.std_errors[j] = std::sqrt(var / static_cast<double>(n_draws));
    });
    return out;
}

double PdeTable::value(double t, double x) const {
    const double rt = std::clamp(t / grid.dt(), 0.0,
                                 static_cast<double>(grid.time_steps));
    const double rx = std::clamp((x - grid.x_lo) / grid.dx(), 0.0,
                                 static_cast<double>(grid.space_nodes - 1));
    const auto t0 = static_cast<Eigen::Index>(rt);
    const auto x0 = static_cast<Eigen::Index>(rx);
    const auto t1 = std::min<Eigen::Index>(t0 + 1, static_cast<Eigen::Index>(grid.time_steps));
    const auto x1 = std::min<Eigen::Index>(x0 + 1, static_cast<Eigen::Index>(grid.space_nodes - 1));
    const double ft = rt - static_cast<double>(t0);
    const double fx = rx - static_cast<double>(x0);
    return (1.0 - ft) * ((1.0 - fx) * u(t0, x0) + fx * u(t0, x1)) +
           ft * ((1.0 - fx) * u(t1, x0) + fx * u(t1, x1));
}

PdeTable kolmogorov_solve(const std::function<double(double)>& drift,
                          const std::function<double(double)>& vol,
                          const std::function<double(double)>& terminal,
                          const KolmogorovGrid& grid) {
    if (grid.space_nodes < 8 || grid.time_steps < 2) {
        throw std::invalid_argument("Kolmogorov grid too coarse");
    }
    const auto nx = static_cast<Eigen::Index>(grid.space_nodes);
    const auto nt = static_cast<Eigen::Index>(grid.time_steps);
    const double dx = grid.dx();
    const double dt = grid.dt();
    constexpr double theta = 0.5;  // Crank-Nicolson

    PdeTable table;
    table.grid = grid;
    table.u.resize(nt + 1, nx);
    for (Eigen::Index i = 0; i < nx; ++i) {
        table.u(nt, i) = terminal(grid.x(static_cast<std::size_t>(i)));
    }
    const double terminal_sup = table.u.row(nt).cwiseAbs().maxCoeff();

    // L u_i = a_i (u_{i+1} - 2 u_i + u_{i-1}) / dx^2 + b_i (u_{i+1} - u_{i-1}) / (2 dx)
    Eigen::VectorXd lower(nx), diag(nx), upper(nx);
    for (Eigen::Index i = 1; i + 1 < nx; ++i) {
        const double x = grid.x(static_cast<std::size_t>(i));
        const double a = 0.5 * vol(x) * vol(x);
        const double b = drift(x);
        lower(i) = a / (dx * dx) - b / (2.0 * dx);
        diag(i) = -2.0 * a / (dx * dx);
        upper(i) = a / (dx * dx) + b / (2.0 * dx);
    }

    Eigen::VectorXd rhs(nx), cp(nx), dp(nx);
    for (Eigen::Index step = nt; step > 0; --step) {
        const Eigen::Index r = step - 1;
        // Boundaries pinned to the terminal data.
        table.u(r, 0) = table.u(nt, 0);
        table.u(r, nx - 1) = table.u(nt, nx - 1);
        for (Eigen::Index i = 1; i + 1 < nx; ++i) {
            rhs(i) = table.u(step, i) +
                     (1.0 - theta) * dt *
                         (lower(i) * table.u(step, i - 1) +
                          diag(i) * table.u(step, i) +
                          upper(i) * table.u(step, i + 1));
        }
        rhs(1) += theta * dt * lower(1) * table.u(r, 0);
        rhs(nx - 2) += theta * dt * upper(nx - 2) * table.u(r, nx - 1);

        // Thomas solve of (I - theta dt L) u = rhs on the interior.
        const Eigen::Index lo = 1;
        const Eigen::Index hi = nx - 2;
        double denom = 1.0 - theta * dt * diag(lo);
        cp(lo) = -theta * dt * upper(lo) / denom;
        dp(lo) = rhs(lo) / denom;
        for (Eigen::Index i = lo + 1; i <= hi; ++i) {
            const double sub = -theta * dt * lower(i);
            denom = (1.0 - theta * dt * diag(i)) - sub * cp(i - 1);
            cp(i) = -theta * dt * upper(i) / denom;
            dp(i) = (rhs(i) - sub * dp(i - 1)) / denom;
        }
        table.u(r, hi) = dp(hi);
        for (Eigen::Index i = hi - 1; i >= lo; --i) {
            table.u(r, i) = dp(i) - cp(i) * table.u(r, i + 1);
        }
        if (table.u.row(r).cwiseAbs().maxCoeff() > 10.0 * std::max(terminal_sup, 1e-12)) {
            throw std::runtime_error("Kolmogorov march unstable: sup-norm growth");
        }
    }
    return table;
}

IdentityReport feynman_kac_check(const std::function<double(double)>& drift,
                                 const std::function<double(double)>& vol,
                                 const std::function<double(double)>& terminal,
                                 const KolmogorovGrid& grid,
                                 const std::vector<std::pair<double, double>>& probes,
                                 std::size_t n_paths, StreamKey seed) {
    const PdeTable table = kolmogorov_solve(drift, vol, terminal, grid);
    const double mc_dt = grid.horizon / 256.0;

    IdentityReport report;
    report.name = "feynman_kac";
    double worst_ratio = 0.0;
    double worst_gap = 0.0;
    std::size_t probe_id = 0;
    for (const auto& [t0, x0] : probes) {
        const auto steps = static_cast<std::size_t>(
            std::max(1.0, std::round((grid.horizon - t0) / mc_dt)));
        const double dt = (grid.horizon - t0) / static_cast<double>(steps);
        const double root_dt = std::sqrt(dt);
        Eigen::VectorXd terminal_values(static_cast<Eigen::Index>(n_paths));
        parallel_for(0, n_paths, [&](std::size_t m) {
            auto stream = RandomStream::for_path(
                seed.master_seed, kPurposeGaussianIncrements,
                (probe_id << 32) ^ m);
            double x = x0;
            for (std::size_t i = 0; i < steps; ++i) {
                x += drift(x) * dt + vol(x) * root_dt * stream.gaussian();
            }
            terminal_values(static_cast<Eigen::Index>(m)) = terminal(x);
        });
        const Estimate mc = mean_estimate(terminal_values);
        const double pde = table.value(t0, x0);
        const double scheme_slack =
            5.0 * (grid.dx() * grid.dx() + dt);
        const double tol = 4.0 * mc.std_error + scheme_slack;
        const double gap = std::abs(mc.value - pde);
        if (gap / tol > worst_ratio) {
            worst_ratio = gap / tol;
            worst_gap = gap;
        }
        ++probe_id;
    }
    report.estimate = worst_ratio;
    report.target = 0.0;
    report.tolerance = 1.0;
    report.std_error = 0.0;
    report.pass = worst_ratio <= 1.0;
    report.metadata["max_abs_gap"] = worst_gap;
    report.metadata["probes"] = static_cast<double>(probes.size());
    return report;
}

}  // namespace stochlab
