#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "stochlab/report.hpp"
#include "stochlab/rng.hpp"

namespace stochlab {

// Real field sampled on the periodic grid x_j = -L + j * (2L / resolution).
struct SpectralField {
    double box_halfwidth = 1.0;
    std::vector<double> values;

    std::size_t resolution() const { return values.size(); }
    double x(std::size_t j) const {
        return -box_halfwidth +
               static_cast<double>(j) * (2.0 * box_halfwidth) /
                   static_cast<double>(values.size());
    }

    static SpectralField sample(double box_halfwidth, std::size_t resolution,
                                const std::function<double(double)>& f);
};

// Mixed diffusion-stable generator weights. The Fourier symbol is
// (alpha^2 / 2) |xi|^2 + c_gamma beta^gamma |xi|^gamma.
struct GeneratorParams {
    double alpha = 1.0;
    double beta = 0.0;
    double gamma = 1.5;
    double c_gamma = 1.0;
};

// Exact-in-time evolution u(t) = exp(-t * symbol(xi)) u(0) in Fourier space.
SpectralField spectral_evolve(const SpectralField& f0, double t,
                              const GeneratorParams& params);

struct CurveWithError {
    std::vector<double> values;
    std::vector<double> std_errors;
};

// Per grid point x, Monte Carlo estimate of E[f(x + alpha B_t + beta L_t)].
CurveWithError mc_smoothing(const std::function<double(double)>& f, double t,
                            const GeneratorParams& params,
                            const std::vector<double>& x_grid, std::size_t n_draws,
                            StreamKey seed);

struct KolmogorovGrid {
    double x_lo = -1.0;
    double x_hi = 1.0;
    std::size_t space_nodes = 8;   // including both endpoints
    std::size_t time_steps = 2;
    double horizon = 1.0;

    double dx() const {
        return (x_hi - x_lo) / static_cast<double>(space_nodes - 1);
    }
    double dt() const { return horizon / static_cast<double>(time_steps); }
    double x(std::size_t i) const { return x_lo + static_cast<double>(i) * dx(); }
};

// Solution table of the 1-d backward equation d_t u + L u = 0, u(T, .) = f.
struct PdeTable {
    KolmogorovGrid grid;
    Eigen::MatrixXd u;  // (time_steps + 1) x space_nodes, row r is t = r * dt

    // Bilinear interpolation in (t, x).
    double value(double t, double x) const;
};

// Crank-Nicolson backward march with central differences; Dirichlet
// boundaries pinned to the terminal data at the spatial endpoints.
PdeTable kolmogorov_solve(const std::function<double(double)>& drift,
                          const std::function<double(double)>& vol,
                          const std::function<double(double)>& terminal,
                          const KolmogorovGrid& grid);

// Monte Carlo diffusion started at each probe (t, x) against the PDE table.
IdentityReport feynman_kac_check(const std::function<double(double)>& drift,
                                 const std::function<double(double)>& vol,
                                 const std::function<double(double)>& terminal,
                                 const KolmogorovGrid& grid,
                                 const std::vector<std::pair<double, double>>& probes,
                                 std::size_t n_paths, StreamKey seed);

}  // namespace stochlab
