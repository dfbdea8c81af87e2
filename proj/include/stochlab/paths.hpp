#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "stochlab/grid.hpp"
#include "stochlab/rng.hpp"

namespace stochlab {

// Purpose tags for per-path stream derivation. Brownian and diffusion
// simulation share the same tag so that a degenerate diffusion (b = 0,
// sigma = 1) reproduces the Brownian ensemble bit-exactly.
enum StreamPurpose : std::uint64_t {
    kPurposeGaussianIncrements = 1,
    kPurposeStableIncrements = 2,
    kPurposeJumpDecomposition = 3,
    kPurposeFbmNoise = 4,
    kPurposeSmoothing = 5,
    kPurposeScratch = 6,
};

struct JumpRecord {
    double time = 0.0;
    double size = 0.0;
};

// M simulated sample paths of one driving process on a shared grid.
// `values` is M x (N+1) with column 0 the initial value. `increments`
// retains the driving Brownian increments where a Brownian motion underlies
// the construction (Brownian, Volterra, diffusion). `jumps` carries the
// recorded jumps above the truncation threshold for Levy drivers.
struct PathEnsemble {
    TimeGrid grid;
    Eigen::MatrixXd values;
    std::string label;
    Eigen::MatrixXd increments;
    std::vector<std::vector<JumpRecord>> jumps;
    double jump_truncation = 0.0;
    StreamKey seed;

    std::size_t path_count() const { return static_cast<std::size_t>(values.rows()); }
    double value(std::size_t path, std::size_t node) const {
        return values(static_cast<Eigen::Index>(path), static_cast<Eigen::Index>(node));
    }
    bool has_increments() const { return increments.size() > 0; }
    bool has_jumps() const { return !jumps.empty(); }
};

struct VolterraKernel {
    std::function<double(double, double)> eval;  // K(t, s), 0 <= s <= t <= T
    std::string label;
};

struct StableParams {
    double gamma = 1.5;      // stability index in (0, 2)
    double c_gamma = 1.0;    // characteristic exponent scale: exp(-t c |xi|^gamma)
    double truncation = 0.0; // jump-record threshold; 0 picks the budget default
};

// Levy density normalization: nu(dz) = k |z|^{-1-gamma} dz with
// c_gamma = 2 k * integral_0^inf (1 - cos u) u^{-1-gamma} du. This is the
// standard conversion; the characteristic exponent is the paper-level object.
double levy_tail_coefficient(double gamma, double c_gamma);

// nu({|z| > eps}) for the power-law density above.
double levy_tail_mass(double gamma, double k_coeff, double eps);

// Threshold eps such that the expected number of recorded jumps per path
// over [0, T] is at most `budget`.
double stable_truncation_for_budget(double gamma, double k_coeff, double T,
                                    double budget = 1000.0);

PathEnsemble simulate_brownian(const TimeGrid& grid, std::size_t n_paths,
                               StreamKey seed);

// Exact finite-dimensional law via lower-triangular factorization of the
// fBM covariance R_H on the grid nodes.
PathEnsemble simulate_fbm(const TimeGrid& grid, double hurst,
                          std::size_t n_paths, StreamKey seed);

// Left-point kernel discretization X_{t_j} = sum_{i<j} K(t_j, t_i) dW_i.
PathEnsemble simulate_volterra(const TimeGrid& grid, const VolterraKernel& kernel,
                               std::size_t n_paths, StreamKey seed);

// Euler-Maruyama for dX = b(X) dt + sigma(X) dB. Throws if any path leaves
// the finite range.
PathEnsemble simulate_diffusion(const TimeGrid& grid,
                                const std::function<double(double)>& drift,
                                const std::function<double(double)>& vol,
                                double x0, std::size_t n_paths, StreamKey seed);

// Symmetric gamma-stable Levy path: increments sampled exactly (CMS);
// jump records above the threshold drawn from the compound-Poisson
// decomposition of the increment law on an independent per-path stream.
PathEnsemble simulate_stable_levy(const TimeGrid& grid, const StableParams& params,
                                  std::size_t n_paths, StreamKey seed);

// Finite-activity test driver: compound Poisson with the given rate and
// constant jump size. Jump records are exact for this driver.
PathEnsemble simulate_poisson(const TimeGrid& grid, double rate, double jump_size,
                              std::size_t n_paths, StreamKey seed);

// Pathwise alpha * A + beta * B for independent components on the same grid.
// Jump records of the Levy component are carried over with sizes scaled by beta.
PathEnsemble simulate_mixed(double alpha, double beta,
                            const PathEnsemble& component_a,
                            const PathEnsemble& component_b);

// fBM covariance R_H(s, t) = (s^{2H} + t^{2H} - |t-s|^{2H}) / 2.
double fbm_covariance(double hurst, double s, double t);

}  // namespace stochlab
