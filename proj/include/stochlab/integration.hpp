#pragma once

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

#include "stochlab/paths.hpp"
#include "stochlab/stats.hpp"

namespace stochlab {

// Sampled adapted process: values(m, i) is u on [t_i, t_{i+1}) for path m.
// adapted_by_construction asserts that column i was computed only from path
// data up to t_i.
struct AdaptedProcessSample {
    TimeGrid grid;
    Eigen::MatrixXd values;  // M x N
    bool adapted_by_construction = false;
};

// Levy measure of the jump component. PowerLaw is k |z|^{-1-gamma} dz;
// PointMass is a single atom (the finite-activity test driver). Custom uses
// a user-supplied density with quadrature-based integrals.
struct LevyDensity {
    enum class Kind { PowerLaw, PointMass, Custom };
    Kind kind = Kind::PowerLaw;
    double k_coeff = 0.0;
    double gamma = 1.5;
    double rate = 0.0;       // PointMass total mass
    double jump_size = 1.0;  // PointMass atom location
    std::function<double(double)> density;  // Custom: nu-density on |z| > eps

    static LevyDensity power_law(double k_coeff, double gamma);
    static LevyDensity from_stable(const StableParams& params);
    static LevyDensity point_mass(double rate, double jump_size);
};

// Which energy norm ||u||_{H_X} the driver carries.
struct EnergySpec {
    enum class Variant { BrownianLebesgue, MartingaleQV, PoissonMeasure, DirectSum };
    Variant variant = Variant::BrownianLebesgue;
    double truncation = 0.0;  // PoissonMeasure small-jump threshold
    LevyDensity density;
    std::vector<EnergySpec> parts;     // DirectSum components
    std::vector<double> weights;       // DirectSum positive weights

    static EnergySpec brownian();
    static EnergySpec martingale_qv();
    static EnergySpec poisson(LevyDensity density, double truncation);
    static EnergySpec direct_sum(std::vector<EnergySpec> parts,
                                 std::vector<double> weights);
};

// F in L^2(Omega), sampled path-by-path against one ensemble.
struct RandomVariableSample {
    Eigen::VectorXd values;
    std::string provenance;
};

struct JumpIntegrand {
    std::function<double(double, double)> eval;  // v(t, z)
    std::string label;
};

// Left-point Ito sum: per path, sum_i u_{t_i} (X_{t_{i+1}} - X_{t_i}).
RandomVariableSample ito_integral(const AdaptedProcessSample& u,
                                  const PathEnsemble& ensemble);

// Realized quadratic variation per path and node, M x (N+1).
Eigen::MatrixXd quadratic_variation(const PathEnsemble& ensemble);

// Monte Carlo estimate of ||u||^2 under the given spec.
Estimate energy_norm_sq(const AdaptedProcessSample& u, const EnergySpec& spec,
                        const PathEnsemble& ensemble);

// Deterministic ||v||^2 = T * integral_{|z| > eps} v(t,z)^2 nu(dz) dt for a
// jump integrand (time integral by quadrature).
double jump_energy_norm_sq(const JumpIntegrand& v, const EnergySpec& spec,
                           const TimeGrid& grid);

// integral_{|z| > eps} g(z) nu(dz): closed-form transform for the power law,
// exact sum for the point mass, adaptive quadrature otherwise.
double levy_integral(const std::function<double(double)>& g,
                     const LevyDensity& density, double eps);

// Truncated compensated Poisson integral: jump sum minus compensator, both
// restricted to |z| > eps so the truncated isometry is exact.
RandomVariableSample compensated_poisson_integral(const JumpIntegrand& v,
                                                  const PathEnsemble& ensemble,
                                                  const EnergySpec& spec);

// Direct-sum divergence alpha * delta_B(u) + beta * delta(v) for two
// independent components on the same grid.
RandomVariableSample mixed_divergence(const AdaptedProcessSample& u,
                                      const AdaptedProcessSample& v,
                                      double alpha, double beta,
                                      const PathEnsemble& component_a,
                                      const PathEnsemble& component_b);

RandomVariableSample mixed_divergence(const AdaptedProcessSample& u,
                                      const JumpIntegrand& v, double alpha,
                                      double beta,
                                      const PathEnsemble& component_a,
                                      const PathEnsemble& component_b,
                                      const EnergySpec& jump_spec);

// Constant-in-time, constant-across-paths integrand.
AdaptedProcessSample constant_integrand(const TimeGrid& grid,
                                        std::size_t n_paths, double value);

// u_{t_i} = g(X_{t_i}) evaluated at the left endpoint; adapted by construction.
AdaptedProcessSample state_integrand(const PathEnsemble& ensemble,
                                     const std::function<double(double)>& g);

}  // namespace stochlab
