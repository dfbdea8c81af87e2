#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "stochlab/integration.hpp"
#include "stochlab/report.hpp"

namespace stochlab {

// Predictable basis: tensor product of uniform time-bin indicators with
// state monomials {1, x, ..., x^p} evaluated at the left endpoint X_{t_i}.
// Element k = bin * (degree + 1) + power.
class IntegrandBasis {
public:
    IntegrandBasis(const TimeGrid& grid, int time_bins, int degree);

    int size() const { return time_bins_ * (degree_ + 1); }
    int time_bins() const { return time_bins_; }
    int degree() const { return degree_; }
    const TimeGrid& grid() const { return grid_; }

    int bin_of(std::size_t step) const {
        return static_cast<int>(step * static_cast<std::size_t>(time_bins_) /
                                grid_.steps);
    }
    int element_index(int bin, int power) const { return bin * (degree_ + 1) + power; }

    // Fills powers[q] = x^q for q = 0..degree.
    void state_powers(double x, double* powers) const {
        powers[0] = 1.0;
        for (int q = 1; q <= degree_; ++q) powers[q] = powers[q - 1] * x;
    }

    // The basis element as an adapted process sample on an ensemble.
    AdaptedProcessSample element_sample(int k, const PathEnsemble& ensemble) const;

    // Linear combination sum_k coeffs[k] e_k on an ensemble.
    AdaptedProcessSample combination_sample(const Eigen::VectorXd& coeffs,
                                            const PathEnsemble& ensemble) const;

private:
    TimeGrid grid_;
    int time_bins_;
    int degree_;
};

// Gram data shared by every functional solved on one ensemble/basis pair.
// divergence_gram realizes E[delta(e_k) delta(e_l)]; energy_gram realizes
// the energy inner product; the two agree up to Monte Carlo noise by the
// isometry, and their gap is recorded.
struct GramSystem {
    Eigen::MatrixXd divergence_gram;
    Eigen::MatrixXd energy_gram;
    Eigen::MatrixXd divergences;  // M x K cache of delta(e_k) per path
    std::vector<int> dropped;     // indices of empty (zero-column) elements
    double isometry_gap = 0.0;
};

GramSystem build_gram(const IntegrandBasis& basis, const PathEnsemble& ensemble,
                      const EnergySpec& spec);

// Basis-subspace estimate of Pi_X D_X F: coefficients of the ridge-regularized
// solve (G + ridge I) c = b with b_k = E[(F - E F) delta(e_k)].
struct RieszRepresenter {
    Eigen::VectorXd coefficients;
    double ridge = 0.0;
    double gram_condition = 0.0;
    double residual_norm = 0.0;  // ||(G + ridge I) c - b||
    double mean_f = 0.0;
};

// ridge < 0 picks the default 1e-8 * trace(G) / K; the ridge is doubled until
// the condition estimate drops below 1e12.
RieszRepresenter covariant_derivative(const RandomVariableSample& f,
                                      const IntegrandBasis& basis,
                                      const GramSystem& gram,
                                      double ridge = -1.0);

// Convenience overload that builds the Gram system internally.
RieszRepresenter covariant_derivative(const RandomVariableSample& f,
                                      const IntegrandBasis& basis,
                                      const PathEnsemble& ensemble,
                                      const EnergySpec& spec,
                                      double ridge = -1.0);

// phi-hat evaluated on the ensemble; predictable by construction.
AdaptedProcessSample evaluate_representer(const RieszRepresenter& rep,
                                          const IntegrandBasis& basis,
                                          const PathEnsemble& ensemble);

// Per-time least-squares regression of a possibly non-adapted sample onto
// the state monomials; realizes E[u_t | F_{t-}] on the basis subspace.
AdaptedProcessSample predictable_projection(const Eigen::MatrixXd& u_raw,
                                            const IntegrandBasis& basis,
                                            const PathEnsemble& ensemble);

// F-hat = E[F] + delta(phi-hat); the report carries the relative residual
// E[(F - F-hat)^2] / Var(F).
std::pair<RandomVariableSample, IdentityReport> clark_ocone_reconstruct(
    const RandomVariableSample& f, const RieszRepresenter& rep,
    const IntegrandBasis& basis, const PathEnsemble& ensemble,
    double tolerance = 0.01);

// Var(F) against ||phi-hat||^2 in the energy norm.
IdentityReport variance_identity_check(const RandomVariableSample& f,
                                       const RieszRepresenter& rep,
                                       const IntegrandBasis& basis,
                                       const EnergySpec& spec,
                                       const PathEnsemble& ensemble);

// E[F delta(u)] vs <phi-hat, u> for each test integrand, paired-sample SE.
std::vector<IdentityReport> adjointness_check(
    const RandomVariableSample& f, const RieszRepresenter& rep,
    const IntegrandBasis& basis,
    const std::vector<AdaptedProcessSample>& test_integrands,
    const EnergySpec& spec, const PathEnsemble& ensemble);

// For F = f(B_T) on a Brownian ensemble, compares phi-hat with the
// Gaussian-conditioning closed form g(t, x) = E[f'(x + sqrt(T-t) Z)]
// (Gauss-Hermite quadrature). Reports relative L2(dt x P) discrepancy on a
// path subsample.
IdentityReport malliavin_crosscheck(const std::function<double(double)>& f_prime,
                                    const PathEnsemble& ensemble,
                                    const RieszRepresenter& rep,
                                    const IntegrandBasis& basis,
                                    double tolerance,
                                    std::size_t max_paths = 20000,
                                    int quadrature_order = 32);

// Largest singular value of delta restricted to the basis subspace, i.e. the
// generalized eigenvalue of the divergence Gram against the energy Gram.
double divergence_operator_norm(const GramSystem& gram);

nlohmann::json representer_to_json(const RieszRepresenter& rep,
                                   const IntegrandBasis& basis);

}  // namespace stochlab
