#include "stochlab/integration.hpp"

#include <cmath>
#include <stdexcept>

#include "stochlab/parallel.hpp"

namespace stochlab {

LevyDensity LevyDensity::power_law(double k_coeff, double gamma) {
    LevyDensity d;
    d.kind = Kind::PowerLaw;
    d.k_coeff = k_coeff;
    d.gamma = gamma;
    return d;
}

LevyDensity LevyDensity::from_stable(const StableParams& params) {
    return power_law(levy_tail_coefficient(params.gamma, params.c_gamma),
                     params.gamma);
}

LevyDensity LevyDensity::point_mass(double rate, double jump_size) {
    LevyDensity d;
    d.kind = Kind::PointMass;
    d.rate = rate;
    d.jump_size = jump_size;
    return d;
}

EnergySpec EnergySpec::brownian() {
    return EnergySpec{};
}

EnergySpec EnergySpec::martingale_qv() {
    EnergySpec s;
    s.variant = Variant::MartingaleQV;
    return s;
}

EnergySpec EnergySpec::poisson(LevyDensity density, double truncation) {
    EnergySpec s;
    s.variant = Variant::PoissonMeasure;
    s.density = std::move(density);
    s.truncation = truncation;
    return s;
}

EnergySpec EnergySpec::direct_sum(std::vector<EnergySpec> parts,
                                  std::vector<double> weights) {
    if (parts.size() != weights.size() || parts.empty()) {
        throw std::invalid_argument("direct sum needs matched parts and weights");
    }
    for (double w : weights) {
        if (!(w > 0.0)) throw std::invalid_argument("direct-sum weights must be positive");
    }
    EnergySpec s;
    s.variant = Variant::DirectSum;
    s.parts = std::move(parts);
    s.weights = std::move(weights);
    return s;
}

namespace {

void require_compatible(const AdaptedProcessSample& u, const PathEnsemble& ensemble) {
    if (!(u.grid == ensemble.grid)) {
        throw std::invalid_argument("integrand and ensemble grids differ");
    }
    if (u.values.rows() != ensemble.values.rows() ||
        static_cast<std::size_t>(u.values.cols()) != u.grid.steps) {
        throw std::invalid_argument("integrand shape does not match ensemble");
    }
}

}  // namespace

RandomVariableSample ito_integral(const AdaptedProcessSample& u,
                                  const PathEnsemble& ensemble) {
    require_compatible(u, ensemble);
    if (!u.adapted_by_construction) {
        throw std::invalid_argument("ito_integral requires an adapted integrand");
    }
    const auto m = u.values.rows();
    const auto n = u.values.cols();
    RandomVariableSample out;
    out.provenance = "ito(" + ensemble.label + ")";
    out.values.resize(m);
    // Left-to-right summation per path fixes floating-point associativity.
    for (Eigen::Index p = 0; p < m; ++p) {
        double acc = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            acc += u.values(p, i) * (ensemble.values(p, i + 1) - ensemble.values(p, i));
        }
        out.values(p) = acc;
    }
    return out;
}

Eigen::MatrixXd quadratic_variation(const PathEnsemble& ensemble) {
    const auto m = ensemble.values.rows();
    const auto n = ensemble.values.cols() - 1;
    Eigen::MatrixXd qv(m, n + 1);
    qv.col(0).setZero();
    for (Eigen::Index i = 0; i < n; ++i) {
        qv.col(i + 1) = qv.col(i) +
                        (ensemble.values.col(i + 1) - ensemble.values.col(i))
                            .array().square().matrix();
    }
    return qv;
}

Estimate energy_norm_sq(const AdaptedProcessSample& u, const EnergySpec& spec,
                        const PathEnsemble& ensemble) {
    require_compatible(u, ensemble);
    const auto m = u.values.rows();
    Eigen::VectorXd per_path(m);
    switch (spec.variant) {
        case EnergySpec::Variant::BrownianLebesgue: {
            const double dt = u.grid.dt();
            per_path = u.values.array().square().rowwise().sum() * dt;
            break;
        }
        case EnergySpec::Variant::MartingaleQV: {
            for (Eigen::Index p = 0; p < m; ++p) {
                double acc = 0.0;
                for (Eigen::Index i = 0; i < u.values.cols(); ++i) {
                    const double dx = ensemble.values(p, i + 1) - ensemble.values(p, i);
                    acc += u.values(p, i) * u.values(p, i) * dx * dx;
                }
                per_path(p) = acc;
            }
            break;
        }
        default:
            throw std::invalid_argument(
                "energy_norm_sq on a process sample needs a Lebesgue or QV spec");
    }
    return mean_estimate(per_path);
}

double levy_integral(const std::function<double(double)>& g,
                     const LevyDensity& density, double eps) {
    switch (density.kind) {
        case LevyDensity::Kind::PointMass:
            return std::abs(density.jump_size) > eps
                       ? density.rate * g(density.jump_size)
                       : 0.0;
        case LevyDensity::Kind::PowerLaw: {
            if (!(eps > 0.0)) {
                throw std::invalid_argument(
                    "power-law Levy integrals need a positive truncation");
            }
            // Substituting w = (eps/z)^gamma maps k z^{-1-gamma} dz on (eps, inf)
            // to (k/gamma) eps^{-gamma} dw on (0, 1), one branch per sign.
            const double mass = density.k_coeff *
                                std::pow(eps, -density.gamma) / density.gamma;
            const double inv_gamma = 1.0 / density.gamma;
            const auto transformed = [&](double sign) {
                return adaptive_simpson(
                    [&](double w) {
                        const double z = sign * eps * std::pow(w, -inv_gamma);
                        return g(z);
                    },
                    1e-12, 1.0, 1e-8);
            };
            return mass * (transformed(1.0) + transformed(-1.0));
        }
        case LevyDensity::Kind::Custom: {
            if (!density.density) {
                throw std::invalid_argument("custom Levy density missing");
            }
            // Tails handled by the reciprocal substitution z = eps / s.
            const auto one_side = [&](double sign) {
                return adaptive_simpson(
                    [&](double s) {
                        const double z = sign * eps / s;
                        return g(z) * density.density(z) * eps / (s * s);
                    },
                    1e-10, 1.0, 1e-8);
            };
            return one_side(1.0) + one_side(-1.0);
        }
    }
    throw std::logic_error("unreachable");
}

double jump_energy_norm_sq(const JumpIntegrand& v, const EnergySpec& spec,
                           const TimeGrid& grid) {
    if (spec.variant != EnergySpec::Variant::PoissonMeasure) {
        throw std::invalid_argument("jump energy norm needs a Poisson spec");
    }
    const auto time_slice = [&](double t) {
        return levy_integral([&](double z) {
            const double val = v.eval(t, z);
            return val * val;
        }, spec.density, spec.truncation);
    };
    return adaptive_simpson(time_slice, 0.0, grid.horizon, 1e-8);
}

RandomVariableSample compensated_poisson_integral(const JumpIntegrand& v,
                                                  const PathEnsemble& ensemble,
                                                  const EnergySpec& spec) {
    if (spec.variant != EnergySpec::Variant::PoissonMeasure) {
        throw std::invalid_argument("compensated integral needs a Poisson spec");
    }
    if (!ensemble.has_jumps()) {
        throw std::invalid_argument("ensemble carries no jump records");
    }
    const double eps = spec.truncation;
    // Deterministic compensator shared by every path.
    const auto time_slice = [&](double t) {
        return levy_integral([&](double z) { return v.eval(t, z); },
                             spec.density, eps);
    };
    const double compensator =
        adaptive_simpson(time_slice, 0.0, ensemble.grid.horizon, 1e-8);
    if (!std::isfinite(compensator)) {
        throw std::runtime_error("compensator quadrature did not converge");
    }

    const std::size_t m = ensemble.path_count();
    RandomVariableSample out;
    out.provenance = "compensated_poisson(" + ensemble.label + ")";
    out.values.resize(static_cast<Eigen::Index>(m));
    for (std::size_t p = 0; p < m; ++p) {
        double acc = 0.0;
        for (const JumpRecord& rec : ensemble.jumps[p]) {
            if (std::abs(rec.size) > eps) acc += v.eval(rec.time, rec.size);
        }
        out.values(static_cast<Eigen::Index>(p)) = acc - compensator;
    }
    return out;
}

RandomVariableSample mixed_divergence(const AdaptedProcessSample& u,
                                      const AdaptedProcessSample& v,
                                      double alpha, double beta,
                                      const PathEnsemble& component_a,
                                      const PathEnsemble& component_b) {
    const RandomVariableSample da = ito_integral(u, component_a);
    const RandomVariableSample db = ito_integral(v, component_b);
    RandomVariableSample out;
    out.provenance = "mixed(" + da.provenance + ", " + db.provenance + ")";
    out.values = alpha * da.values + beta * db.values;
    return out;
}

RandomVariableSample mixed_divergence(const AdaptedProcessSample& u,
                                      const JumpIntegrand& v, double alpha,
                                      double beta,
                                      const PathEnsemble& component_a,
                                      const PathEnsemble& component_b,
                                      const EnergySpec& jump_spec) {
    if (!(component_a.grid == component_b.grid) ||
        component_a.path_count() != component_b.path_count()) {
        throw std::invalid_argument("mixed components must share grid and path count");
    }
    const RandomVariableSample da = ito_integral(u, component_a);
    const RandomVariableSample db =
        compensated_poisson_integral(v, component_b, jump_spec);
    RandomVariableSample out;
    out.provenance = "mixed(" + da.provenance + ", " + db.provenance + ")";
    out.values = alpha * da.values + beta * db.values;
    return out;
}

AdaptedProcessSample constant_integrand(const TimeGrid& grid,
                                        std::size_t n_paths, double value) {
    AdaptedProcessSample u;
    u.grid = grid;
    u.values = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n_paths),
                                         static_cast<Eigen::Index>(grid.steps), value);
    u.adapted_by_construction = true;
    return u;
}

AdaptedProcessSample state_integrand(const PathEnsemble& ensemble,
                                     const std::function<double(double)>& g) {
    AdaptedProcessSample u;
    u.grid = ensemble.grid;
    const auto m = ensemble.values.rows();
    const auto n = static_cast<Eigen::Index>(ensemble.grid.steps);
    u.values.resize(m, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        u.values.col(i) = ensemble.values.col(i).unaryExpr(g);
    }
    u.adapted_by_construction = true;
    return u;
}

}  // namespace stochlab
