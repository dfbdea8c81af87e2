#include "stochlab/adjoint.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

#include "stochlab/parallel.hpp"

namespace stochlab {

namespace {

constexpr double kConditionLimit = 1e12;

// Energy weight of step i: dt for the Lebesgue norm, realized (dX_i)^2 for
// the quadratic-variation norm.
double energy_weight(const EnergySpec& spec, const PathEnsemble& ensemble,
                     Eigen::Index path, Eigen::Index step) {
    switch (spec.variant) {
        case EnergySpec::Variant::BrownianLebesgue:
            return ensemble.grid.dt();
        case EnergySpec::Variant::MartingaleQV: {
            const double dx = ensemble.values(path, step + 1) -
                              ensemble.values(path, step);
            return dx * dx;
        }
        default:
            throw std::invalid_argument(
                "basis machinery supports Lebesgue and QV energy specs");
    }
}

}  // namespace

IntegrandBasis::IntegrandBasis(const TimeGrid& grid, int time_bins, int degree)
    : grid_(grid), time_bins_(time_bins), degree_(degree) {
    if (time_bins < 1 || degree < 0) {
        throw std::invalid_argument("basis needs time_bins >= 1 and degree >= 0");
    }
}

AdaptedProcessSample IntegrandBasis::element_sample(
    int k, const PathEnsemble& ensemble) const {
    Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(size());
    coeffs(k) = 1.0;
    return combination_sample(coeffs, ensemble);
}

AdaptedProcessSample IntegrandBasis::combination_sample(
    const Eigen::VectorXd& coeffs, const PathEnsemble& ensemble) const {
    if (coeffs.size() != size()) {
        throw std::invalid_argument("coefficient count does not match basis");
    }
    AdaptedProcessSample out;
    out.grid = grid_;
    const auto m = ensemble.values.rows();
    const auto n = static_cast<Eigen::Index>(grid_.steps);
    out.values.resize(m, n);
    std::vector<double> powers(static_cast<std::size_t>(degree_) + 1);
    for (Eigen::Index i = 0; i < n; ++i) {
        const int bin = bin_of(static_cast<std::size_t>(i));
        for (Eigen::Index p = 0; p < m; ++p) {
            state_powers(ensemble.values(p, i), powers.data());
            double acc = 0.0;
            for (int q = 0; q <= degree_; ++q) {
                acc += coeffs(element_index(bin, q)) * powers[static_cast<std::size_t>(q)];
            }
            out.values(p, i) = acc;
        }
    }
    out.adapted_by_construction = true;
    return out;
}

GramSystem build_gram(const IntegrandBasis& basis, const PathEnsemble& ensemble,
                      const EnergySpec& spec) {
    const auto m = ensemble.values.rows();
    const auto n = static_cast<Eigen::Index>(basis.grid().steps);
    const int k = basis.size();
    const int block = basis.degree() + 1;

    GramSystem gram;
    gram.divergences = Eigen::MatrixXd::Zero(m, k);
    parallel_for(0, static_cast<std::size_t>(m), [&](std::size_t pm) {
        const auto p = static_cast<Eigen::Index>(pm);
        std::vector<double> powers(static_cast<std::size_t>(block));
        for (Eigen::Index i = 0; i < n; ++i) {
            const double x = ensemble.values(p, i);
            if (!std::isfinite(x)) {
                throw std::invalid_argument("non-finite path value in Gram assembly");
            }
            const double dx = ensemble.values(p, i + 1) - x;
            const int base = basis.element_index(basis.bin_of(static_cast<std::size_t>(i)), 0);
            basis.state_powers(x, powers.data());
            for (int q = 0; q < block; ++q) {
                gram.divergences(p, base + q) += powers[static_cast<std::size_t>(q)] * dx;
            }
        }
    });
    gram.divergence_gram =
        gram.divergences.transpose() * gram.divergences / static_cast<double>(m);

    // The energy Gram is exactly block diagonal over time bins; assemble one
    // bin block at a time so parallel writes stay disjoint.
    gram.energy_gram = Eigen::MatrixXd::Zero(k, k);
    parallel_for(0, static_cast<std::size_t>(basis.time_bins()), [&](std::size_t bm) {
        const int bin = static_cast<int>(bm);
        Eigen::MatrixXd local = Eigen::MatrixXd::Zero(block, block);
        std::vector<double> powers(static_cast<std::size_t>(block));
        for (Eigen::Index p = 0; p < m; ++p) {
            for (Eigen::Index i = 0; i < n; ++i) {
                if (basis.bin_of(static_cast<std::size_t>(i)) != bin) continue;
                const double w = energy_weight(spec, ensemble, p, i);
                basis.state_powers(ensemble.values(p, i), powers.data());
                for (int a = 0; a < block; ++a) {
                    for (int b = 0; b <= a; ++b) {
                        local(a, b) += powers[static_cast<std::size_t>(a)] *
                                       powers[static_cast<std::size_t>(b)] * w;
                    }
                }
            }
        }
        local /= static_cast<double>(m);
        const int base = basis.element_index(bin, 0);
        for (int a = 0; a < block; ++a) {
            for (int b = 0; b <= a; ++b) {
                gram.energy_gram(base + a, base + b) = local(a, b);
                gram.energy_gram(base + b, base + a) = local(a, b);
            }
        }
    });

    for (int j = 0; j < k; ++j) {
        if (gram.divergence_gram(j, j) == 0.0 && gram.energy_gram(j, j) == 0.0) {
            gram.dropped.push_back(j);
        }
    }
    gram.isometry_gap =
        (gram.divergence_gram - gram.energy_gram).cwiseAbs().maxCoeff();
    return gram;
}

RieszRepresenter covariant_derivative(const RandomVariableSample& f,
                                      const IntegrandBasis& basis,
                                      const GramSystem& gram, double ridge) {
    const auto m = gram.divergences.rows();
    if (f.values.size() != m) {
        throw std::invalid_argument("functional sample not aligned with ensemble");
    }
    const int k = basis.size();

    RieszRepresenter rep;
    rep.mean_f = f.values.mean();
    const Eigen::VectorXd centered = f.values.array() - rep.mean_f;
    const Eigen::VectorXd rhs_full =
        gram.divergences.transpose() * centered / static_cast<double>(m);

    std::vector<int> active;
    active.reserve(static_cast<std::size_t>(k));
    std::vector<char> is_dropped(static_cast<std::size_t>(k), 0);
    for (int j : gram.dropped) is_dropped[static_cast<std::size_t>(j)] = 1;
    for (int j = 0; j < k; ++j) {
        if (!is_dropped[static_cast<std::size_t>(j)]) active.push_back(j);
    }
    const int ka = static_cast<int>(active.size());
    if (ka == 0) throw std::runtime_error("all basis elements degenerate");

    Eigen::MatrixXd g(ka, ka);
    Eigen::VectorXd b(ka);
    for (int a = 0; a < ka; ++a) {
        b(a) = rhs_full(active[static_cast<std::size_t>(a)]);
        for (int c = 0; c < ka; ++c) {
            g(a, c) = gram.divergence_gram(active[static_cast<std::size_t>(a)],
                                           active[static_cast<std::size_t>(c)]);
        }
    }

    double r = ridge >= 0.0 ? ridge : 1e-8 * g.trace() / static_cast<double>(ka);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g);
    const double lambda_max = eig.eigenvalues().maxCoeff();
    const double lambda_min = std::max(0.0, eig.eigenvalues().minCoeff());
    if (r <= 0.0) r = 1e-300;
    int escalations = 0;
    while ((lambda_max + r) / (lambda_min + r) > kConditionLimit && escalations < 256) {
        r *= 2.0;
        ++escalations;
    }
    rep.ridge = r;
    rep.gram_condition = (lambda_max + r) / (lambda_min + r);
    if (rep.gram_condition > kConditionLimit) {
        throw std::runtime_error(
            "Gram matrix singular beyond ridge rescue, condition " +
            std::to_string(rep.gram_condition));
    }

    Eigen::MatrixXd regularized = g;
    regularized.diagonal().array() += r;
    const Eigen::VectorXd solution = Eigen::LDLT<Eigen::MatrixXd>(regularized).solve(b);
    rep.residual_norm = (regularized * solution - b).norm();

    rep.coefficients = Eigen::VectorXd::Zero(k);
    for (int a = 0; a < ka; ++a) {
        rep.coefficients(active[static_cast<std::size_t>(a)]) = solution(a);
    }
    if (!rep.coefficients.allFinite()) {
        throw std::runtime_error("non-finite Riesz coefficients");
    }
    return rep;
}

RieszRepresenter covariant_derivative(const RandomVariableSample& f,
                                      const IntegrandBasis& basis,
                                      const PathEnsemble& ensemble,
                                      const EnergySpec& spec, double ridge) {
    return covariant_derivative(f, basis, build_gram(basis, ensemble, spec), ridge);
}

AdaptedProcessSample evaluate_representer(const RieszRepresenter& rep,
                                          const IntegrandBasis& basis,
                                          const PathEnsemble& ensemble) {
    return basis.combination_sample(rep.coefficients, ensemble);
}

AdaptedProcessSample predictable_projection(const Eigen::MatrixXd& u_raw,
                                            const IntegrandBasis& basis,
                                            const PathEnsemble& ensemble) {
    const auto m = ensemble.values.rows();
    const auto n = static_cast<Eigen::Index>(basis.grid().steps);
    if (u_raw.rows() != m || u_raw.cols() != n) {
        throw std::invalid_argument("raw process shape does not match ensemble");
    }
    const int block = basis.degree() + 1;
    AdaptedProcessSample out;
    out.grid = basis.grid();
    out.values.resize(m, n);
    parallel_for(0, static_cast<std::size_t>(n), [&](std::size_t im) {
        const auto i = static_cast<Eigen::Index>(im);
        Eigen::MatrixXd normal = Eigen::MatrixXd::Zero(block, block);
        Eigen::VectorXd rhs = Eigen::VectorXd::Zero(block);
        std::vector<double> powers(static_cast<std::size_t>(block));
        for (Eigen::Index p = 0; p < m; ++p) {
            basis.state_powers(ensemble.values(p, i), powers.data());
            for (int a = 0; a < block; ++a) {
                rhs(a) += powers[static_cast<std::size_t>(a)] * u_raw(p, i);
                for (int b = 0; b <= a; ++b) {
                    normal(a, b) += powers[static_cast<std::size_t>(a)] *
                                    powers[static_cast<std::size_t>(b)];
                }
            }
        }
        normal = normal.selfadjointView<Eigen::Lower>();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normal);
        const double lambda_max = eig.eigenvalues().maxCoeff();
        const double lambda_min = eig.eigenvalues().minCoeff();
        if (!(lambda_min > 1e-12 * lambda_max)) {
            // Degenerate state column (e.g. t = 0): fall back to the bin mean.
            out.values.col(i).setConstant(u_raw.col(i).mean());
            return;
        }
        Eigen::MatrixXd regularized = normal;
        regularized.diagonal().array() += 1e-10 * normal.trace() / block;
        const Eigen::VectorXd coeff =
            Eigen::LDLT<Eigen::MatrixXd>(regularized).solve(rhs);
        for (Eigen::Index p = 0; p < m; ++p) {
            basis.state_powers(ensemble.values(p, i), powers.data());
            double acc = 0.0;
            for (int a = 0; a < block; ++a) {
                acc += coeff(a) * powers[static_cast<std::size_t>(a)];
            }
            out.values(p, i) = acc;
        }
    });
    out.adapted_by_construction = true;
    return out;
}

std::pair<RandomVariableSample, IdentityReport> clark_ocone_reconstruct(
    const RandomVariableSample& f, const RieszRepresenter& rep,
    const IntegrandBasis& basis, const PathEnsemble& ensemble,
    double tolerance) {
    const AdaptedProcessSample integrand = evaluate_representer(rep, basis, ensemble);
    const RandomVariableSample divergence = ito_integral(integrand, ensemble);

    RandomVariableSample reconstructed;
    reconstructed.provenance = "clark_ocone(" + f.provenance + ")";
    reconstructed.values = divergence.values.array() + rep.mean_f;

    const Eigen::VectorXd gap = f.values - reconstructed.values;
    const double residual = gap.array().square().mean();
    const double variance = variance_estimate(f.values).value;

    IdentityReport report;
    report.name = "clark_ocone_residual(" + f.provenance + ")";
    report.metadata["abs_residual"] = residual;
    report.metadata["variance"] = variance;
    if (variance < 1e-24) {
        // Exact-constant case: residual judged absolutely.
        report.estimate = residual;
        report.tolerance = 1e-12;
    } else {
        report.estimate = residual / variance;
        report.tolerance = tolerance;
    }
    report.target = 0.0;
    report.std_error = 0.0;
    report.pass = report.estimate <= report.tolerance;
    return {reconstructed, report};
}

IdentityReport variance_identity_check(const RandomVariableSample& f,
                                       const RieszRepresenter& rep,
                                       const IntegrandBasis& basis,
                                       const EnergySpec& spec,
                                       const PathEnsemble& ensemble) {
    const AdaptedProcessSample integrand = evaluate_representer(rep, basis, ensemble);
    const Estimate energy = energy_norm_sq(integrand, spec, ensemble);
    const Estimate variance = variance_estimate(f.values);
    const auto [reconstructed, resid_report] =
        clark_ocone_reconstruct(f, rep, basis, ensemble);
    const double residual = resid_report.metadata.at("abs_residual");
    // Var(F) and the energy norm differ by the reconstruction residual plus
    // its cross term; anything beyond that is sampling noise.
    const double slack = residual + 2.0 * std::sqrt(residual * std::max(variance.value, 0.0));

    IdentityReport report = IdentityReport::make(
        "variance_identity(" + f.provenance + ")", energy.value, variance.value,
        energy.std_error + variance.std_error,
        4.0 * (energy.std_error + variance.std_error) + slack);
    report.metadata["reconstruction_residual"] = residual;
    return report;
}

std::vector<IdentityReport> adjointness_check(
    const RandomVariableSample& f, const RieszRepresenter& rep,
    const IntegrandBasis& basis,
    const std::vector<AdaptedProcessSample>& test_integrands,
    const EnergySpec& spec, const PathEnsemble& ensemble) {
    const AdaptedProcessSample phi = evaluate_representer(rep, basis, ensemble);
    const auto m = ensemble.values.rows();
    std::vector<IdentityReport> reports;
    reports.reserve(test_integrands.size());
    int index = 0;
    for (const AdaptedProcessSample& u : test_integrands) {
        const RandomVariableSample du = ito_integral(u, ensemble);
        Eigen::VectorXd lhs(m);
        Eigen::VectorXd rhs(m);
        for (Eigen::Index p = 0; p < m; ++p) {
            lhs(p) = f.values(p) * du.values(p);
            double inner = 0.0;
            for (Eigen::Index i = 0; i < u.values.cols(); ++i) {
                inner += phi.values(p, i) * u.values(p, i) *
                         energy_weight(spec, ensemble, p, i);
            }
            rhs(p) = inner;
        }
        const Estimate paired = mean_estimate(lhs - rhs);
        IdentityReport report = IdentityReport::make(
            "adjointness(" + f.provenance + ", u" + std::to_string(index) + ")",
            mean_estimate(lhs).value, mean_estimate(rhs).value,
            paired.std_error, 4.0 * paired.std_error);
        reports.push_back(std::move(report));
        ++index;
    }
    return reports;
}

IdentityReport malliavin_crosscheck(const std::function<double(double)>& f_prime,
                                    const PathEnsemble& ensemble,
                                    const RieszRepresenter& rep,
                                    const IntegrandBasis& basis,
                                    double tolerance, std::size_t max_paths,
                                    int quadrature_order) {
    const AdaptedProcessSample phi = evaluate_representer(rep, basis, ensemble);
    const GaussHermiteRule rule(quadrature_order);
    const auto n = static_cast<Eigen::Index>(ensemble.grid.steps);
    const double dt = ensemble.grid.dt();
    const double horizon = ensemble.grid.horizon;

    const std::size_t total = ensemble.path_count();
    const std::size_t stride = std::max<std::size_t>(1, total / max_paths);
    std::vector<std::size_t> select;
    for (std::size_t p = 0; p < total; p += stride) select.push_back(p);

    std::vector<double> num(select.size(), 0.0);
    std::vector<double> den(select.size(), 0.0);
    parallel_for(0, select.size(), [&](std::size_t s) {
        const auto p = static_cast<Eigen::Index>(select[s]);
        double local_num = 0.0;
        double local_den = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double t = ensemble.grid.node(static_cast<std::size_t>(i));
            const double sigma = std::sqrt(horizon - t);
            const double oracle =
                rule.gaussian_mean(f_prime, ensemble.values(p, i), sigma);
            if (!std::isfinite(oracle)) {
                throw std::runtime_error("conditioning quadrature did not converge");
            }
            const double gap = phi.values(p, i) - oracle;
            local_num += gap * gap * dt;
            local_den += oracle * oracle * dt;
        }
        num[s] = local_num;
        den[s] = local_den;
    });
    double total_num = 0.0;
    double total_den = 0.0;
    for (std::size_t s = 0; s < select.size(); ++s) {
        total_num += num[s];
        total_den += den[s];
    }
    const double rel = std::sqrt(total_num / std::max(total_den, 1e-300));

    IdentityReport report;
    report.name = "malliavin_crosscheck";
    report.estimate = rel;
    report.target = 0.0;
    report.std_error = 0.0;
    report.tolerance = tolerance;
    report.pass = rel <= tolerance;
    report.metadata["paths_used"] = static_cast<double>(select.size());
    return report;
}

double divergence_operator_norm(const GramSystem& gram) {
    const int k = static_cast<int>(gram.divergence_gram.rows());
    std::vector<int> active;
    std::vector<char> is_dropped(static_cast<std::size_t>(k), 0);
    for (int j : gram.dropped) is_dropped[static_cast<std::size_t>(j)] = 1;
    for (int j = 0; j < k; ++j) {
        if (!is_dropped[static_cast<std::size_t>(j)]) active.push_back(j);
    }
    const int ka = static_cast<int>(active.size());
    Eigen::MatrixXd g(ka, ka);
    Eigen::MatrixXd e(ka, ka);
    for (int a = 0; a < ka; ++a) {
        for (int b = 0; b < ka; ++b) {
            g(a, b) = gram.divergence_gram(active[static_cast<std::size_t>(a)],
                                           active[static_cast<std::size_t>(b)]);
            e(a, b) = gram.energy_gram(active[static_cast<std::size_t>(a)],
                                       active[static_cast<std::size_t>(b)]);
        }
    }
    e.diagonal().array() += 1e-10 * e.trace() / static_cast<double>(ka);
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, e);
    return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

nlohmann::json representer_to_json(const RieszRepresenter& rep,
                                   const IntegrandBasis& basis) {
    nlohmann::json j;
    j["basis"] = {{"time_bins", basis.time_bins()},
                  {"degree", basis.degree()},
                  {"horizon", basis.grid().horizon},
                  {"steps", basis.grid().steps}};
    j["coefficients"] = std::vector<double>(
        rep.coefficients.data(), rep.coefficients.data() + rep.coefficients.size());
    j["mean"] = rep.mean_f;
    j["ridge"] = rep.ridge;
    j["gram_condition"] = rep.gram_condition;
    j["residual_norm"] = rep.residual_norm;
    return j;
}

}  // namespace stochlab
