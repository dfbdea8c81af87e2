#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

namespace stochlab {

// Monte Carlo point estimate with its standard error.
struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

Estimate mean_estimate(const Eigen::VectorXd& samples);
Estimate variance_estimate(const Eigen::VectorXd& samples);

double sample_covariance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

double normal_cdf(double x);
double normal_pdf(double x);

// Physicists' Gauss-Hermite rule: integral g(x) e^{-x^2} dx ~ sum w_i g(x_i).
struct GaussHermiteRule {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;

    explicit GaussHermiteRule(int n);

    // E[g(mu + sigma * Z)] with Z standard normal.
    double gaussian_mean(const std::function<double(double)>& g, double mu,
                         double sigma) const;
};

// Adaptive Simpson quadrature with relative tolerance.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol = 1e-8);

// Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_statistic(std::vector<double> a, std::vector<double> b);

// Critical value c(alpha) * sqrt((n+m)/(n*m)) for the two-sample KS test.
double ks_critical_value(double alpha, std::size_t n, std::size_t m);

}  // namespace stochlab
