#include "stochlab/stats.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace stochlab {

Estimate mean_estimate(const Eigen::VectorXd& samples) {
    const auto n = samples.size();
    if (n == 0) throw std::invalid_argument("empty sample");
    const double mean = samples.mean();
    if (n == 1) return {mean, 0.0};
    const double var = (samples.array() - mean).square().sum() /
                       static_cast<double>(n - 1);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

Estimate variance_estimate(const Eigen::VectorXd& samples) {
    const auto n = samples.size();
    if (n < 2) throw std::invalid_argument("variance needs at least two samples");
    const double mean = samples.mean();
    const Eigen::ArrayXd centered = samples.array() - mean;
    const double m2 = centered.square().mean();
    const double m4 = centered.pow(4).mean();
    const double var = m2 * static_cast<double>(n) / static_cast<double>(n - 1);
    // SE of the sample variance from the fourth central moment.
    const double se = std::sqrt(std::max(0.0, m4 - m2 * m2) /
                                static_cast<double>(n));
    return {var, se};
}

double sample_covariance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw std::invalid_argument("covariance needs matched samples");
    }
    const double ma = a.mean();
    const double mb = b.mean();
    return ((a.array() - ma) * (b.array() - mb)).sum() /
           static_cast<double>(a.size() - 1);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

GaussHermiteRule::GaussHermiteRule(int n) {
    if (n < 1) throw std::invalid_argument("quadrature order must be positive");
    // Golub-Welsch on the Hermite Jacobi matrix.
    Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
    for (int i = 1; i < n; ++i) {
        const double off = std::sqrt(static_cast<double>(i) / 2.0);
        jacobi(i, i - 1) = off;
        jacobi(i - 1, i) = off;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
    nodes = solver.eigenvalues();
    weights.resize(n);
    const double mu0 = std::sqrt(std::numbers::pi);
    for (int i = 0; i < n; ++i) {
        const double v0 = solver.eigenvectors()(0, i);
        weights(i) = mu0 * v0 * v0;
    }
}

double GaussHermiteRule::gaussian_mean(const std::function<double(double)>& g,
                                       double mu, double sigma) const {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
        acc += weights(i) * g(mu + sigma * std::numbers::sqrt2 * nodes(i));
    }
    return acc / std::sqrt(std::numbers::pi);
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double simpson_recurse(const std::function<double(double)>& f, double a,
                       double fa, double b, double fb, double fm, double whole,
                       double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = simpson(f, a, fa, m, fm, flm);
    const double right = simpson(f, m, fm, b, fb, frm);
    const double err = left + right - whole;
    if (depth <= 0 || std::abs(err) <= 15.0 * tol) {
        return left + right + err / 15.0;
    }
    return simpson_recurse(f, a, fa, m, fm, flm, left, 0.5 * tol, depth - 1) +
           simpson_recurse(f, m, fm, b, fb, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_tol) {
    const double fa = f(a);
    const double fb = f(b);
    const double fm = f(0.5 * (a + b));
    const double whole = simpson(f, a, fa, b, fb, fm);
    const double scale = std::max(std::abs(whole), 1e-30);
    return simpson_recurse(f, a, fa, b, fb, fm, whole, rel_tol * scale, 48);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
    if (a.empty() || b.empty()) throw std::invalid_argument("empty KS sample");
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::size_t i = 0;
    std::size_t j = 0;
    double d = 0.0;
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        const double fa = static_cast<double>(i) / static_cast<double>(a.size());
        const double fb = static_cast<double>(j) / static_cast<double>(b.size());
        d = std::max(d, std::abs(fa - fb));
    }
    return d;
}

double ks_critical_value(double alpha, std::size_t n, std::size_t m) {
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    return c * std::sqrt(static_cast<double>(n + m) /
                         (static_cast<double>(n) * static_cast<double>(m)));
}

}  // namespace stochlab
