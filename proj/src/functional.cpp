#include "stochlab/functional.hpp"

#include <cmath>
#include <stdexcept>

namespace stochlab {

namespace {

double path_value_at(double t, std::span<const double> path, const TimeGrid& grid) {
    // Left-constant interpolation between nodes; exact at nodes.
    const double pos = t / grid.dt();
    auto idx = static_cast<std::size_t>(pos);
    if (idx >= path.size()) idx = path.size() - 1;
    return path[idx];
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) {
        throw std::runtime_error(std::string("non-finite functional value in ") + what);
    }
}

}  // namespace

double vertical_derivative(const PathFunctional& functional,
                           std::span<const double> path, const TimeGrid& grid,
                           std::size_t t_index, double h) {
    if (!(h > 0.0)) throw std::invalid_argument("bump size must be positive");
    if (t_index >= grid.node_count()) throw std::invalid_argument("t_index out of grid");
    const double t = grid.node(t_index);
    std::vector<double> up(path.begin(), path.end());
    std::vector<double> down(path.begin(), path.end());
    for (std::size_t i = t_index; i < up.size(); ++i) {
        up[i] += h;
        down[i] -= h;
    }
    const double f_up = functional.eval(t, up, grid);
    const double f_down = functional.eval(t, down, grid);
    require_finite(f_up, "vertical_derivative");
    require_finite(f_down, "vertical_derivative");
    return (f_up - f_down) / (2.0 * h);
}

double horizontal_derivative(const PathFunctional& functional,
                             std::span<const double> path, const TimeGrid& grid,
                             std::size_t t_index, double h) {
    if (!(h > 0.0) || h > grid.dt()) {
        throw std::invalid_argument("time step must lie in (0, dt]");
    }
    if (t_index >= grid.steps) throw std::invalid_argument("t_index out of grid");
    const double t = grid.node(t_index);
    std::vector<double> frozen(path.begin(), path.end());
    for (std::size_t i = t_index + 1; i < frozen.size(); ++i) {
        frozen[i] = path[t_index];
    }
    const double f_base = functional.eval(t, path, grid);
    const double f_ahead = functional.eval(t + h, frozen, grid);
    require_finite(f_base, "horizontal_derivative");
    require_finite(f_ahead, "horizontal_derivative");
    return (f_ahead - f_base) / h;
}

bool check_non_anticipative(const PathFunctional& functional,
                            std::span<const double> path, const TimeGrid& grid,
                            std::size_t t_index, RandomStream& stream,
                            int trials) {
    const double t = grid.node(t_index);
    const double base = functional.eval(t, path, grid);
    for (int trial = 0; trial < trials; ++trial) {
        std::vector<double> perturbed(path.begin(), path.end());
        for (std::size_t i = t_index + 1; i < perturbed.size(); ++i) {
            perturbed[i] += stream.gaussian();
        }
        if (functional.eval(t, perturbed, grid) != base) return false;
    }
    return true;
}

PathFunctional endpoint_functional() {
    return {[](double t, std::span<const double> path, const TimeGrid& grid) {
                return path_value_at(t, path, grid);
            },
            "endpoint"};
}

PathFunctional endpoint_square_functional() {
    return {[](double t, std::span<const double> path, const TimeGrid& grid) {
                const double v = path_value_at(t, path, grid);
                return v * v;
            },
            "endpoint_square"};
}

PathFunctional running_integral_functional() {
    return {[](double t, std::span<const double> path, const TimeGrid& grid) {
                // Left-point sum over full cells, plus the partial last cell.
                const double dt = grid.dt();
                double acc = 0.0;
                std::size_t i = 0;
                while (grid.node(i + 1) <= t && i + 1 < path.size()) {
                    acc += path[i] * dt;
                    ++i;
                }
                acc += path[i] * (t - grid.node(i));
                return acc;
            },
            "running_integral"};
}

PathFunctional separable_functional() {
    return {[](double t, std::span<const double> path, const TimeGrid&) {
                return t * path[0];
            },
            "separable"};
}

}  // namespace stochlab
