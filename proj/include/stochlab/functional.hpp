#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "stochlab/grid.hpp"
#include "stochlab/rng.hpp"

namespace stochlab {

// Non-anticipative functional U(t, omega) of a grid path. The evaluator
// receives the full node vector but must only read values at nodes t_i <= t;
// check_non_anticipative spot-checks that contract.
struct PathFunctional {
    std::function<double(double, std::span<const double>, const TimeGrid&)> eval;
    std::string label;
};

// Central difference of the additive bump h * 1_{[t, T]} applied to all grid
// nodes with t_i >= t.
double vertical_derivative(const PathFunctional& functional,
                           std::span<const double> path, const TimeGrid& grid,
                           std::size_t t_index, double h);

// Forward difference in time with the path frozen at its value at t.
double horizontal_derivative(const PathFunctional& functional,
                             std::span<const double> path, const TimeGrid& grid,
                             std::size_t t_index, double h);

// Randomly perturbs nodes strictly after t and checks U(t, .) is unchanged.
bool check_non_anticipative(const PathFunctional& functional,
                            std::span<const double> path, const TimeGrid& grid,
                            std::size_t t_index, RandomStream& stream,
                            int trials = 8);

// Library of closed-form functionals used by the verification suite.
PathFunctional endpoint_functional();          // U(t, w) = w_t
PathFunctional endpoint_square_functional();   // U(t, w) = w_t^2
PathFunctional running_integral_functional();  // U(t, w) = int_0^t w_s ds (left sums)
PathFunctional separable_functional();         // U(t, w) = t * w_0

}  // namespace stochlab
