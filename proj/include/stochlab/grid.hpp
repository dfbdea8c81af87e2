#pragma once

#include <cstddef>
#include <stdexcept>

namespace stochlab {

// Uniform discretization of [0, T] with N steps, nodes t_i = i * T / N.
struct TimeGrid {
    double horizon = 1.0;
    std::size_t steps = 1;

    TimeGrid() = default;
    TimeGrid(double T, std::size_t N) : horizon(T), steps(N) {
        if (!(T > 0.0) || N < 1) {
            throw std::invalid_argument("TimeGrid requires T > 0 and N >= 1");
        }
    }

    double dt() const { return horizon / static_cast<double>(steps); }
    double node(std::size_t i) const { return static_cast<double>(i) * dt(); }
    std::size_t node_count() const { return steps + 1; }

    bool operator==(const TimeGrid& other) const {
        return horizon == other.horizon && steps == other.steps;
    }
};

}  // namespace stochlab
