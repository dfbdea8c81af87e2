#pragma once

#include <cstdint>
#include <cmath>
#include <numbers>
#include <vector>

namespace stochlab {

// Identifies one logical random stream. Distinct (master_seed, stream_id)
// pairs give independent sequences; equal pairs give identical sequences.
struct StreamKey {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

// Counter-based stream: output i depends only on (key, i), so sequences are
// reproducible regardless of how work is scheduled across threads. Streams
// are value types; copy freely, never share one instance mutably.
class RandomStream {
public:
    explicit RandomStream(StreamKey key)
        : key_(detail::mix64(key.master_seed ^ detail::mix64(key.stream_id))) {}

    // stream_id layout: high bits carry a purpose tag, low bits the path index,
    // so every (purpose, path) pair gets its own stream.
    static RandomStream for_path(std::uint64_t master_seed,
                                 std::uint64_t purpose,
                                 std::uint64_t path_index) {
        return RandomStream(StreamKey{master_seed, (purpose << 40) ^ path_index});
    }

    std::uint64_t next_u64() {
        ++counter_;
        return detail::mix64(key_ + counter_ * 0x9E3779B97F4A7C15ull);
    }

    // Uniform on (0, 1]; never returns 0, so logs are safe.
    double uniform() {
        return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller; one spare kept so consecutive draws stay cheap.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

    double exponential() { return -std::log(uniform()); }

    // Exact for any mean: splits large means so the multiplication method
    // never underflows.
    std::uint64_t poisson(double mean) {
        std::uint64_t n = 0;
        while (mean > 32.0) {
            // Poisson(a + b) = Poisson(a) + Poisson(b), independent halves.
            const double half = mean * 0.5;
            n += poisson(half);
            mean -= half;
        }
        const double limit = std::exp(-mean);
        double prod = uniform();
        while (prod > limit) {
            ++n;
            prod *= uniform();
        }
        return n;
    }

    // Standard symmetric gamma-stable draw (Chambers-Mallows-Stuck),
    // characteristic function exp(-|xi|^gamma). Requires gamma in (0, 2).
    double stable(double gamma) {
        const double v = std::numbers::pi * (uniform() - 0.5);
        const double w = exponential();
        if (gamma == 1.0) {
            return std::tan(v);
        }
        const double s = std::sin(gamma * v) /
                         std::pow(std::cos(v), 1.0 / gamma);
        const double tail = std::pow(std::cos((1.0 - gamma) * v) / w,
                                     (1.0 - gamma) / gamma);
        return s * tail;
    }

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

inline RandomStream make_stream(std::uint64_t master_seed, std::uint64_t stream_id) {
    return RandomStream(StreamKey{master_seed, stream_id});
}

inline std::vector<double> sample_gaussian(RandomStream& stream, std::size_t n) {
    std::vector<double> out(n);
    for (double& x : out) x = stream.gaussian();
    return out;
}

// i.i.d. symmetric stable draws with characteristic function
// exp(-scale * |xi|^gamma).
std::vector<double> sample_stable(RandomStream& stream, double gamma,
                                  double scale, std::size_t n);

}  // namespace stochlab
