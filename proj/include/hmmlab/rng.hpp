// Seeded random source with platform-independent draws.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>

namespace hmmlab {

/// SplitMix64 finalizer.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/**
 * @brief Seed for trial `index` under master seed `master`.
 *
 * child = splitmix64(master ^ splitmix64(index)). Trials seeded this way are
 * independent of execution order, so they may run in parallel.
 */
constexpr std::uint64_t child_seed(std::uint64_t master, std::uint64_t index) {
    return splitmix64(master ^ splitmix64(index));
}

/**
 * @brief mt19937_64 with hand-rolled transforms.
 *
 * The standard library's distribution objects are implementation-defined, so
 * uniform, categorical and Gaussian draws are derived from raw engine output
 * here. Same seed gives the same stream on every conforming platform.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Index drawn from nonnegative weights summing to (about) one.
    std::size_t categorical(std::span<const double> weights) {
        const double u = uniform();
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            last_positive = i;
            acc += weights[i];
            if (u < acc) return i;
        }
        return last_positive;
    }

    /// Standard normal via Box-Muller (one draw per call, second discarded).
    double gaussian() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    /// Exp(1) draw.
    double exponential() {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return -std::log(u);
    }

private:
    std::mt19937_64 engine_;
};

} // namespace hmmlab
