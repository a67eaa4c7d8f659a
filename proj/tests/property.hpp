#pragma once

// Seeded random inputs for property tests.

#include <cmath>
#include <cstdint>
#include <random>

namespace hbtamp::testing {

class Draw {
public:
    explicit Draw(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    /// Log-uniform on [lo, hi], lo > 0.
    double log_uniform(double lo, double hi);
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

private:
    std::mt19937_64 rng_;
};

inline double Draw::log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
}

inline constexpr int kPropertyCases = 200;

}  // namespace hbtamp::testing
