#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace fruitpal {

/// Seeded generator whose draws are identical on every platform.
/// std::mt19937_64 is fully specified by the standard; the std:: distributions
/// are not, so the conversions below are done by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 bits of resolution.
    double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi]; the endpoints are reachable only up to rounding.
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stable per-key seed, so per-item work can run in any order.
std::uint64_t derive_seed(std::uint64_t base, std::string_view key, std::uint64_t salt = 0) noexcept;

}  // namespace fruitpal
