#ifndef BTTN_RNG_HPP
#define BTTN_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

#include "bttn/common.hpp"

namespace bttn {

/// SplitMix64 finalizer; bijective on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Deterministic random stream. All distributions are generated from raw
/// 64-bit draws so that sequences depend only on the seed, not on the
/// standard library's distribution internals.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform double in [0, hi).
    double uniform(double hi) { return uniform() * hi; }

    /// Standard normal via Box-Muller (cosine branch).
    double normal() {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
    }

    /// Circularly symmetric complex Gaussian CN(0, variance): the real and
    /// imaginary parts are each N(0, variance/2). Uses one Box-Muller pair.
    complexd cnormal(double variance) {
        if (variance <= 0.0) return {0.0, 0.0};
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1) * variance);
        return {r * std::cos(kTwoPi * u2), r * std::sin(kTwoPi * u2)};
    }

private:
    std::mt19937_64 gen_;
};

/// Derives independent, reproducible streams from (master seed, domain,
/// indices). Trials pull their own stream so batch results do not depend on
/// scheduling order.
class StreamFactory {
public:
    explicit StreamFactory(std::uint64_t master_seed) : master_(master_seed) {}

    RandomStream stream(std::uint64_t domain, std::uint64_t a = 0, std::uint64_t b = 0) const {
        std::uint64_t s = mix64(master_ ^ 0xA0761D6478BD642FULL);
        s = mix64(s ^ mix64(domain));
        s = mix64(s ^ mix64(a + 0xE7037ED1A0B428DBULL));
        s = mix64(s ^ mix64(b + 0x8EBC6AF09C88C6E3ULL));
        return RandomStream(s);
    }

    std::uint64_t master() const { return master_; }

private:
    std::uint64_t master_;
};

namespace stream_domain {
inline constexpr std::uint64_t kBaseline = 1;     // baseline channel + pilot noise
inline constexpr std::uint64_t kLegitTrial = 2;   // per-trial legit measurement
inline constexpr std::uint64_t kAttackTrial = 3;  // per-(trial, attacker) adversary draw
}  // namespace stream_domain

}  // namespace bttn

#endif
