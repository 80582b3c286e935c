#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace lrace {

/// Splittable seeded random stream.
///
/// Every stochastic operation in the library takes a stream (or derives
/// substreams from one), so results are bit-reproducible given the root
/// seed. Substreams are derived from the construction seed only: they are
/// independent of how many values the parent has drawn, which is what makes
/// trial blocks safely distributable across workers. A stream must not be
/// shared between workers; give each worker its own substream instead.
///
/// The normal transform is an explicit Box-Muller so that the byte stream
/// does not depend on the standard library's unspecified
/// std::normal_distribution algorithm.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), gen_(mix(seed)) {}

    /// Independent child stream; derived from this stream's seed, not from
    /// its current draw position.
    RngStream substream(std::uint64_t index) const {
        return RngStream(mix(seed_ ^ (0x9E3779B97F4A7C15ULL * (index + 1))));
    }

    std::uint64_t seed() const { return seed_; }

    std::uint64_t next_u64() { return gen_(); }

    /// Uniform in the open interval (0, 1).
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller; consumes exactly two uniforms.
    double next_normal() {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        constexpr double two_pi = 6.283185307179586476925286766559;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
    }

    double next_normal(double mean, double stddev) {
        return mean + stddev * next_normal();
    }

private:
    // SplitMix64 finalizer; spreads low-entropy seeds over the full state space.
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9E3779B97F4A7C15ULL;
        x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
        x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
        return x ^ (x >> 31);
    }

    std::uint64_t seed_;
    std::mt19937_64 gen_;
};

}  // namespace lrace
