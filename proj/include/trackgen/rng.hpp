#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "trackgen/errors.hpp"

namespace trackgen {

/// Deterministic random source. All randomness in the project flows through
/// this class so that a (params, seed) pair reproduces byte-identical output
/// on any platform: mt19937_64's sequence is pinned by the C++ standard, and
/// the derived draws below avoid the implementation-defined std distributions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform index in [0, n). Modulo bias at n << 2^64 is negligible.
    std::size_t uniform_index(std::size_t n) {
        if (n == 0) throw Error("uniform_index over empty range");
        return static_cast<std::size_t>(next_u64() % n);
    }

    /// Index drawn with the given (nonnegative, not all zero) weights.
    std::size_t weighted_index(const std::vector<double>& weights);

private:
    std::mt19937_64 engine_;
};

/// Knuth's product-of-uniforms Poisson sampler. lambda = 0 always yields 0.
int sample_poisson(double lambda, Rng& rng);

/// Stable sub-seed derivation (splitmix64 of seed ^ salt), so independent
/// random streams (rhythm, pitches, fx choice...) never alias.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t salt);

}  // namespace trackgen
