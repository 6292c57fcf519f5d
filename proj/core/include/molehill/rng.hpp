#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace molehill {

// All randomness in the library flows through std::mt19937_64 plus the helpers
// below. mt19937_64 has a fully specified algorithm, and the helpers avoid the
// standard distribution classes, whose output is implementation-defined; this
// keeps seeded fixtures bit-stable across platforms and standard libraries.

/// splitmix64 finalizer; used to derive independent sub-seeds from (seed, index).
inline std::uint64_t mix_seed(std::uint64_t seed) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Unbiased integer in [0, n) via rejection sampling.
inline std::uint64_t bounded_uniform(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() / n * n;
    std::uint64_t v = rng();
    while (v >= limit) v = rng();
    return v % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform_unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform double in [lo, hi).
inline double uniform_real(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * uniform_unit(rng);
}

}  // namespace molehill
