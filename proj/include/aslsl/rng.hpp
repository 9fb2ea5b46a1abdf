#pragma once

#include <cmath>
#include <cstdint>
#include <random>

// Seeded randomness helpers. The raw mt19937_64 bit stream is portable, so
// deriving variates from the bits directly (instead of std::*_distribution,
// whose output is implementation-defined) keeps runs reproducible across
// standard libraries.

namespace aslsl {

// Derive an independent stream seed from (seed, stream) via splitmix64.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Uniform in [0, 1), 53-bit mantissa.
inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform in (0, 1].
inline double uniform_pos(std::mt19937_64& rng) {
    return 1.0 - uniform01(rng);
}

// Unbiased integer in [0, n).
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t x = rng();
    while (x >= limit) x = rng();
    return x % n;
}

// Standard normal via Box-Muller on the portable uniform stream.
inline double gaussian(std::mt19937_64& rng) {
    const double u1 = uniform_pos(rng);
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586477 * u2);
}

} // namespace aslsl
