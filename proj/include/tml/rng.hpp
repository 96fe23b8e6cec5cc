#pragma once

#include <complex>
#include <cstdint>
#include <numbers>

namespace tml {

// Stateless counter-based generator. Every draw is a pure function of
// (seed, key), so results do not depend on evaluation order or threading.

// splitmix64 finalizer: full-avalanche 64-bit mixer.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline uint64_t counter_rng(uint64_t seed, uint64_t key) {
    // Two mixing rounds with the key injected between them; enough to break
    // the additive structure of consecutive keys.
    uint64_t h = mix64(seed ^ 0x6A09E667F3BCC909ULL);
    h = mix64(h ^ key);
    return mix64(h + (key << 1) + 0x2545F4914F6CDD1DULL);
}

inline uint64_t counter_rng(uint64_t seed, uint64_t key1, uint64_t key2) {
    return counter_rng(counter_rng(seed, key1), key2);
}

// Uniform in [0, 1) with 53 random bits.
inline double uniform01(uint64_t seed, uint64_t key) {
    return double(counter_rng(seed, key) >> 11) * 0x1.0p-53;
}

// Point on the unit circle, exp(2*pi*i*u).
inline std::complex<double> unit_phase(uint64_t seed, uint64_t key) {
    const double theta = 2.0 * std::numbers::pi * uniform01(seed, key);
    return {std::cos(theta), std::sin(theta)};
}

// Independent per-sample seed for Monte Carlo batches.
inline uint64_t derive_seed(uint64_t master, uint64_t sample_index) {
    return counter_rng(master, 0xA076'1D64'78BD'642FULL, sample_index);
}

}  // namespace tml
