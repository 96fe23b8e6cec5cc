#pragma once

#include <cstdint>
#include <vector>

#include "tml/int128.hpp"

namespace tml {

// Exact integer convolution via number-theoretic transforms modulo two
// 64-bit primes, recombined by CRT into signed 128-bit coefficients.
// Valid whenever every true coefficient c satisfies |c| < P1*P2/2,
// i.e. |c| < ~3.8e37; callers are expected to know their coefficient bounds.

namespace ntt {

// P1 = 2^64 - 2^32 + 1, generator 7, 2-adic valuation of P1-1 is 32.
// P2 = 29 * 2^57 + 1, generator 3, 2-adic valuation of P2-1 is 57.
inline constexpr uint64_t P1 = 0xFFFFFFFF00000001ULL;
inline constexpr uint64_t P2 = 4179340454199820289ULL;
inline constexpr uint64_t G1 = 7;
inline constexpr uint64_t G2 = 3;

inline uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t(uint128(a) * b % m);
}

inline uint64_t powmod(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod(r, b, m);
        b = mulmod(b, b, m);
        e >>= 1;
    }
    return r;
}

inline uint64_t invmod(uint64_t a, uint64_t m) { return powmod(a, m - 2, m); }

// In-place iterative radix-2 transform of power-of-two length over Z/p.
// invert=true applies the inverse transform including the 1/n factor.
void transform(std::vector<uint64_t>& a, uint64_t p, uint64_t gen, bool invert);

}  // namespace ntt

// Truncated product of two nonnegative-exponent integer series: returns the
// first keep coefficients of a*b. Inputs are signed 128-bit; all arithmetic
// is exact under the coefficient bound above.
std::vector<int128> convolve_exact(const std::vector<int128>& a,
                                   const std::vector<int128>& b,
                                   std::size_t keep);

// Squaring specialization (one forward transform per modulus).
std::vector<int128> square_exact(const std::vector<int128>& a, std::size_t keep);

}  // namespace tml
