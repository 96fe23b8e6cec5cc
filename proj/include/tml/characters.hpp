#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace tml::chars {

using cplx = std::complex<double>;

// Deterministic Miller-Rabin, valid for all 64-bit inputs.
bool is_prime_u64(uint64_t n);

// Smallest primitive root mod an odd prime q.
uint64_t find_primitive_root(uint64_t q);

// Discrete logarithm table to base g: ind[g^i mod q] = i for 0 <= i < q-1.
// The multiplicative characters mod q are chi_a(n) = e(a * ind[n] / (q-1)).
struct CharacterIndex {
    uint64_t q = 0;
    uint64_t g = 0;
    std::vector<uint32_t> ind;  // size q; ind[0] unused

    uint64_t order() const { return q - 1; }
    uint32_t index_of(uint64_t n) const;  // n reduced mod q; error if q | n
};

CharacterIndex build_index(uint64_t q);
CharacterIndex build_index(uint64_t q, uint64_t g);  // validates g

// chi_a(n); zero when q | n.
cplx chi_value(const CharacterIndex& ci, uint64_t a, uint64_t n);

// T(chi_a) = sum_{n=1}^{x} coeffs[n] chi_a(n) for every a in [0, q-1) at
// once: coefficients are bucketed by index class and transformed with a
// chirp-z DFT of length q-1. coeffs is 1-indexed (coeffs[0] ignored),
// x = coeffs.size() - 1.
struct TwistedSumVector {
    uint64_t q = 0;
    uint64_t x = 0;
    std::vector<cplx> values;  // values[a], a in [0, q-1)

    const cplx& principal() const { return values.at(0); }
};

TwistedSumVector all_twisted_sums(const CharacterIndex& ci, std::span<const double> coeffs);

// Direct evaluation oracle, O(x) per character.
cplx naive_twisted_sum(const CharacterIndex& ci, uint64_t a, std::span<const double> coeffs);

}  // namespace tml::chars
