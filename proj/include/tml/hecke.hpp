#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "tml/int128.hpp"

namespace tml::hecke {

// The engine instantiates the weight-12 level-1 eigenform whose Fourier
// coefficients are the discriminant function's tau(n). All downstream
// modules consume the normalized eigenvalues lambda(n) = tau(n) / n^{11/2}.

inline constexpr int kWeight = 12;
// Exactness cap for the 128-bit pipeline: |tau(n)| < P1*P2/2 for n <= 2e6.
inline constexpr std::size_t kMaxTauLimit = 2'000'000;

// Exact tau(1..n_max); slot 0 is unused and zero. Computed from the cube of
// the pentagonal-number series (a sparse series) squared up to the 24th
// power with exact NTT convolutions.
std::vector<int128> build_tau_table(std::size_t n_max);

struct HeckeTable {
    std::size_t limit = 0;
    std::vector<double> lambda;  // lambda[n], slot 0 unused

    double at(uint64_t n) const;
    bool covers(uint64_t n) const { return n >= 1 && n <= limit; }
};

HeckeTable normalize(const std::vector<int128>& tau);
HeckeTable build_hecke_table(std::size_t n_max);

struct SatakePair {
    std::complex<double> alpha;
    std::complex<double> beta;
};

// Roots of X^2 - lambda_p X + 1; both on the unit circle for |lambda_p| <= 2.
// Values within 1e-9 of +-2 are clamped; beyond that is a domain error.
SatakePair satake(double lambda_p);

// lambda(p^j) from lambda(p) by the three-term Hecke recursion
// lambda(p^{j+1}) = lambda(p) lambda(p^j) - lambda(p^{j-1}).
double lambda_prime_power(double lambda_p, unsigned j);

// lambda(n^2) assembled multiplicatively; needs lambda(p) for p | n only,
// so n may exceed the table limit as long as its prime factors are covered.
double lambda_of_square(const HeckeTable& t, uint64_t n);

// Multiplicative evaluation of lambda(n) from the factorization of n.
double lambda_multiplicative(const HeckeTable& t, uint64_t n);

uint64_t divisor_count(uint64_t n);
uint32_t omega(uint64_t n);

// d(1..n_max) in bulk for the Deligne-bound sweep.
std::vector<uint32_t> divisor_count_table(std::size_t n_max);

// Binary cache: 16-byte header ("TAUV1\0\0\0" + uint64 count, little endian)
// followed by count little-endian int64 values tau(1..count). Writing fails
// with an overflow error if any value in range exceeds int64.
void write_tau_cache(const std::string& path, const std::vector<int128>& tau);
std::vector<int128> read_tau_cache(const std::string& path);

}  // namespace tml::hecke
