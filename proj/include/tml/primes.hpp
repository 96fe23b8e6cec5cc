#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tml/hecke.hpp"

namespace tml::primes {

struct PrimeList {
    uint64_t bound = 0;
    std::vector<uint64_t> primes;

    // Number of primes <= x (requires x <= bound).
    std::size_t count_below(uint64_t x) const;
    bool covers(uint64_t x) const { return x <= bound; }
};

// Eratosthenes up to bound (inclusive). Memory ~ bound bytes.
PrimeList sieve(uint64_t bound);

// Streaming segmented sieve over (lo, hi]; calls visit(p) in ascending order.
// Used by the constant-fitting oracle where hi is too large to store.
void for_each_prime(uint64_t lo, uint64_t hi, const std::function<void(uint64_t)>& visit);

// sum_{p <= x} 1/p, deterministic ascending pairwise accumulation.
double mertens_sum(uint64_t x, const PrimeList& pl);

// sum_{p <= x} lambda(p)^2 / p.
double lambda_sq_mertens(uint64_t x, const hecke::HeckeTable& t, const PrimeList& pl);

// Oscillating prime sum sum_{p <= x} w(p) cos(alpha log p) / p^{1+beta},
// w = 1 or w = lambda(p^2). The envelope field carries the regime's leading
// bound; callers compare value against envelope with a measured constant.
struct CosineSum {
    double value = 0.0;
    int regime = 0;      // 0: |alpha| <= 1/log x, 1: moderate, 2: |alpha| > 10
    double envelope = 0.0;
};
CosineSum cosine_prime_sum(uint64_t x, double alpha, double beta, const PrimeList& pl);
CosineSum cosine_prime_sum_sym(uint64_t x, double alpha, double beta,
                               const hecke::HeckeTable& t, const PrimeList& pl);

// Symmetric-square local factor at p:
//   L_p(s) = (1 - lambda(p^2) p^{-s} + lambda(p^2) p^{-2s} - p^{-3s})^{-1}.
std::complex<double> sym2_local_factor(double lambda_p2, std::complex<double> s, double p);

struct TruncatedEuler {
    std::complex<double> value;
    double log_tail_bound = 0.0;  // crude bound on |log(true/value)|
    std::size_t primes_used = 0;
};
// Product of local factors over p <= P; requires Re s > 1.
TruncatedEuler sym2_L_truncated(std::complex<double> s, uint64_t P,
                                const hecke::HeckeTable& t, const PrimeList& pl);

// L(1, sym^2) via zeta(2) * sum_{n <= T} lambda(n^2)/n. cauchy_diff reports
// |S(T) - S(T/2)| * zeta(2) as the convergence measure.
double L1_sym2_series(const hecke::HeckeTable& t, uint64_t T, double* cauchy_diff = nullptr);

// Local series products over the support of c:
//   P1: sum_j |lambda(p^{v+j})| |lambda(p^j)| / p^j
//   P2: same with denominator p^{3j/4}
// Multiplicative over coprime arguments; truncation at relative 1e-15.
double p1_factor(uint64_t c, const hecke::HeckeTable& t);
double p2_factor(uint64_t c, const hecke::HeckeTable& t);

// Twisted-coefficient values h at prime powers (power in {1, 2} only):
//   h(p)   = (k-1) lambda(p)
//   h(p^2) = k(k-1)/2 * (lambda(p^2) - 1) + (k-1)^2.
double h_value(const hecke::HeckeTable& t, uint64_t p, int power, double k);

// P3: prod_{p | c} (|h(p)| + |h(p^2)|/p).
double p3_factor(uint64_t c, double k, const hecke::HeckeTable& t);

// sum_{n <= x, c | n} lambda(n)^2: exact table scan vs the local main term
//   (x/c) prod_{p^v || c} [S_p(v) zeta_p(2) / (zeta_p(1) L_p(1))] * L1 / zeta(2).
struct DivisorConstrainedSum {
    double exact = 0.0;
    double main_term = 0.0;
    double rel_gap = 0.0;
};
DivisorConstrainedSum divisor_constrained_lambda_sum(uint64_t x, uint64_t c,
                                                     const hecke::HeckeTable& t,
                                                     double L1);

// Rounded geometric ladder from lo to hi inclusive, duplicates removed.
std::vector<uint64_t> geometric_grid(uint64_t lo, uint64_t hi, int points_per_decade);

// Fitting oracle: residual r(x) = sum(x) - loglog(x) is regressed on
// u = 1/log x with a quadratic model; the intercept estimates the constant.
struct ConstantFit {
    double constant = 0.0;
    double u_coeff = 0.0;
    double u2_coeff = 0.0;
    double max_abs_residual = 0.0;  // fit residual over the grid
    std::vector<uint64_t> grid;
    std::vector<double> sums;
};
// b1: streaming over [grid_min, grid_max] (default 1e4..1e8).
ConstantFit fit_prime_reciprocal_constant(uint64_t grid_min = 10'000,
                                          uint64_t grid_max = 100'000'000,
                                          int points_per_decade = 2);
// b2: lambda^2 weights, table-backed grid (default 1e3..table limit).
ConstantFit fit_lambda_sq_constant(const hecke::HeckeTable& t, const PrimeList& pl,
                                   uint64_t grid_min = 1'000, uint64_t grid_max = 0,
                                   int points_per_decade = 2);

struct Constants {
    double b1 = 0.0;
    double b2 = 0.0;
    double L1_sym2 = 0.0;
    uint64_t T_truncation = 0;
    std::string provenance_b1, provenance_b2, provenance_L1;
};
Constants compute_constants(const hecke::HeckeTable& t, const PrimeList& pl);
void write_constants(const std::string& path, const Constants& c);
Constants load_constants(const std::string& path);

inline constexpr double kZeta2 = 1.6449340668482264;  // pi^2 / 6

}  // namespace tml::primes
