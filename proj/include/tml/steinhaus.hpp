#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "tml/hecke.hpp"
#include "tml/numerics.hpp"
#include "tml/primes.hpp"

namespace tml::rmf {

using cplx = std::complex<double>;

// One realization of a Steinhaus random multiplicative function: independent
// uniform unit-circle values at primes p <= y, extended completely
// multiplicatively. Phases come from a counter RNG keyed by (seed, p), so a
// sample is reproducible regardless of evaluation order.
struct SteinhausSample {
    uint64_t seed = 0;
    uint64_t y = 0;
    std::vector<uint64_t> primes;  // ascending, all p <= y
    std::vector<cplx> phases;      // aligned with primes

    cplx f_prime(uint64_t p) const;  // error if p is not in the list
};

SteinhausSample make_sample(const primes::PrimeList& pl, uint64_t y, uint64_t seed);

// Same phases for p <= y_freeze, fresh draws (from seed2) above. Implements
// the conditional-resampling step behind the E = E o E^{(y)} tower property.
SteinhausSample resample_above(const SteinhausSample& s, uint64_t y_freeze, uint64_t seed2);

enum class FillMode {
    all,          // error if some n <= n_max has a prime factor > y
    smooth_only,  // f(n) = 0 when some prime factor exceeds y
};

// f(1..n_max) via a smallest-prime-factor sieve; slot 0 unused.
std::vector<cplx> f_values(const SteinhausSample& s, std::size_t n_max, FillMode mode);

// Multiplicative evaluation for a single n.
cplx f_value(const SteinhausSample& s, uint64_t n);

// sum_{n <= x} f(n) lambda(n).
cplx twisted_partial_sum(const SteinhausSample& s, const hecke::HeckeTable& t, uint64_t x);

// F_y(s) = prod_{p <= y} |1 - alpha_p f(p) p^{-s}|^{-1} |1 - beta_p f(p) p^{-s}|^{-1}.
// Real and positive; throws if a local factor is within 1e-12 of singular.
double euler_product_F(const SteinhausSample& s, const hecke::HeckeTable& t, cplx arg,
                       uint64_t y);

// Expectation of the joint twisted Euler product over z <= p <= y,
//   E prod |1 - alpha f(p)/p^{1/2+sigma1+it1}|^{-2a} ... |^{-2b},
// triangulated three ways: the exponential-sum closed form, exact per-prime
// circle quadrature, and Monte Carlo.
struct EulerProductSpec {
    double a = 1.0, b = 0.0;
    double sigma1 = 0.0, sigma2 = 0.0;
    double t1 = 0.0, t2 = 0.0;
    uint64_t z = 200, y = 10'000;
    bool enforce_precondition = true;  // z >= 100 (1 + max(a^2, b^2))
};
void check_euler_spec(const EulerProductSpec& spec);

double expected_euler_log_closed_form(const EulerProductSpec& spec,
                                      const hecke::HeckeTable& t,
                                      const primes::PrimeList& pl);
double expected_euler_log_quadrature(const EulerProductSpec& spec,
                                     const hecke::HeckeTable& t,
                                     const primes::PrimeList& pl,
                                     double rel_tol = 1e-12);
MeanStderr expected_euler_mc(const EulerProductSpec& spec, const hecke::HeckeTable& t,
                             const primes::PrimeList& pl, std::size_t n_samples,
                             uint64_t seed);

// Even-moment bound check:
//   E |sum_n c_n f(n)|^2 |sum_{p in P} a_p f(p)/sqrt{p} + a_{p^2} f(p)^2/p|^{2j}
// against (sum_n dP(n) |c_n|^2) * j! * (sum_p 2|a_p|^2/p + 12|a_{p^2}|^2/p^2)^j,
// where dP(n) counts divisors of n supported on P.
struct EvenMomentSpec {
    std::vector<cplx> c;        // 1-indexed, size n_max + 1
    std::vector<uint64_t> P;    // primes, ascending
    std::vector<cplx> a_p;      // aligned with P
    std::vector<cplx> a_p2;     // aligned with P
    unsigned j = 1;
};
struct EvenMomentCheck {
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    double bound = 0.0;
    double ratio = 0.0;  // mc_mean / bound
};
EvenMomentCheck even_moment_check(const EvenMomentSpec& spec, const primes::PrimeList& pl,
                                  std::size_t n_samples, uint64_t seed);

double divisor_count_on_support(uint64_t n, const std::vector<uint64_t>& P);

// Discrete Plancherel identity for partial sums:
//   int_1^inf |sum_{n<=x} a_n|^2 x^{-1-2 sigma} dx
//     = (1/2 pi) int_R |F(sigma+it)|^2 / |sigma+it|^2 dt,
// lhs exact (finite support), rhs truncated at |t| <= t_max with a
// mean-square tail estimate.
struct ParsevalCheck {
    double lhs_exact = 0.0;
    double rhs_quadrature = 0.0;
    double rhs_tail_estimate = 0.0;
    double rel_gap = 0.0;  // |lhs - rhs| / lhs
};
ParsevalCheck parseval_check(std::span<const double> a, double sigma, double t_max,
                             double quad_tol_factor = 1e-7);

// sum over the block x/(r+1) < n <= x/r of lambda(n)^2 restricted to
// y-rough n (smallest prime factor > y), vs the x/(r^2 log y) shape.
struct RoughBlockSum {
    double sum = 0.0;
    double shape = 0.0;
    double ratio = 0.0;
    uint64_t survivors = 0;
};
RoughBlockSum rough_block_lambda_sum(const hecke::HeckeTable& t, const primes::PrimeList& pl,
                                     uint64_t x, uint64_t r, uint64_t y);

}  // namespace tml::rmf
