#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <vector>

#include "tml/characters.hpp"
#include "tml/hecke.hpp"
#include "tml/mollifier.hpp"
#include "tml/primes.hpp"

namespace tml::transfer {

using cplx = std::complex<double>;

// Laurent polynomial in the unit-circle variables f(p) over a fixed prime
// basis. Conjugation negates exponents; the expectation over independent
// uniform phases is the coefficient of the zero monomial.
class PhasePolynomial {
  public:
    using Key = std::vector<int>;  // exponent per basis prime

    explicit PhasePolynomial(std::vector<uint64_t> basis);

    const std::vector<uint64_t>& basis() const { return basis_; }
    std::size_t term_count() const { return terms_.size(); }

    void add_term(const Key& exponents, cplx coeff);
    // Monomial for an integer n whose prime factors all lie in the basis.
    void add_integer_term(uint64_t n, cplx coeff);

    PhasePolynomial operator+(const PhasePolynomial& o) const;
    PhasePolynomial operator*(const PhasePolynomial& o) const;
    PhasePolynomial& operator+=(const PhasePolynomial& o);
    PhasePolynomial scaled(cplx factor) const;
    PhasePolynomial conjugate() const;
    PhasePolynomial real_part() const;  // (P + conj P) / 2

    cplx expectation() const;  // coefficient of the zero monomial

    // Largest one-sided value of any monomial: max over terms of
    // max(prod p^{e_p^+}, prod p^{e_p^-}). The character-average equals the
    // expectation exactly when this stays below the modulus.
    double max_one_sided_monomial() const;

  private:
    std::vector<uint64_t> basis_;
    std::map<Key, cplx> terms_;
};

// sum_{n <= x} lambda(n) f(n) as a polynomial.
PhasePolynomial twisted_sum_polynomial(const hecke::HeckeTable& t, uint64_t x,
                                       const std::vector<uint64_t>& basis);

// D_{m,l} of the schedule as a polynomial.
PhasePolynomial interval_sum_polynomial(const moll::MollifierSchedule& s, std::size_t m,
                                        int l, const hecke::HeckeTable& t,
                                        const primes::PrimeList& pl,
                                        const std::vector<uint64_t>& basis);

// R = sum_l prod_m (sum_{j<=J} (k-1)^j Re D^j / j!)^2 as a polynomial.
PhasePolynomial weight_polynomial(const moll::MollifierSchedule& s,
                                  const hecke::HeckeTable& t, const primes::PrimeList& pl,
                                  const std::vector<uint64_t>& basis);

struct TransferCheck {
    uint64_t q = 0;
    uint64_t x = 0;
    double char_side = 0.0;      // (1/phi(q)) sum over all chi of |T(chi)|^2 R(chi)
    double expected_side = 0.0;  // E |sum f(n) lambda(n)|^2 R(f), exact expansion
    double rel_gap = 0.0;
    double max_monomial = 0.0;
    bool diagonal_exact = false;  // max_monomial < q
};

// Character-average versus random-model expectation for the mollified second
// moment. Exact agreement when every diagonal monomial stays below q;
// smaller q leaves wrap-around leakage (the negative control).
TransferCheck orthogonality_transfer_check(uint64_t q, uint64_t x,
                                           const moll::MollifierSchedule& s,
                                           const hecke::HeckeTable& t,
                                           const primes::PrimeList& pl);

}  // namespace tml::transfer
