#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tml/hecke.hpp"
#include "tml/mollifier.hpp"
#include "tml/primes.hpp"
#include "tml/rng.hpp"
#include "tml/transfer.hpp"

using namespace tml;
using namespace tml::transfer;

namespace {

PhasePolynomial unit(const std::vector<uint64_t>& basis) {
    PhasePolynomial one(basis);
    one.add_term(PhasePolynomial::Key(basis.size(), 0), cplx(1.0, 0.0));
    return one;
}

}  // namespace

TEST_SUITE("transfer") {

TEST_CASE("construction guards") {
    CHECK_THROWS(PhasePolynomial({}));
    CHECK_THROWS(PhasePolynomial({3, 2}));
    PhasePolynomial p({2, 3});
    CHECK_THROWS(p.add_term({1}, 1.0));
    CHECK_THROWS(p.add_integer_term(0, 1.0));
    CHECK_THROWS_AS(p.add_integer_term(14, 1.0), std::domain_error);
    PhasePolynomial other({2, 5});
    CHECK_THROWS((void)(p * other));
    CHECK_THROWS(p += other);
}

TEST_CASE("integer terms factor over the basis and merge") {
    PhasePolynomial p({2, 3});
    p.add_integer_term(12, cplx(1.0, 0.0));   // key (2, 1)
    p.add_integer_term(12, cplx(0.5, 0.0));   // merges
    p.add_integer_term(1, cplx(4.0, 0.0));    // zero monomial
    CHECK(p.term_count() == 2);
    CHECK(p.expectation() == cplx(4.0, 0.0));
    CHECK(p.max_one_sided_monomial() == doctest::Approx(12.0));
}

TEST_CASE("conjugation flips monomials, expectation picks the diagonal") {
    PhasePolynomial p({2, 3});
    const cplx c(0.6, -0.8);
    p.add_integer_term(2, c);
    const PhasePolynomial pc = p.conjugate();
    CHECK(pc.expectation() == cplx(0.0, 0.0));
    // f(2) * conj(f(2)) = 1, so the product's diagonal is |c|^2.
    const PhasePolynomial prod = p * pc;
    CHECK(prod.expectation().real() == doctest::Approx(std::norm(c)).epsilon(1e-14));
    CHECK(std::abs(prod.expectation().imag()) < 1e-15);
}

TEST_CASE("real part squares to half the modulus on a single monomial") {
    PhasePolynomial p({2});
    const cplx c(1.5, 0.7);
    p.add_integer_term(2, c);
    const PhasePolynomial rp = p.real_part();
    const double second = (rp * rp).expectation().real();
    CHECK(second == doctest::Approx(0.5 * std::norm(c)).epsilon(1e-14));
}

TEST_CASE("one sided monomial splits positive and negative exponents") {
    PhasePolynomial p({2, 3});
    p.add_term({2, -1}, 1.0);  // f(2)^2 f(3)^{-1}: sides 4 and 3
    CHECK(p.max_one_sided_monomial() == doctest::Approx(4.0));
    p.add_term({-1, 2}, 1.0);  // sides 9 and 2
    CHECK(p.max_one_sided_monomial() == doctest::Approx(9.0));
    CHECK(unit({2, 3}).max_one_sided_monomial() == doctest::Approx(1.0));
}

TEST_CASE("second moment of the twisted sum is the coefficient diagonal") {
    const auto t = hecke::build_hecke_table(16);
    const std::vector<uint64_t> basis{2, 3, 5, 7, 11};
    const auto z = twisted_sum_polynomial(t, 12, basis);
    const auto zz = z * z.conjugate();
    double diag = 0.0;
    for (uint64_t n = 1; n <= 12; ++n) diag += t.at(n) * t.at(n);
    CHECK(zz.expectation().real() == doctest::Approx(diag).epsilon(1e-13));
    // Keys subtract shared primes, so each side is at most x itself.
    CHECK(zz.max_one_sided_monomial() == doctest::Approx(12.0));
    CHECK_THROWS((void)twisted_sum_polynomial(t, 20, basis));
}

TEST_CASE("interval polynomial diagonal matches the closed form") {
    const auto t = hecke::build_hecke_table(10);
    const auto pl = primes::sieve(10);
    const auto s = moll::manual_schedule(100.0, 2.0, {4.0}, {1}, moll::Mode::desk);
    const std::vector<uint64_t> basis{2, 3};
    const auto d = interval_sum_polynomial(s, 1, 0, t, pl, basis);
    double expect = 0.0;
    for (uint64_t p : {uint64_t(2), uint64_t(3)}) {
        const double l2 = t.at(p) * t.at(p);
        expect += l2 / double(p) + (l2 - 2.0) * (l2 - 2.0) / (4.0 * double(p) * double(p));
    }
    CHECK((d * d.conjugate()).expectation().real() ==
          doctest::Approx(expect).epsilon(1e-13));
    // Re D squared carries half the modulus diagonal.
    const auto rd = d.real_part();
    CHECK((rd * rd).expectation().real() == doctest::Approx(0.5 * expect).epsilon(1e-13));
}

TEST_CASE("weight polynomial expectation agrees with sampling") {
    const auto t = hecke::build_hecke_table(10);
    const auto pl = primes::sieve(10);
    const auto s = moll::manual_schedule(100.0, 2.0, {4.0}, {1}, moll::Mode::desk);
    REQUIRE(s.l_range() == 0);
    const std::vector<uint64_t> basis{2, 3};
    const double exact = weight_polynomial(s, t, pl, basis).expectation().real();
    // k = 2, J = 1, single l: R = (1 + Re D)^2, so E R = 1 + E|D|^2 / 2.
    double ed2 = 0.0;
    for (uint64_t p : {uint64_t(2), uint64_t(3)}) {
        const double l2 = t.at(p) * t.at(p);
        ed2 += l2 / double(p) + (l2 - 2.0) * (l2 - 2.0) / (4.0 * double(p) * double(p));
    }
    CHECK(exact == doctest::Approx(1.0 + 0.5 * ed2).epsilon(1e-13));
    std::vector<double> vals(20'000);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        const auto ev = moll::seeded_evaluator(derive_seed(17, i));
        vals[i] = moll::weight_total(s, t, pl, ev);
    }
    const auto ms = mean_and_stderr(vals);
    CHECK(std::abs(ms.mean - exact) < 5.0 * ms.stderr_);
}

TEST_CASE("unit weight leaves the second moment unchanged") {
    const auto t = hecke::build_hecke_table(16);
    const std::vector<uint64_t> basis{2, 3, 5, 7, 11};
    const auto z = twisted_sum_polynomial(t, 12, basis);
    const auto zz = z * z.conjugate();
    const auto full = zz * unit(basis);
    CHECK(full.expectation() == zz.expectation());
    CHECK(full.max_one_sided_monomial() == doctest::Approx(zz.max_one_sided_monomial()));
}

TEST_CASE("character average equals the expectation below the modulus") {
    const auto t = hecke::build_hecke_table(10);
    const auto pl = primes::sieve(10);
    const auto s = moll::manual_schedule(10'007.0, 2.0, {4.0}, {1}, moll::Mode::desk);
    const auto r = orthogonality_transfer_check(10'007, 6, s, t, pl);
    CHECK(r.diagonal_exact);
    CHECK(r.max_monomial < 10'007.0);
    CHECK(r.expected_side > 0.0);
    CHECK(r.rel_gap <= 1e-10);
}

TEST_CASE("small modulus wraps monomials and leaks") {
    const auto t = hecke::build_hecke_table(10);
    const auto pl = primes::sieve(10);
    const auto s = moll::manual_schedule(101.0, 2.0, {6.0}, {1}, moll::Mode::desk);
    const auto r = orthogonality_transfer_check(101, 10, s, t, pl);
    CHECK_FALSE(r.diagonal_exact);
    CHECK(r.rel_gap > 1e-6);
}

}
