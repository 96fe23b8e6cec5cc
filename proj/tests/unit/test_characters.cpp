#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tml/characters.hpp"
#include "tml/hecke.hpp"
#include "tml/rng.hpp"

using namespace tml;
using namespace tml::chars;

TEST_SUITE("characters") {

TEST_CASE("primality oracle on known values") {
    for (uint64_t p : {2ull, 3ull, 5ull, 101ull, 2003ull, 10'007ull, 1'000'003ull,
                       2305843009213693951ull})
        CHECK(is_prime_u64(p));
    for (uint64_t n : {0ull, 1ull, 4ull, 100ull, 1'000'001ull, 10'005ull})
        CHECK_FALSE(is_prime_u64(n));
}

TEST_CASE("smallest primitive roots") {
    CHECK(find_primitive_root(3) == 2);
    CHECK(find_primitive_root(5) == 2);
    CHECK(find_primitive_root(7) == 3);
    CHECK(find_primitive_root(11) == 2);
    CHECK(find_primitive_root(41) == 6);
}

TEST_CASE("index table inverts the power map") {
    const auto ci = build_index(101);
    CHECK(ci.ind.size() == 101);
    CHECK(ci.index_of(1) == 0);
    CHECK(ci.index_of(ci.g) == 1);
    // g^ind[n] = n for every unit.
    for (uint64_t n = 1; n < 101; ++n) {
        uint64_t v = 1;
        for (uint32_t i = 0; i < ci.index_of(n); ++i) v = v * ci.g % 101;
        CHECK(v == n);
    }
    CHECK_THROWS(ci.index_of(0));
}

TEST_CASE("characters are completely multiplicative") {
    const auto ci = build_index(103);
    for (int trial = 0; trial < 50; ++trial) {
        const uint64_t a = uint64_t(uniform01(1, trial) * 102);
        const uint64_t n = 1 + uint64_t(uniform01(2, trial) * 400);
        const uint64_t m = 1 + uint64_t(uniform01(3, trial) * 400);
        if (n % 103 == 0 || m % 103 == 0) continue;
        const auto lhs = chi_value(ci, a, n * m);
        const auto rhs = chi_value(ci, a, n) * chi_value(ci, a, m);
        CHECK(std::abs(lhs - rhs) < 1e-12);
    }
    CHECK(std::abs(chi_value(ci, 7, 103)) == 0.0);
    CHECK(std::abs(chi_value(ci, 7, 206)) == 0.0);
}

TEST_CASE("kernel twisted sums match the direct oracle at q=101") {
    const uint64_t q = 101, x = 44;
    const auto ci = build_index(q);
    const auto t = hecke::build_hecke_table(x);
    std::vector<double> coeffs(x + 1, 0.0);
    for (uint64_t n = 1; n <= x; ++n) coeffs[n] = t.at(n);
    const auto fast = all_twisted_sums(ci, coeffs);
    REQUIRE(fast.values.size() == q - 1);
    for (uint64_t a = 0; a < q - 1; ++a) {
        const auto naive = naive_twisted_sum(ci, a, coeffs);
        CHECK(std::abs(fast.values[a] - naive) < 1e-10);
    }
}

TEST_CASE("kernel twisted sums match the direct oracle at q=2003") {
    const uint64_t q = 2003, x = 44;
    const auto ci = build_index(q);
    const auto t = hecke::build_hecke_table(x);
    std::vector<double> coeffs(x + 1, 0.0);
    for (uint64_t n = 1; n <= x; ++n) coeffs[n] = t.at(n);
    const auto fast = all_twisted_sums(ci, coeffs);
    double max_dev = 0.0;
    for (uint64_t a = 0; a < q - 1; a += 17) {
        const auto naive = naive_twisted_sum(ci, a, coeffs);
        max_dev = std::max(max_dev, std::abs(fast.values[a] - naive));
    }
    CHECK(max_dev < 1e-9);
}

TEST_CASE("principal character sums the coefficients") {
    const uint64_t q = 53;
    const auto ci = build_index(q);
    std::vector<double> coeffs = {0.0, 1.0, 2.0, 3.0, 4.0};
    const auto v = all_twisted_sums(ci, coeffs);
    CHECK(v.principal().real() == doctest::Approx(10.0).epsilon(1e-12));
    CHECK(std::abs(v.principal().imag()) < 1e-12);
}

TEST_CASE("sums longer than the modulus wrap by residue") {
    const uint64_t q = 53;
    const auto ci = build_index(q);
    std::vector<double> coeffs(q + 10, 0.0);
    for (std::size_t n = 1; n < coeffs.size(); ++n) coeffs[n] = 1.0 / double(n);
    const auto fast = all_twisted_sums(ci, coeffs);
    for (uint64_t a : {0ull, 1ull, 13ull, 51ull}) {
        const auto naive = naive_twisted_sum(ci, a, coeffs);
        CHECK(std::abs(fast.values[a] - naive) < 1e-12);
    }
}

TEST_CASE("second moment orthogonality identity at exact range") {
    // (1/phi) sum over all chi of |T(chi)|^2 = sum lambda(n)^2 when x^2 < q.
    const uint64_t q = 10'007, x = 100;
    const auto ci = build_index(q);
    const auto t = hecke::build_hecke_table(x);
    std::vector<double> coeffs(x + 1, 0.0);
    double diag = 0.0;
    for (uint64_t n = 1; n <= x; ++n) {
        coeffs[n] = t.at(n);
        diag += t.at(n) * t.at(n);
    }
    const auto v = all_twisted_sums(ci, coeffs);
    double lhs = 0.0;
    for (const auto& z : v.values) lhs += std::norm(z);
    lhs /= double(q - 1);
    CHECK(std::abs(lhs - diag) / diag < 5e-12);
}

TEST_CASE("index construction rejects bad moduli") {
    CHECK_THROWS(build_index(100));
    CHECK_THROWS(build_index(2));
    CHECK_THROWS(build_index(101, 10));  // 10 = g^? has even order, not primitive
}

}
