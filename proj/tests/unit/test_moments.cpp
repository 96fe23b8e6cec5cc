#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tml/characters.hpp"
#include "tml/hecke.hpp"
#include "tml/moments.hpp"

using namespace tml;
using namespace tml::moments;

TEST_SUITE("moments") {

TEST_CASE("integer square root") {
    CHECK(isqrt_u64(0) == 0);
    CHECK(isqrt_u64(1) == 1);
    CHECK(isqrt_u64(3) == 1);
    CHECK(isqrt_u64(4) == 2);
    CHECK(isqrt_u64(999'999) == 999);
    CHECK(isqrt_u64(1'000'000) == 1000);
    CHECK(isqrt_u64(uint64_t(3'037'000'499) * 3'037'000'499) == 3'037'000'499);
}

TEST_CASE("prime ladder spans the requested range") {
    const auto qs = prime_ladder(1000, 1'000'000, 20);
    CHECK(qs.size() >= 15);
    CHECK(qs.front() >= 1000);
    CHECK(qs.back() <= 1'000'000);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        CHECK(chars::is_prime_u64(qs[i]));
        if (i) CHECK(qs[i] > qs[i - 1]);
    }
    // Roughly geometric spacing: consecutive ratios stay bounded.
    for (std::size_t i = 1; i < qs.size(); ++i)
        CHECK(double(qs[i]) / double(qs[i - 1]) < 3.0);
}

TEST_CASE("trivial sum length makes every character contribute one") {
    const uint64_t q = 101;
    const auto ci = chars::build_index(q);
    const auto t = hecke::build_hecke_table(10);
    const auto r = moment(ci, t, 1, 2.0);
    // T(chi) = chi(1) = 1, so S_k counts the q-2 non-principal characters.
    CHECK(r.s_k == doctest::Approx(double(q - 2)).epsilon(1e-12));
    CHECK_FALSE(r.x_above_sqrt_q);
}

TEST_CASE("moment matches a direct evaluation at fractional k") {
    const uint64_t q = 101, x = 10;
    const auto ci = chars::build_index(q);
    const auto t = hecke::build_hecke_table(x);
    std::vector<double> coeffs(x + 1, 0.0);
    for (uint64_t n = 1; n <= x; ++n) coeffs[n] = t.at(n);
    for (double k : {2.0, 2.5, 3.0}) {
        double direct = 0.0;
        for (uint64_t a = 1; a < q - 1; ++a)
            direct += std::pow(std::norm(chars::naive_twisted_sum(ci, a, coeffs)), k);
        const auto r = moment(ci, t, x, k);
        CHECK(r.s_k == doctest::Approx(direct).epsilon(1e-9));
        const double expect_norm =
            direct / (double(q - 1) * std::pow(double(x), k) *
                      std::pow(std::log(double(q)), (k - 1) * (k - 1)));
        CHECK(r.normalized == doctest::Approx(expect_norm).epsilon(1e-9));
    }
}

TEST_CASE("second moment identity is exact below the diagonal range") {
    const auto ci = chars::build_index(1009);
    const auto t = hecke::build_hecke_table(40);
    const auto r = moment(ci, t, 31, 2.0);  // 31^2 = 961 < 1009
    CHECK(r.second_moment_residual < 1e-12);
    CHECK_FALSE(r.x_above_sqrt_q);
    const auto warn = moment(ci, t, 40, 2.0);  // 40^2 = 1600 > 1009
    CHECK(warn.x_above_sqrt_q);
}

TEST_CASE("growth scan produces one row per modulus with a fit") {
    const auto qs = prime_ladder(101, 2003, 8);
    const auto t = hecke::build_hecke_table(64);
    XRule rule;  // sqrt
    const auto scan = growth_scan(qs, 2.0, t, rule);
    CHECK(scan.rows.size() == qs.size());
    CHECK(scan.reference_slope == doctest::Approx(1.0));
    CHECK(scan.ci95_lo < scan.ci95_hi);
    for (std::size_t i = 0; i < qs.size(); ++i) {
        CHECK(scan.rows[i].q == qs[i]);
        CHECK(scan.rows[i].x == isqrt_u64(qs[i]));
        CHECK(scan.rows[i].normalized > 0.0);
        CHECK(scan.rows[i].runtime_ms == 0.0);  // timing off by default
    }
}

TEST_CASE("fixed x rule threads through") {
    const auto qs = prime_ladder(101, 499, 4);
    const auto t = hecke::build_hecke_table(16);
    XRule rule;
    rule.kind = XRule::fixed;
    rule.fixed_x = 16;
    const auto scan = growth_scan(qs, 1.5, t, rule);
    for (const auto& r : scan.rows) CHECK(r.x == 16);
}

TEST_CASE("growth scan is deterministic across invocations") {
    const auto qs = prime_ladder(101, 1009, 6);
    const auto t = hecke::build_hecke_table(40);
    XRule rule;
    const auto a = growth_scan(qs, 2.0, t, rule);
    const auto b = growth_scan(qs, 2.0, t, rule);
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].s_k == b.rows[i].s_k);
        CHECK(a.rows[i].normalized == b.rows[i].normalized);
    }
    CHECK(a.fit.slope == b.fit.slope);
}

}
