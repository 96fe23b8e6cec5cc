#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "tml/hecke.hpp"
#include "tml/mollifier.hpp"
#include "tml/primes.hpp"
#include "tml/rng.hpp"

using namespace tml;
using namespace tml::moll;

TEST_SUITE("mollifier") {

TEST_CASE("mode names round trip") {
    CHECK(mode_name(Mode::desk) == "desk");
    CHECK(mode_name(Mode::paper_faithful) == "paper_faithful");
    CHECK(parse_mode("desk") == Mode::desk);
    CHECK(parse_mode("paper_faithful") == Mode::paper_faithful);
    CHECK_THROWS(parse_mode("neither"));
}

TEST_CASE("schedule at log y = e^2 lands on the worked shape") {
    // x = e^{2 e^2}, c0 = 2: L = loglog y = 2, so L^2 = 4 forces M = 2 and
    // J_1 = round(2^{3/2}) = 3; the tail keeps the desk floor J_2 = 2.
    const double x = std::exp(2.0 * std::exp(2.0));
    BuildOptions opt;
    opt.mode = Mode::desk;
    const auto s = build_schedule(x, 2.0, 2.0, opt);
    CHECK(s.m_count == 2);
    CHECK(s.j(1) == 3);
    CHECK(s.j(2) == 2);
    CHECK(s.y == doctest::Approx(std::exp(std::exp(2.0))).epsilon(1e-12));
    CHECK(s.y_at(1) == doctest::Approx(std::exp(std::exp(2.0) / 20.0)).epsilon(1e-12));
    CHECK(s.y_at(0) == 1.0);
    CHECK(s.loglog_y == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("twentieth root chain connects the edges") {
    BuildOptions opt;
    const auto s = build_schedule(1e30, 2.0, 5.0, opt);
    for (std::size_t m = 1; m < s.m_count; ++m)
        CHECK(s.y_at(m) == doctest::Approx(std::pow(s.y_at(m + 1), 1.0 / 20.0))
                               .epsilon(1e-12));
    CHECK(s.y_at(s.m_count) == doctest::Approx(s.y).epsilon(1e-12));
}

TEST_CASE("infeasible parameters are rejected loudly") {
    BuildOptions opt;
    CHECK_THROWS_AS((void)build_schedule(1e6, 2.0, 40.0, opt), std::domain_error);
    CHECK_THROWS_AS((void)build_schedule(10.0, 2.0, 40.0, opt), std::domain_error);
    CHECK_THROWS((void)build_schedule(1e12, 1.0, 8.0, opt));  // k < 2
    CHECK_THROWS((void)build_schedule(1e12, 2.0, 0.5, opt));  // c0 <= 1
}

TEST_CASE("paper mode records its structural flags") {
    BuildOptions opt;
    opt.mode = Mode::paper_faithful;
    const auto s = build_schedule(1e10, 2.0, 10.0, opt);
    CHECK(s.mode == Mode::paper_faithful);
    CHECK(s.has_flag("paper_jm_clamped"));
    CHECK(s.has_flag("paper_jm_infeasible"));
    const auto len = paper_length_constraint(s);
    CHECK_FALSE(len.satisfied);
    CHECK(s.has_flag("length_constraint_violated"));
}

TEST_CASE("manual schedule for worked examples") {
    const auto s = manual_schedule(1000.0, 2.0, {3.0, 9.0}, {2, 1}, Mode::desk);
    CHECK(s.m_count == 2);
    CHECK(s.y == 9.0);
    CHECK(s.j(1) == 2);
    CHECK(s.j(2) == 1);
    CHECK(s.has_flag("manual"));
    CHECK_THROWS((void)manual_schedule(1000.0, 2.0, {9.0, 3.0}, {1, 1}, Mode::desk));
    CHECK_THROWS((void)manual_schedule(1000.0, 2.0, {3.0, 9.0}, {1}, Mode::desk));
}

TEST_CASE("interval weight of a single prime interval") {
    const auto pl = primes::sieve(100);
    // Interval (2, 3] holds only p = 3: 4 (2/3 + 3/9) = 4.
    CHECK(prime_interval_weight(pl, 2.0, 3.0) == doctest::Approx(4.0).epsilon(1e-12));
    // Empty interval.
    CHECK(prime_interval_weight(pl, 23.0, 28.0) == doctest::Approx(0.0));
    // Additivity over a split.
    const double whole = prime_interval_weight(pl, 2.0, 97.0);
    const double split = prime_interval_weight(pl, 2.0, 13.0) +
                         prime_interval_weight(pl, 13.0, 97.0);
    CHECK(whole == doctest::Approx(split).epsilon(1e-12));
}

TEST_CASE("estaj rows compare the scaled weight against J") {
    const auto pl = primes::sieve(1000);
    const auto s = manual_schedule(1e6, 2.0, {3.0, 9.0}, {50'000, 1}, Mode::desk);
    const auto rows = check_estaj(s, pl);
    REQUIRE(rows.size() == 2);
    // Interval (1, 3]: A = 4(2/2 + 3/4) + 4(2/3 + 1/3) = 7 + 4 = 11.
    CHECK(rows[0].lhs == doctest::Approx(1e4 * 11.0).epsilon(1e-12));
    CHECK(rows[0].satisfied == (rows[0].lhs <= 50'000));
    CHECK_FALSE(rows[1].satisfied);
}

TEST_CASE("dyadic interval ladder partitions the positive axis") {
    const double k = 2.0;
    const uint64_t j = 8;
    const double base = double(j) / (100.0 * k);
    CHECK(interval_index(0.0, k, j) == 0);
    CHECK(interval_index(base, k, j) == 0);
    CHECK(interval_index(base * 1.5, k, j) == 1);
    CHECK(interval_index(base * 2.0, k, j) == 1);
    CHECK(interval_index(base * 2.1, k, j) == 2);
    CHECK(interval_index(base * 64.0, k, j) == 6);
    CHECK(interval_inf(0, k, j) == 0.0);
    CHECK(interval_inf(1, k, j) == doctest::Approx(base));
    CHECK(interval_inf(3, k, j) == doctest::Approx(base * 4.0));
    // Every t lands in exactly the interval whose closure contains it.
    for (int i = 0; i < 500; ++i) {
        const double t = std::exp(12.0 * uniform01(3, i) - 4.0);
        const unsigned n = interval_index(t, k, j);
        CHECK(t >= interval_inf(n, k, j) - 1e-12);
        if (n > 0) CHECK(t <= interval_inf(n + 1, k, j) + 1e-12);
    }
}

TEST_CASE("interval sum on (2,3] with trivial twist") {
    const auto pl = primes::sieve(10);
    const auto t = hecke::build_hecke_table(10);
    const auto s = manual_schedule(1000.0, 2.0, {2.0, 3.0}, {1, 1}, Mode::desk);
    const auto ones = [](uint64_t) { return cplx(1.0, 0.0); };
    const cplx d = interval_sum(s, 2, 0, t, pl, ones);
    const double expect = t.at(3) / std::sqrt(3.0) + (t.at(9) - 1.0) / 6.0;
    CHECK(d.real() == doctest::Approx(expect).epsilon(1e-12));
    CHECK(std::abs(d.imag()) < 1e-14);
}

TEST_CASE("interval sum twisted by l oscillates in the stated way") {
    const auto pl = primes::sieve(10);
    const auto t = hecke::build_hecke_table(10);
    const auto s = manual_schedule(1000.0, 2.0, {2.0, 3.0}, {1, 1}, Mode::desk);
    const auto ones = [](uint64_t) { return cplx(1.0, 0.0); };
    const cplx d = interval_sum(s, 2, 1, t, pl, ones);
    const double lp = std::log(3.0);
    const cplx tw1 = std::exp(cplx(0.0, -lp / s.log_y));
    const cplx tw2 = std::exp(cplx(0.0, -2.0 * lp / s.log_y));
    const cplx expect = t.at(3) / std::sqrt(3.0) * tw1 + (t.at(9) - 1.0) / 6.0 * tw2;
    CHECK(std::abs(d - expect) < 1e-12);
}

TEST_CASE("truncated weight approximates the exponential at deep truncation") {
    for (double re : {-1.0, -0.3, 0.0, 0.4, 1.0}) {
        const double r = mollifier_factor(re, 2.0, 40);
        CHECK(std::abs(r - std::exp(2.0 * re)) < 1e-10);
        CHECK(mollifier_factor_log(re, 2.0, 40) ==
              doctest::Approx(std::log(r)).epsilon(1e-10));
        CHECK(truncation_error(re, 2.0, 40) < 1e-12);
    }
    // k = 3 doubles the rate in the exponent.
    CHECK(mollifier_factor(0.5, 3.0, 60) == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
}

TEST_CASE("majorant parameters cover the three cases") {
    const auto s = manual_schedule(1e6, 2.0, {50.0}, {6}, Mode::desk);
    const double base = double(s.j(1)) / (100.0 * s.k);
    const auto low = majorant_params_from_draw(s, 1, base / 2.0);
    CHECK(low.u_case == UCase::truncated);
    const auto mid = majorant_params_from_draw(s, 1, base * 3.0);
    CHECK(mid.u_case == UCase::middle);
    CHECK(mid.w > 0.0);
    const double w_edge = 100.0 * s.k * double(s.j(1));
    const auto high = majorant_params_from_draw(s, 1, w_edge * 4.0);
    CHECK(high.u_case == UCase::upper);
    // At the shared boundary the exponential branch dominates the factorial one.
    CHECK(std::isfinite(boundary_case_log_ratio(2.0, 6)));
    CHECK(boundary_case_log_ratio(2.0, 6) > 0.0);
}

TEST_CASE("majorant dominates the weight on synthetic draws") {
    const auto s = manual_schedule(1e8, 2.0, {200.0}, {5}, Mode::desk);
    const auto audit = lemma51_audit(s, 1, 2000, 21);
    CHECK(audit.draws == 2000);
    CHECK(audit.violations == 0);
    CHECK(audit.all_cases_seen);
    CHECK(audit.partition_ok);
    CHECK(audit.passed);
    CHECK(audit.max_constant < 10.0);
}

TEST_CASE("error tail bound under the weight hypothesis") {
    // One prime near 1e6: A = 4(2/p + 3/p^2) ~ 8e-6, so 1e4 (k-1)^2 A << J
    // and the lemma promises tail <= e^{-2J}.
    const double a_m = 4.0 * (2.0 / 1e6 + 3.0 / 1e12);
    for (uint64_t j : {3, 5, 8}) {
        const double tail = err_tail_sum(2.0, j, a_m);
        CHECK(tail > 0.0);
        CHECK(tail <= std::exp(-2.0 * double(j)));
    }
    // Monotone in the interval weight.
    CHECK(err_tail_sum(2.0, 5, 1e-5) < err_tail_sum(2.0, 5, 1e-3));
}

TEST_CASE("zerocase error stays under e^{ -J } on a small interval") {
    const auto pl = primes::sieve(10);
    const auto t = hecke::build_hecke_table(10);
    const auto s = manual_schedule(1e6, 2.0, {7.0}, {12}, Mode::desk);
    const auto r = zerocase_audit(s, 1, 0, 1, t, pl, 2000, 5);
    CHECK(r.bound == doctest::Approx(std::exp(-12.0)));
    CHECK(r.ratio <= 1.0);
}

TEST_CASE("pair exponential closed form matches monte carlo") {
    // The closed form drops per-prime corrections of order 1/p^2, so the
    // comparison needs an interval of large primes; (1000, 3000] keeps the
    // systematic part well under the monte carlo band.
    const auto pl = primes::sieve(3000);
    const auto t = hecke::build_hecke_table(3000);
    const auto s = manual_schedule(1e9, 2.0, {1000.0, 3000.0}, {4, 4}, Mode::desk);
    const double cf = pair_exponential_log_closed_form(s, 2, 0, 1, t, pl);
    CHECK(cf > 0.1);
    const auto mc = pair_exponential_mc(s, 2, 0, 1, t, pl, 20'000, 3);
    CHECK(std::abs(mc.mean - std::exp(cf)) < 3.0 * mc.stderr_ + 0.01 * std::exp(cf));
}

TEST_CASE("pair exponential decays in the twist separation") {
    const auto pl = primes::sieve(2000);
    const auto t = hecke::build_hecke_table(2000);
    const auto s = manual_schedule(1e30, 2.0, {2000.0}, {4}, Mode::desk);
    const auto prof = l_separation_profile(s, t, pl, 6);
    REQUIRE(prof.size() == 7);
    CHECK(prof[0].dl == 0);
    // Aligned twists dominate separated ones.
    CHECK(prof[0].log_total > prof[3].log_total);
    CHECK(prof[0].log_total > prof[6].log_total);
}

TEST_CASE("weight total is nonnegative across random twists") {
    const auto pl = primes::sieve(30);
    const auto t = hecke::build_hecke_table(30);
    const auto s = manual_schedule(1e4, 2.0, {5.0, 30.0}, {2, 1}, Mode::desk);
    for (uint64_t seed = 1; seed <= 10; ++seed) {
        const auto ev = seeded_evaluator(seed);
        CHECK(weight_total(s, t, pl, ev) >= 0.0);
    }
}

TEST_CASE("interval decay audit reports decaying bounds") {
    const auto pl = primes::sieve(10);
    const auto t = hecke::build_hecke_table(10);
    const auto s = manual_schedule(1e6, 2.0, {7.0}, {4}, Mode::desk);
    const auto audit = interval_decay_audit(s, 1, 0, 0, t, pl, 4, 2000, 9);
    REQUIRE(audit.rows.size() >= 4);
    CHECK(audit.reference_slope == doctest::Approx(-2.0));
    // The log-bound ladder -2 log(W+1) strictly decreases past the base cell.
    for (std::size_t i = 2; i < audit.rows.size(); ++i)
        CHECK(audit.rows[i].log_bound < audit.rows[i - 1].log_bound);
    CHECK(audit.fitted_slope < 0.0);
}

TEST_CASE("schedule exposes even a values scaled by k and J") {
    const auto s = manual_schedule(1e6, 2.0, {7.0}, {4}, Mode::desk);
    CHECK(s.a(1) == 2 * uint64_t(std::ceil(200.0 * 2.0 * 4.0)));
    CHECK(s.a(1) % 2 == 0);
    CHECK(s.l_range() == int(std::floor(s.log_y / 2.0)));
}

}
