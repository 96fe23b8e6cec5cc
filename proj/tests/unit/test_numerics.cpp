#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "tml/numerics.hpp"
#include "tml/rng.hpp"

using namespace tml;

TEST_SUITE("numerics") {

TEST_CASE("pairwise sum matches exact rational total") {
    std::vector<double> v;
    for (int i = 1; i <= 1000; ++i) v.push_back(1.0 / 1024.0);
    CHECK(pairwise_sum(v) == doctest::Approx(1000.0 / 1024.0).epsilon(1e-15));
}

TEST_CASE("streaming accumulator equals pairwise over push order") {
    std::vector<double> v;
    for (int i = 0; i < 1234; ++i) v.push_back(std::sin(0.1 * i) / (i + 1.0));
    PairwiseAccumulator<double> acc;
    for (double x : v) acc.add(x);
    CHECK(acc.total() == pairwise_sum(v));
}

TEST_CASE("accumulator is chunking independent by construction") {
    std::vector<double> v;
    for (int i = 0; i < 777; ++i) v.push_back(1e16 * ((i % 3) - 1) + 1.0 / (i + 1));
    PairwiseAccumulator<double> a, b;
    for (double x : v) a.add(x);
    // Same pushes, interleaved with totals being read: total() must not
    // perturb subsequent accumulation.
    for (int i = 0; i < 777; ++i) {
        b.add(v[i]);
        if (i % 100 == 0) (void)b.total();
    }
    CHECK(a.total() == b.total());
}

TEST_CASE("adaptive simpson integrates sine exactly enough") {
    const double v = adaptive_simpson([](double x) { return std::sin(x); }, 0.0,
                                      std::numbers::pi, 1e-12);
    CHECK(v == doctest::Approx(2.0).epsilon(1e-10));
}

TEST_CASE("adaptive simpson handles sharp peak") {
    const double v = adaptive_simpson(
        [](double x) { return 1.0 / (1e-4 + x * x); }, -1.0, 1.0, 1e-10);
    const double exact = 2.0 / 1e-2 * std::atan(1.0 / 1e-2);
    CHECK(v == doctest::Approx(exact).epsilon(1e-8));
}

TEST_CASE("periodic mean of squared cosine") {
    const double v = periodic_mean(
        [](double t) { return std::cos(t) * std::cos(t); }, 2.0 * std::numbers::pi);
    CHECK(v == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("linear fit recovers an exact line") {
    std::vector<double> x = {1, 2, 3, 4, 5}, y;
    for (double xi : x) y.push_back(3.5 * xi - 2.25);
    const auto f = linear_fit(x, y);
    CHECK(f.slope == doctest::Approx(3.5).epsilon(1e-12));
    CHECK(f.intercept == doctest::Approx(-2.25).epsilon(1e-12));
    CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("quadratic fit recovers exact coefficients") {
    std::vector<double> u = {0.1, 0.2, 0.3, 0.5, 0.8}, y;
    for (double ui : u) y.push_back(1.5 - 2.0 * ui + 0.75 * ui * ui);
    const auto c = quadratic_fit(u, y);
    CHECK(c[0] == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(c[1] == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(c[2] == doctest::Approx(0.75).epsilon(1e-9));
}

TEST_CASE("log sum exp survives large magnitudes") {
    std::vector<double> v = {1000.0, 1000.0};
    CHECK(log_sum_exp(v) == doctest::Approx(1000.0 + std::log(2.0)).epsilon(1e-14));
    std::vector<double> w = {-1e5, -1e5 + 1.0};
    CHECK(log_sum_exp(w) ==
          doctest::Approx(-1e5 + 1.0 + std::log1p(std::exp(-1.0))).epsilon(1e-12));
}

TEST_CASE("mean and stderr on a known triple") {
    std::vector<double> v = {1.0, 2.0, 3.0};
    const auto m = mean_and_stderr(v);
    CHECK(m.mean == doctest::Approx(2.0));
    CHECK(m.stderr_ == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-12));
    CHECK(m.n == 3);
}

TEST_CASE("counter rng is order independent and seed sensitive") {
    CHECK(uniform01(1, 42) == uniform01(1, 42));
    CHECK(uniform01(1, 42) != uniform01(2, 42));
    CHECK(uniform01(1, 42) != uniform01(1, 43));
    double lo = 1.0, hi = 0.0, mean = 0.0;
    const int n = 20000;
    for (int i = 0; i < n; ++i) {
        const double u = uniform01(7, i);
        lo = std::min(lo, u);
        hi = std::max(hi, u);
        mean += u;
    }
    mean /= n;
    CHECK(lo >= 0.0);
    CHECK(hi < 1.0);
    CHECK(std::abs(mean - 0.5) < 0.02);
}

TEST_CASE("unit phase lies on the circle") {
    for (int i = 0; i < 100; ++i) {
        const auto z = unit_phase(3, i);
        CHECK(std::abs(std::abs(z) - 1.0) < 1e-12);
    }
}

TEST_CASE("derived seeds do not collide over a sample run") {
    std::vector<uint64_t> seen;
    for (uint64_t i = 0; i < 10000; ++i) seen.push_back(derive_seed(99, i));
    std::sort(seen.begin(), seen.end());
    CHECK(std::adjacent_find(seen.begin(), seen.end()) == seen.end());
}

}
