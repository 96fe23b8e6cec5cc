#include "tml/primes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "tml/numerics.hpp"
#include "tml/report.hpp"
#include "tml/version.hpp"

namespace tml::primes {

std::size_t PrimeList::count_below(uint64_t x) const {
    if (!covers(x)) throw std::out_of_range("PrimeList: query beyond sieve bound");
    return std::size_t(std::upper_bound(primes.begin(), primes.end(), x) - primes.begin());
}

PrimeList sieve(uint64_t bound) {
    if (bound > (uint64_t(1) << 31))
        throw std::length_error("sieve: bound exceeds the dense-sieve capacity");
    PrimeList pl;
    pl.bound = bound;
    if (bound < 2) return pl;
    std::vector<uint8_t> comp(bound + 1, 0);
    for (uint64_t i = 2; i * i <= bound; ++i)
        if (!comp[i])
            for (uint64_t j = i * i; j <= bound; j += i) comp[j] = 1;
    for (uint64_t i = 2; i <= bound; ++i)
        if (!comp[i]) pl.primes.push_back(i);
    return pl;
}

void for_each_prime(uint64_t lo, uint64_t hi, const std::function<void(uint64_t)>& visit) {
    if (hi <= lo) return;
    const uint64_t root = uint64_t(std::sqrt(double(hi))) + 2;
    PrimeList base = sieve(root);
    const uint64_t seg = 1 << 20;
    std::vector<uint8_t> comp(seg);
    for (uint64_t start = lo + 1; start <= hi; start += seg) {
        const uint64_t end = std::min(hi, start + seg - 1);
        const uint64_t width = end - start + 1;
        std::fill(comp.begin(), comp.begin() + width, 0);
        for (uint64_t p : base.primes) {
            if (p * p > end) break;
            uint64_t first = std::max(p * p, ((start + p - 1) / p) * p);
            for (uint64_t j = first; j <= end; j += p) comp[j - start] = 1;
        }
        for (uint64_t i = 0; i < width; ++i) {
            const uint64_t n = start + i;
            if (n >= 2 && !comp[i]) visit(n);
        }
    }
}

double mertens_sum(uint64_t x, const PrimeList& pl) {
    if (!pl.covers(x)) throw std::out_of_range("mertens_sum: x beyond sieve bound");
    PairwiseAccumulator<double> acc;
    for (uint64_t p : pl.primes) {
        if (p > x) break;
        acc.add(1.0 / double(p));
    }
    return acc.total();
}

double lambda_sq_mertens(uint64_t x, const hecke::HeckeTable& t, const PrimeList& pl) {
    if (!pl.covers(x)) throw std::out_of_range("lambda_sq_mertens: x beyond sieve bound");
    if (!t.covers(x)) throw std::out_of_range("lambda_sq_mertens: x beyond table limit");
    PairwiseAccumulator<double> acc;
    for (uint64_t p : pl.primes) {
        if (p > x) break;
        const double l = t.lambda[p];
        acc.add(l * l / double(p));
    }
    return acc.total();
}

namespace {

constexpr double kEE = 15.154262241479262;  // e^e

struct Regime {
    int id;
    double envelope;
};

Regime cosine_regime(uint64_t x, double alpha) {
    const double la = std::abs(alpha);
    const double inv_log_x = 1.0 / std::log(double(x));
    if (la <= inv_log_x) return {0, std::log(std::log(double(x)))};
    if (la <= 10.0) return {1, std::log(1.0 / la)};
    return {2, std::log(std::log(la))};
}

void check_cosine_domain(uint64_t x, double beta) {
    if (x < 3) throw std::domain_error("cosine_prime_sum: x >= 3 required");
    const double cap = 10.0 / std::log(double(x));
    if (beta < 0.0 || beta > cap)
        throw std::domain_error("cosine_prime_sum: beta outside [0, 10/log x]");
}

}  // namespace

CosineSum cosine_prime_sum(uint64_t x, double alpha, double beta, const PrimeList& pl) {
    check_cosine_domain(x, beta);
    if (!pl.covers(x)) throw std::out_of_range("cosine_prime_sum: x beyond sieve bound");
    PairwiseAccumulator<double> acc;
    for (uint64_t p : pl.primes) {
        if (p > x) break;
        const double lp = std::log(double(p));
        acc.add(std::cos(alpha * lp) / std::pow(double(p), 1.0 + beta));
    }
    const Regime r = cosine_regime(x, alpha);
    return {acc.total(), r.id, r.envelope};
}

CosineSum cosine_prime_sum_sym(uint64_t x, double alpha, double beta,
                               const hecke::HeckeTable& t, const PrimeList& pl) {
    check_cosine_domain(x, beta);
    if (!pl.covers(x)) throw std::out_of_range("cosine_prime_sum_sym: x beyond sieve bound");
    if (!t.covers(x)) throw std::out_of_range("cosine_prime_sum_sym: x beyond table limit");
    PairwiseAccumulator<double> acc;
    for (uint64_t p : pl.primes) {
        if (p > x) break;
        const double lp = std::log(double(p));
        const double l2 = t.lambda[p] * t.lambda[p] - 1.0;  // lambda(p^2)
        acc.add(l2 * std::cos(alpha * lp) / std::pow(double(p), 1.0 + beta));
    }
    CosineSum out;
    out.value = acc.total();
    out.regime = cosine_regime(x, alpha).id;
    out.envelope = 3.0 * std::log(std::log(std::abs(alpha) + kEE));
    return out;
}

std::complex<double> sym2_local_factor(double lambda_p2, std::complex<double> s, double p) {
    const std::complex<double> ps = std::exp(-s * std::log(p));  // p^{-s}
    const std::complex<double> inv =
        1.0 - lambda_p2 * ps + lambda_p2 * ps * ps - ps * ps * ps;
    return 1.0 / inv;
}

TruncatedEuler sym2_L_truncated(std::complex<double> s, uint64_t P,
                                const hecke::HeckeTable& t, const PrimeList& pl) {
    if (s.real() <= 1.0)
        throw std::domain_error("sym2_L_truncated: requires Re s > 1");
    if (!pl.covers(P)) throw std::out_of_range("sym2_L_truncated: P beyond sieve bound");
    if (!t.covers(P)) throw std::out_of_range("sym2_L_truncated: P beyond table limit");
    TruncatedEuler out;
    std::complex<double> log_acc = 0.0;
    for (uint64_t p : pl.primes) {
        if (p > P) break;
        const double l2 = t.lambda[p] * t.lambda[p] - 1.0;
        log_acc += std::log(sym2_local_factor(l2, s, double(p)));
        ++out.primes_used;
    }
    out.value = std::exp(log_acc);
    // |log tail| <= sum_{p > P} 3 p^{-sigma} + O(p^{-2 sigma}); crude prime
    // sum estimate via the integral of 3 u^{-sigma}/log u.
    const double sigma = s.real();
    const double Pd = double(P);
    out.log_tail_bound = (sigma > 1.0)
        ? 3.5 * std::pow(Pd, 1.0 - sigma) / ((sigma - 1.0) * std::log(Pd))
        : std::numeric_limits<double>::infinity();
    return out;
}

double L1_sym2_series(const hecke::HeckeTable& t, uint64_t T, double* cauchy_diff) {
    if (T < 4) throw std::invalid_argument("L1_sym2_series: T too small");
    PairwiseAccumulator<double> acc;
    double at_half = 0.0;
    for (uint64_t n = 1; n <= T; ++n) {
        acc.add(hecke::lambda_of_square(t, n) / double(n));
        if (n == T / 2) at_half = acc.total();
    }
    const double full = acc.total();
    if (cauchy_diff) *cauchy_diff = std::abs(full - at_half) * kZeta2;
    return kZeta2 * full;
}

namespace {

std::vector<std::pair<uint64_t, unsigned>> factorize(uint64_t n) {
    std::vector<std::pair<uint64_t, unsigned>> f;
    for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        f.emplace_back(p, e);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

// sum_j |lambda(p^{v+j})| |lambda(p^j)| p^{-j*expo}, truncated at relative
// 1e-15. Terms grow polynomially in j while the denominator is geometric.
double local_cross_series(const hecke::HeckeTable& t, uint64_t p, unsigned v, double expo) {
    const double lp = t.at(p);
    const double q = std::pow(double(p), -expo);
    double sum = 0.0;
    // lambda(p^{-1}) = 0 closes the recursion at v = 0.
    double lv_prev = (v == 0) ? 0.0 : hecke::lambda_prime_power(lp, v - 1);
    double lv = hecke::lambda_prime_power(lp, v);
    double lj_prev = 0.0, lj = 1.0;  // lambda(p^{j-1}), lambda(p^j) at j=0
    double qj = 1.0;
    for (unsigned j = 0; j < 2000; ++j) {
        const double term = std::abs(lv) * std::abs(lj) * qj;
        sum += term;
        if (j > 4 && term < 1e-15 * std::max(sum, 1e-300)) return sum;
        // advance lambda(p^{v+j}) and lambda(p^j) by the recursion
        const double lv_next = lp * lv - lv_prev;
        lv_prev = lv;
        lv = lv_next;
        const double lj_next = (j == 0) ? lp : lp * lj - lj_prev;
        lj_prev = lj;
        lj = lj_next;
        qj *= q;
    }
    throw std::runtime_error("local_cross_series: no convergence at p=" + std::to_string(p));
}

}  // namespace

double p1_factor(uint64_t c, const hecke::HeckeTable& t) {
    if (c == 0) throw std::invalid_argument("p1_factor: c must be >= 1");
    double out = 1.0;
    for (const auto& [p, v] : factorize(c)) out *= local_cross_series(t, p, v, 1.0);
    return out;
}

double p2_factor(uint64_t c, const hecke::HeckeTable& t) {
    if (c == 0) throw std::invalid_argument("p2_factor: c must be >= 1");
    double out = 1.0;
    for (const auto& [p, v] : factorize(c)) out *= local_cross_series(t, p, v, 0.75);
    return out;
}

double h_value(const hecke::HeckeTable& t, uint64_t p, int power, double k) {
    if (power != 1 && power != 2)
        throw std::invalid_argument("h_value: defined only at p and p^2");
    const double lp = t.at(p);
    if (power == 1) return (k - 1.0) * lp;
    const double alpha2_plus_beta2 = lp * lp - 2.0;  // = lambda(p^2) - 1
    return 0.5 * k * (k - 1.0) * alpha2_plus_beta2 + (k - 1.0) * (k - 1.0);
}

double p3_factor(uint64_t c, double k, const hecke::HeckeTable& t) {
    if (c == 0) throw std::invalid_argument("p3_factor: c must be >= 1");
    double out = 1.0;
    for (const auto& [p, v] : factorize(c)) {
        (void)v;
        out *= std::abs(h_value(t, p, 1, k)) + std::abs(h_value(t, p, 2, k)) / double(p);
    }
    return out;
}

DivisorConstrainedSum divisor_constrained_lambda_sum(uint64_t x, uint64_t c,
                                                     const hecke::HeckeTable& t,
                                                     double L1) {
    if (c == 0 || x == 0) throw std::invalid_argument("divisor_constrained_lambda_sum: x, c >= 1");
    if (!t.covers(x)) throw std::out_of_range("divisor_constrained_lambda_sum: x beyond table");
    DivisorConstrainedSum out;

    PairwiseAccumulator<double> acc;
    for (uint64_t n = c; n <= x; n += c) acc.add(t.lambda[n] * t.lambda[n]);
    out.exact = acc.total();

    double local = 1.0;
    for (const auto& [p, v] : factorize(c)) {
        const double lp = t.at(p);
        // S_p(v) = sum_j lambda(p^{v+j})^2 p^{-j}
        double s = 0.0;
        double prev = (v == 0) ? 0.0 : hecke::lambda_prime_power(lp, v - 1);
        double cur = hecke::lambda_prime_power(lp, v);
        double pj = 1.0;
        for (unsigned j = 0; j < 2000; ++j) {
            const double term = cur * cur * pj;
            s += term;
            if (j > 4 && term < 1e-16 * std::max(s, 1e-300)) break;
            const double next = lp * cur - prev;
            prev = cur;
            cur = next;
            pj /= double(p);
        }
        const double pd = double(p);
        const double zeta_p_ratio = pd / (pd + 1.0);  // zeta_p(2)/zeta_p(1)
        const double l2 = lp * lp - 1.0;
        const double Lp1 = std::abs(sym2_local_factor(l2, 1.0, pd));
        local *= s * zeta_p_ratio / Lp1;
    }
    out.main_term = (double(x) / double(c)) * local * L1 / kZeta2;
    out.rel_gap = std::abs(out.exact - out.main_term) /
                  std::max(std::abs(out.main_term), 1e-300);
    return out;
}

namespace {

ConstantFit fit_from_grid(const std::vector<uint64_t>& grid, const std::vector<double>& sums) {
    std::vector<double> u(grid.size()), r(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double lx = std::log(double(grid[i]));
        u[i] = 1.0 / lx;
        r[i] = sums[i] - std::log(lx);
    }
    const auto coeffs = quadratic_fit(u, r);
    ConstantFit fit;
    fit.constant = coeffs[0];
    fit.u_coeff = coeffs[1];
    fit.u2_coeff = coeffs[2];
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double pred = coeffs[0] + coeffs[1] * u[i] + coeffs[2] * u[i] * u[i];
        fit.max_abs_residual = std::max(fit.max_abs_residual, std::abs(r[i] - pred));
    }
    fit.grid = grid;
    fit.sums = sums;
    return fit;
}

}  // namespace

std::vector<uint64_t> geometric_grid(uint64_t lo, uint64_t hi, int points_per_decade) {
    std::vector<uint64_t> g;
    const double step = std::pow(10.0, 1.0 / points_per_decade);
    for (double v = double(lo); v < double(hi) * 0.999; v *= step)
        g.push_back(uint64_t(v + 0.5));
    g.push_back(hi);
    g.erase(std::unique(g.begin(), g.end()), g.end());
    return g;
}

ConstantFit fit_prime_reciprocal_constant(uint64_t grid_min, uint64_t grid_max,
                                          int points_per_decade) {
    if (grid_min < 100 || grid_max <= grid_min)
        throw std::invalid_argument("fit_prime_reciprocal_constant: bad grid");
    const std::vector<uint64_t> grid = geometric_grid(grid_min, grid_max, points_per_decade);
    std::vector<double> sums;
    PairwiseAccumulator<double> acc;
    std::size_t gi = 0;
    for_each_prime(0, grid_max, [&](uint64_t p) {
        while (gi < grid.size() && p > grid[gi]) {
            sums.push_back(acc.total());
            ++gi;
        }
        acc.add(1.0 / double(p));
    });
    while (gi < grid.size()) {
        sums.push_back(acc.total());
        ++gi;
    }
    return fit_from_grid(grid, sums);
}

ConstantFit fit_lambda_sq_constant(const hecke::HeckeTable& t, const PrimeList& pl,
                                   uint64_t grid_min, uint64_t grid_max,
                                   int points_per_decade) {
    if (grid_max == 0) grid_max = t.limit;
    if (!t.covers(grid_max) || !pl.covers(grid_max))
        throw std::out_of_range("fit_lambda_sq_constant: grid beyond table/sieve");
    const std::vector<uint64_t> grid = geometric_grid(grid_min, grid_max, points_per_decade);
    std::vector<double> sums;
    PairwiseAccumulator<double> acc;
    std::size_t gi = 0;
    for (uint64_t p : pl.primes) {
        if (p > grid_max) break;
        while (gi < grid.size() && p > grid[gi]) {
            sums.push_back(acc.total());
            ++gi;
        }
        const double l = t.lambda[p];
        acc.add(l * l / double(p));
    }
    while (gi < grid.size()) {
        sums.push_back(acc.total());
        ++gi;
    }
    return fit_from_grid(grid, sums);
}

Constants compute_constants(const hecke::HeckeTable& t, const PrimeList& pl) {
    Constants c;
    const ConstantFit f1 = fit_prime_reciprocal_constant();
    c.b1 = f1.constant;
    c.provenance_b1 =
        "quadratic fit of sum_{p<=x} 1/p - loglog x in 1/log x over geometric grid "
        "[1e4, 1e8], 2 points per decade; max fit residual " +
        io::format_double(f1.max_abs_residual);
    const ConstantFit f2 = fit_lambda_sq_constant(t, pl);
    c.b2 = f2.constant;
    c.provenance_b2 =
        "quadratic fit of sum_{p<=x} lambda(p)^2/p - loglog x in 1/log x over geometric "
        "grid [1e3, " + std::to_string(f2.grid.back()) + "], 2 points per decade; max fit residual " +
        io::format_double(f2.max_abs_residual);
    c.T_truncation = 10'000;
    double cauchy = 0.0;
    c.L1_sym2 = L1_sym2_series(t, c.T_truncation, &cauchy);
    c.provenance_L1 =
        "zeta(2) * sum_{n<=T} lambda(n^2)/n at T=" + std::to_string(c.T_truncation) +
        "; Cauchy difference vs T/2: " + io::format_double(cauchy);
    return c;
}

void write_constants(const std::string& path, const Constants& c) {
    nlohmann::json j;
    j["b1"] = c.b1;
    j["b2"] = c.b2;
    j["L1_sym2"] = c.L1_sym2;
    j["T_truncation"] = c.T_truncation;
    j["provenance"] = {
        {"b1", c.provenance_b1},
        {"b2", c.provenance_b2},
        {"L1_sym2", c.provenance_L1},
        {"version", kVersion},
    };
    io::write_json(path, j);
}

Constants load_constants(const std::string& path) {
    const nlohmann::json j = nlohmann::json::parse(io::read_file(path));
    Constants c;
    c.b1 = j.at("b1").get<double>();
    c.b2 = j.at("b2").get<double>();
    c.L1_sym2 = j.at("L1_sym2").get<double>();
    c.T_truncation = j.at("T_truncation").get<uint64_t>();
    if (j.contains("provenance")) {
        const auto& p = j["provenance"];
        if (p.contains("b1")) c.provenance_b1 = p["b1"].get<std::string>();
        if (p.contains("b2")) c.provenance_b2 = p["b2"].get<std::string>();
        if (p.contains("L1_sym2")) c.provenance_L1 = p["L1_sym2"].get<std::string>();
    }
    return c;
}

}  // namespace tml::primes
