#include "tml/steinhaus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tml/parallel.hpp"
#include "tml/rng.hpp"

namespace tml::rmf {

cplx SteinhausSample::f_prime(uint64_t p) const {
    const auto it = std::lower_bound(primes.begin(), primes.end(), p);
    if (it == primes.end() || *it != p)
        throw std::out_of_range("SteinhausSample: prime outside sample support");
    return phases[std::size_t(it - primes.begin())];
}

SteinhausSample make_sample(const primes::PrimeList& pl, uint64_t y, uint64_t seed) {
    if (!pl.covers(y)) throw std::out_of_range("make_sample: y beyond sieve bound");
    SteinhausSample s;
    s.seed = seed;
    s.y = y;
    for (uint64_t p : pl.primes) {
        if (p > y) break;
        s.primes.push_back(p);
        s.phases.push_back(unit_phase(seed, p));
    }
    return s;
}

SteinhausSample resample_above(const SteinhausSample& s, uint64_t y_freeze, uint64_t seed2) {
    SteinhausSample out = s;
    out.seed = seed2;
    for (std::size_t i = 0; i < out.primes.size(); ++i)
        if (out.primes[i] > y_freeze) out.phases[i] = unit_phase(seed2, out.primes[i]);
    return out;
}

std::vector<cplx> f_values(const SteinhausSample& s, std::size_t n_max, FillMode mode) {
    // Smallest-prime-factor sieve, then multiplicative fill f(n) = f(spf) f(n/spf).
    std::vector<uint32_t> spf(n_max + 1, 0);
    for (std::size_t i = 2; i <= n_max; ++i) {
        if (spf[i] != 0) continue;
        for (std::size_t m = i; m <= n_max; m += i)
            if (spf[m] == 0) spf[m] = uint32_t(i);
    }
    std::vector<cplx> f(n_max + 1, cplx(0.0, 0.0));
    if (n_max >= 1) f[1] = 1.0;
    for (std::size_t n = 2; n <= n_max; ++n) {
        const uint64_t p = spf[n];
        if (p > s.y) {
            if (mode == FillMode::all)
                throw std::domain_error("f_values: prime factor above sample cutoff");
            f[n] = 0.0;
            continue;
        }
        f[n] = s.f_prime(p) * f[n / p];
    }
    return f;
}

cplx f_value(const SteinhausSample& s, uint64_t n) {
    if (n == 0) throw std::invalid_argument("f_value: n >= 1 required");
    cplx v = 1.0;
    for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        while (n % p == 0) {
            v *= s.f_prime(p);
            n /= p;
        }
    }
    if (n > 1) v *= s.f_prime(n);
    return v;
}

cplx twisted_partial_sum(const SteinhausSample& s, const hecke::HeckeTable& t, uint64_t x) {
    if (!t.covers(x)) throw std::out_of_range("twisted_partial_sum: x beyond table limit");
    const std::vector<cplx> f = f_values(s, x, FillMode::all);
    PairwiseAccumulator<cplx> acc;
    for (uint64_t n = 1; n <= x; ++n) acc.add(f[n] * t.lambda[n]);
    return acc.total();
}

double euler_product_F(const SteinhausSample& s, const hecke::HeckeTable& t, cplx arg,
                       uint64_t y) {
    if (y > s.y) throw std::out_of_range("euler_product_F: y beyond sample cutoff");
    double log_val = 0.0;
    for (std::size_t i = 0; i < s.primes.size(); ++i) {
        const uint64_t p = s.primes[i];
        if (p > y) break;
        if (!t.covers(p)) throw std::out_of_range("euler_product_F: prime beyond table");
        // (1 - alpha w)(1 - beta w) = 1 - lambda(p) w + w^2 with w = f(p) p^{-arg}.
        const cplx w = s.phases[i] * std::exp(-arg * std::log(double(p)));
        const cplx q = 1.0 - t.lambda[p] * w + w * w;
        const double mag = std::abs(q);
        if (mag < 1e-12)
            throw std::domain_error("euler_product_F: singular local factor at p=" +
                                    std::to_string(p));
        log_val -= std::log(mag);
    }
    return std::exp(log_val);
}

void check_euler_spec(const EulerProductSpec& spec) {
    if (spec.a < 0 || spec.b < 0)
        throw std::domain_error("euler product: exponents must be nonnegative");
    if (spec.z >= spec.y) throw std::domain_error("euler product: need z < y");
    if (spec.sigma1 < 0 || spec.sigma2 < 0)
        throw std::domain_error("euler product: sigma must be nonnegative");
    if (spec.enforce_precondition) {
        const double need =
            100.0 * (1.0 + std::max(spec.a * spec.a, spec.b * spec.b));
        if (double(spec.z) < need)
            throw std::domain_error(
                "euler product: z below 100(1+max(a^2,b^2)); relax enforce_precondition "
                "to explore outside the guaranteed range");
    }
}

namespace {

struct PrimeFactorData {
    double lambda;
    double r1, r2;        // p^{-1/2-sigma}
    double phi1, phi2;    // -t log p
};

std::vector<PrimeFactorData> collect_factors(const EulerProductSpec& spec,
                                             const hecke::HeckeTable& t,
                                             const primes::PrimeList& pl,
                                             std::vector<uint64_t>* out_primes) {
    if (!pl.covers(spec.y)) throw std::out_of_range("euler product: y beyond sieve bound");
    if (!t.covers(spec.y)) throw std::out_of_range("euler product: y beyond table limit");
    std::vector<PrimeFactorData> v;
    for (uint64_t p : pl.primes) {
        if (p < spec.z) continue;
        if (p > spec.y) break;
        const double lp = std::log(double(p));
        PrimeFactorData d;
        d.lambda = t.lambda[p];
        d.r1 = std::exp(-(0.5 + spec.sigma1) * lp);
        d.r2 = std::exp(-(0.5 + spec.sigma2) * lp);
        d.phi1 = -spec.t1 * lp;
        d.phi2 = -spec.t2 * lp;
        v.push_back(d);
        if (out_primes) out_primes->push_back(p);
    }
    return v;
}

// |1 - lambda w + w^2|^{-2a} |...|^{-2b} at f(p) = e^{i theta}.
double local_factor(const PrimeFactorData& d, double a, double b, double theta) {
    double value = 1.0;
    if (a != 0.0) {
        const cplx w = std::polar(d.r1, theta + d.phi1);
        const double m2 = std::norm(1.0 - d.lambda * w + w * w);
        value *= std::exp(-a * std::log(m2));
    }
    if (b != 0.0) {
        const cplx w = std::polar(d.r2, theta + d.phi2);
        const double m2 = std::norm(1.0 - d.lambda * w + w * w);
        value *= std::exp(-b * std::log(m2));
    }
    return value;
}

}  // namespace

double expected_euler_log_closed_form(const EulerProductSpec& spec,
                                      const hecke::HeckeTable& t,
                                      const primes::PrimeList& pl) {
    check_euler_spec(spec);
    if (!pl.covers(spec.y)) throw std::out_of_range("euler product: y beyond sieve bound");
    if (!t.covers(spec.y)) throw std::out_of_range("euler product: y beyond table limit");
    PairwiseAccumulator<double> acc;
    const double dt = spec.t2 - spec.t1;
    for (uint64_t p : pl.primes) {
        if (p < spec.z) continue;
        if (p > spec.y) break;
        const double lp = std::log(double(p));
        const double l2 = t.lambda[p] * t.lambda[p];
        const double inv_p = 1.0 / double(p);
        double term = spec.a * spec.a * l2 * std::exp(-2.0 * spec.sigma1 * lp) * inv_p;
        term += spec.b * spec.b * l2 * std::exp(-2.0 * spec.sigma2 * lp) * inv_p;
        term += 2.0 * spec.a * spec.b * l2 * std::cos(dt * lp) *
                std::exp(-(spec.sigma1 + spec.sigma2) * lp) * inv_p;
        acc.add(term);
    }
    return acc.total();
}

double expected_euler_log_quadrature(const EulerProductSpec& spec,
                                     const hecke::HeckeTable& t,
                                     const primes::PrimeList& pl, double rel_tol) {
    check_euler_spec(spec);
    const std::vector<PrimeFactorData> factors = collect_factors(spec, t, pl, nullptr);
    std::vector<double> logs(factors.size(), 0.0);
    parallel_for(factors.size(), [&](std::size_t i) {
        const PrimeFactorData& d = factors[i];
        const double mean = periodic_mean(
            [&](double theta) { return local_factor(d, spec.a, spec.b, theta); },
            2.0 * std::numbers::pi, rel_tol);
        logs[i] = std::log(mean);
    });
    return pairwise_sum(logs);
}

MeanStderr expected_euler_mc(const EulerProductSpec& spec, const hecke::HeckeTable& t,
                             const primes::PrimeList& pl, std::size_t n_samples,
                             uint64_t seed) {
    check_euler_spec(spec);
    std::vector<uint64_t> ps;
    const std::vector<PrimeFactorData> factors = collect_factors(spec, t, pl, &ps);
    std::vector<double> vals(n_samples);
    parallel_for(n_samples, [&](std::size_t s_idx) {
        const uint64_t s_seed = derive_seed(seed, s_idx);
        double log_prod = 0.0;
        for (std::size_t i = 0; i < factors.size(); ++i) {
            const double theta = 2.0 * std::numbers::pi * uniform01(s_seed, ps[i]);
            log_prod += std::log(local_factor(factors[i], spec.a, spec.b, theta));
        }
        vals[s_idx] = std::exp(log_prod);
    });
    return mean_and_stderr(vals);
}

double divisor_count_on_support(uint64_t n, const std::vector<uint64_t>& P) {
    double d = 1.0;
    for (uint64_t p : P) {
        unsigned e = 0;
        while (n % p == 0) { n /= p; ++e; }
        d *= double(e + 1);
    }
    return d;
}

EvenMomentCheck even_moment_check(const EvenMomentSpec& spec, const primes::PrimeList& pl,
                                  std::size_t n_samples, uint64_t seed) {
    if (spec.c.size() < 2) throw std::invalid_argument("even_moment_check: empty coefficients");
    if (spec.P.size() != spec.a_p.size() || spec.P.size() != spec.a_p2.size())
        throw std::invalid_argument("even_moment_check: prime set and weights misaligned");
    const std::size_t n_max = spec.c.size() - 1;
    uint64_t y = 2;
    for (uint64_t p = 2; p <= n_max; ++p) y = std::max(y, p);
    for (uint64_t p : spec.P) y = std::max(y, p);

    std::vector<double> vals(n_samples);
    parallel_for(n_samples, [&](std::size_t s_idx) {
        const SteinhausSample s = make_sample(pl, y, derive_seed(seed, s_idx));
        const std::vector<cplx> f = f_values(s, n_max, FillMode::all);
        cplx Z(0.0, 0.0);
        for (std::size_t n = 1; n <= n_max; ++n) Z += spec.c[n] * f[n];
        cplx X(0.0, 0.0);
        for (std::size_t i = 0; i < spec.P.size(); ++i) {
            const cplx fp = s.f_prime(spec.P[i]);
            const double pd = double(spec.P[i]);
            X += spec.a_p[i] * fp / std::sqrt(pd) + spec.a_p2[i] * fp * fp / pd;
        }
        const double x2 = std::norm(X);
        double xpow = 1.0;
        for (unsigned e = 0; e < spec.j; ++e) xpow *= x2;
        vals[s_idx] = std::norm(Z) * xpow;
    });

    EvenMomentCheck out;
    const MeanStderr ms = mean_and_stderr(vals);
    out.mc_mean = ms.mean;
    out.mc_stderr = ms.stderr_;

    double weight = 0.0;
    for (std::size_t n = 1; n <= n_max; ++n)
        weight += divisor_count_on_support(n, spec.P) * std::norm(spec.c[n]);
    double base = 0.0;
    for (std::size_t i = 0; i < spec.P.size(); ++i) {
        const double pd = double(spec.P[i]);
        base += 2.0 * std::norm(spec.a_p[i]) / pd + 12.0 * std::norm(spec.a_p2[i]) / (pd * pd);
    }
    double factorial = 1.0;
    for (unsigned e = 2; e <= spec.j; ++e) factorial *= double(e);
    out.bound = weight * factorial * std::pow(base, double(spec.j));
    out.ratio = out.mc_mean / out.bound;
    return out;
}

ParsevalCheck parseval_check(std::span<const double> a, double sigma, double t_max,
                             double quad_tol_factor) {
    if (sigma <= 0.0) throw std::domain_error("parseval_check: sigma > 0 required");
    if (a.size() < 2) throw std::invalid_argument("parseval_check: empty coefficients");
    const std::size_t N = a.size() - 1;

    // Exact left side: A(x) is constant on [n, n+1), and equal to the full
    // sum for x >= N, integrated to infinity in closed form.
    double lhs = 0.0;
    double partial = 0.0;
    for (std::size_t n = 1; n <= N; ++n) {
        partial += a[n];
        const double lo = std::pow(double(n), -2.0 * sigma);
        const double hi = (n < N) ? std::pow(double(n + 1), -2.0 * sigma) : 0.0;
        lhs += partial * partial * (lo - hi) / (2.0 * sigma);
    }

    // Right side: |F(sigma+it)|^2 / |sigma+it|^2, F the Dirichlet polynomial.
    std::vector<double> log_n(N + 1, 0.0), amp(N + 1, 0.0);
    for (std::size_t n = 1; n <= N; ++n) {
        log_n[n] = std::log(double(n));
        amp[n] = a[n] * std::pow(double(n), -sigma);
    }
    auto integrand = [&](double t) {
        cplx F(0.0, 0.0);
        for (std::size_t n = 1; n <= N; ++n)
            F += amp[n] * std::polar(1.0, -t * log_n[n]);
        return std::norm(F) / (sigma * sigma + t * t);
    };
    // a real => |F(sigma-it)| = |F(sigma+it)|; integrate [0, t_max] twice.
    const double quad_tol = std::max(lhs, 1e-12) * quad_tol_factor;
    const double rhs_half = adaptive_simpson(integrand, 0.0, t_max, quad_tol * std::numbers::pi);
    ParsevalCheck out;
    out.lhs_exact = lhs;
    out.rhs_quadrature = 2.0 * rhs_half / (2.0 * std::numbers::pi);

    double mean_f2 = 0.0;
    for (std::size_t n = 1; n <= N; ++n) mean_f2 += amp[n] * amp[n];
    out.rhs_tail_estimate = mean_f2 / (std::numbers::pi * t_max);
    out.rel_gap = std::abs(out.lhs_exact - out.rhs_quadrature) / std::max(lhs, 1e-300);
    return out;
}

RoughBlockSum rough_block_lambda_sum(const hecke::HeckeTable& t, const primes::PrimeList& pl,
                                     uint64_t x, uint64_t r, uint64_t y) {
    if (r < 1) throw std::invalid_argument("rough_block_lambda_sum: r >= 1 required");
    if (!t.covers(x / r)) throw std::out_of_range("rough_block_lambda_sum: block beyond table");
    if (!pl.covers(y)) throw std::out_of_range("rough_block_lambda_sum: y beyond sieve bound");
    const uint64_t lo = x / (r + 1);  // exclusive
    const uint64_t hi = x / r;        // inclusive
    if (hi <= lo) return {0.0, 0.0, 0.0, 0};

    std::vector<uint8_t> rough(hi - lo, 1);
    for (uint64_t p : pl.primes) {
        if (p > y) break;
        uint64_t first = ((lo + 1) + p - 1) / p * p;
        for (uint64_t m = first; m <= hi; m += p) rough[m - lo - 1] = 0;
    }
    RoughBlockSum out;
    PairwiseAccumulator<double> acc;
    for (uint64_t n = lo + 1; n <= hi; ++n) {
        if (!rough[n - lo - 1]) continue;
        if (n == 1) continue;  // 1 has no prime factor; exclude from the block count
        acc.add(t.lambda[n] * t.lambda[n]);
        ++out.survivors;
    }
    out.sum = acc.total();
    out.shape = double(x) / (double(r) * double(r) * std::log(double(y)));
    out.ratio = out.sum / std::max(out.shape, 1e-300);
    return out;
}

}  // namespace tml::rmf
