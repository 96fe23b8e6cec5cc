#include "tml/mollifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "tml/parallel.hpp"
#include "tml/rng.hpp"

namespace tml::moll {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// sum_{i=0}^{j} (c t)^i / i!
double truncated_exp_sum(double c, double t, uint64_t j) {
    const double ct = c * t;
    double term = 1.0, sum = 1.0;
    for (uint64_t i = 1; i <= j; ++i) {
        term *= ct / double(i);
        sum += term;
    }
    return sum;
}

}  // namespace

std::string mode_name(Mode m) {
    return m == Mode::paper_faithful ? "paper_faithful" : "desk";
}

Mode parse_mode(const std::string& name) {
    if (name == "paper_faithful") return Mode::paper_faithful;
    if (name == "desk") return Mode::desk;
    throw std::invalid_argument("mode must be paper_faithful or desk, got \"" + name + "\"");
}

uint64_t MollifierSchedule::a(std::size_t m) const {
    return 2 * uint64_t(std::ceil(200.0 * k * double(j_m.at(m))));
}

int MollifierSchedule::l_range() const { return int(std::floor(log_y / 2.0)); }

bool MollifierSchedule::has_flag(const std::string& f) const {
    return std::find(flags.begin(), flags.end(), f) != flags.end();
}

MollifierSchedule build_schedule(double x, double k, double c0, const BuildOptions& opt) {
    if (!(x >= 16.0)) throw std::domain_error("build_schedule: x >= 16 required");
    if (!(k >= 2.0)) throw std::domain_error("build_schedule: k >= 2 required");
    if (!(c0 > 1.0)) throw std::domain_error("build_schedule: c0 > 1 required");
    MollifierSchedule s;
    s.x = x;
    s.k = k;
    s.c0 = c0;
    s.mode = opt.mode;
    s.log_y = std::log(x) / c0;
    s.y = std::exp(s.log_y);
    if (s.log_y <= 1.0)
        throw std::domain_error(
            "build_schedule: no valid M, log log y is undefined at y = x^(1/c0); "
            "raise x or lower c0");
    s.loglog_y = std::log(s.log_y);
    const double L = s.loglog_y;

    // M - 1 is the unique nonnegative integer with 20^(M-1) in [L^2, 20 L^2].
    const double pos = std::log(L * L) / std::log(20.0);
    long e = std::lround(std::ceil(pos - 1e-12));
    if (e < 0) e = 0;
    if (double(e) > pos + 1.0 + 1e-12)
        throw std::domain_error(
            "build_schedule: no valid M puts y_1 in the target window; raise x or lower c0");
    s.m_count = std::size_t(e) + 1;
    const std::size_t M = s.m_count;

    s.y_m.assign(M + 1, 1.0);
    for (std::size_t m = 1; m <= M; ++m)
        s.y_m[m] = std::exp(s.log_y / std::pow(20.0, double(M - m)));

    s.j_m.assign(M + 1, 0);
    uint64_t jM = 0;
    if (opt.mode == Mode::paper_faithful) {
        jM = uint64_t(std::llround(c0 / (1e5 * k)));
        if (jM < 1) {
            jM = 1;
            s.flags.push_back("paper_jm_clamped");
        }
        // The requirement J_M >= exp(1e4 k^2) is far beyond double range.
        if (std::log(double(jM)) < 1e4 * k * k) s.flags.push_back("paper_jm_infeasible");
    } else {
        jM = std::max<uint64_t>(opt.min_desk_jm,
                                uint64_t(std::llround(c0 / (opt.desk_jm_divisor * k))));
    }
    for (std::size_t m = 2; m <= M; ++m) s.j_m[m] = jM + uint64_t(M - m);

    long j1 = std::lround(std::pow(L, 1.5));
    if (j1 < 1) {
        j1 = 1;
        s.flags.push_back("j1_clamped");
    }
    s.j_m[1] = uint64_t(j1);
    if (M == 1) s.flags.push_back("single_interval_uses_j1");
    if (M >= 2 && s.j_m[1] < s.j_m[2]) s.flags.push_back("j1_below_j2");
    if (opt.mode == Mode::paper_faithful && !paper_length_constraint(s).satisfied)
        s.flags.push_back("length_constraint_violated");
    return s;
}

MollifierSchedule manual_schedule(double x, double k, std::vector<double> y_edges,
                                  std::vector<uint64_t> j, Mode mode) {
    if (y_edges.empty() || j.size() != y_edges.size())
        throw std::invalid_argument("manual_schedule: need one J per interval edge");
    if (!(x > 1.0) || !(k > 1.0))
        throw std::domain_error("manual_schedule: x > 1 and k > 1 required");
    double prev = 1.0;
    for (std::size_t i = 0; i < y_edges.size(); ++i) {
        if (!(y_edges[i] > prev))
            throw std::invalid_argument("manual_schedule: edges must ascend from above 1");
        if (j[i] < 1) throw std::invalid_argument("manual_schedule: J >= 1 required");
        prev = y_edges[i];
    }
    MollifierSchedule s;
    s.x = x;
    s.k = k;
    s.y = y_edges.back();
    s.log_y = std::log(s.y);
    s.loglog_y = std::log(s.log_y);
    s.c0 = std::log(x) / s.log_y;
    s.mode = mode;
    s.m_count = y_edges.size();
    s.y_m.assign(s.m_count + 1, 1.0);
    std::copy(y_edges.begin(), y_edges.end(), s.y_m.begin() + 1);
    s.j_m.assign(s.m_count + 1, 0);
    std::copy(j.begin(), j.end(), s.j_m.begin() + 1);
    s.flags.push_back("manual");
    return s;
}

LengthConstraint paper_length_constraint(const MollifierSchedule& s) {
    LengthConstraint c;
    for (std::size_t m = 1; m <= s.m_count; ++m)
        c.exponent_log += 1e4 * s.k * double(s.j_m[m]) * std::log(s.y_m[m]);
    c.budget_log = std::log(s.x);
    c.margin = c.budget_log - c.exponent_log;
    c.satisfied = c.margin > 0.0;
    return c;
}

LengthConstraint desk_length_constraint(const MollifierSchedule& s, double log_q,
                                        double exponent_cap) {
    LengthConstraint c;
    for (std::size_t m = 1; m <= s.m_count; ++m) {
        double expo = 8.0 * double(s.j_m[m]) + 2.0 * double(s.a(m));
        if (exponent_cap > 0.0) expo = std::min(expo, exponent_cap);
        c.exponent_log += expo * std::log(s.y_m[m]);
    }
    c.budget_log = log_q;
    c.margin = c.budget_log - c.exponent_log;
    c.satisfied = c.margin > 0.0;
    return c;
}

double prime_interval_weight(const primes::PrimeList& pl, double y_lo, double y_hi) {
    if (!pl.covers(uint64_t(y_hi)))
        throw std::out_of_range("prime_interval_weight: sieve below interval top");
    PairwiseAccumulator<double> acc;
    for (uint64_t p : pl.primes) {
        const double pd = double(p);
        if (pd <= y_lo) continue;
        if (pd > y_hi) break;
        acc.add(2.0 / pd + 3.0 / (pd * pd));
    }
    return 4.0 * acc.total();
}

double interval_weight_bound(const MollifierSchedule& s, std::size_t m,
                             const primes::PrimeList& pl) {
    if (m < 1 || m > s.m_count) throw std::out_of_range("interval_weight_bound: bad m");
    return prime_interval_weight(pl, s.y_m[m - 1], s.y_m[m]);
}

std::vector<EstAJRow> check_estaj(const MollifierSchedule& s, const primes::PrimeList& pl) {
    std::vector<EstAJRow> rows;
    for (std::size_t m = 1; m <= s.m_count; ++m) {
        EstAJRow r;
        r.m = m;
        r.lhs = 1e4 * (s.k - 1.0) * (s.k - 1.0) * interval_weight_bound(s, m, pl);
        r.j_m = s.j_m[m];
        r.satisfied = r.lhs <= double(r.j_m);
        rows.push_back(r);
    }
    return rows;
}

unsigned interval_index(double t, double k, uint64_t j) {
    if (t < 0.0) throw std::domain_error("interval_index: nonnegative argument required");
    const double base = double(j) / (100.0 * k);
    if (t <= base) return 0;
    const double r = std::log2(t / base);
    const long n = std::lround(std::ceil(r - 1e-12));
    return unsigned(std::max(1L, n));
}

double interval_inf(unsigned n, double k, uint64_t j) {
    if (n == 0) return 0.0;
    return double(j) / (100.0 * k) * std::pow(2.0, double(n - 1));
}

MajorantParams majorant_params(const MollifierSchedule& s, std::size_t m, unsigned n) {
    if (m < 1 || m > s.m_count) throw std::out_of_range("majorant_params: bad m");
    const uint64_t J = s.j(m);
    MajorantParams p;
    p.m = m;
    p.n = n;
    p.w = interval_inf(n, s.k, J);
    p.a = s.a(m);
    if (n == 0)
        p.u_case = UCase::truncated;
    else
        p.u_case = (p.w <= 100.0 * s.k * double(J)) ? UCase::middle : UCase::upper;
    return p;
}

MajorantParams majorant_params_from_draw(const MollifierSchedule& s, std::size_t m,
                                         double re_d) {
    return majorant_params(s, m, interval_index(std::abs(re_d), s.k, s.j(m)));
}

double majorant_log(const MajorantParams& p, cplx d, double k, uint64_t j) {
    switch (p.u_case) {
        case UCase::truncated:
            return 2.0 * std::log(std::abs(truncated_exp_sum(1.0, d.real(), j)));
        case UCase::middle: {
            const double ad = std::abs(d);
            if (ad == 0.0) return kNegInf;
            if (p.w <= 0.0) throw std::domain_error("majorant: W = 0 in a power case");
            return 4.0 * p.w + double(p.a) * (std::log(ad) - std::log(p.w));
        }
        case UCase::upper: {
            const double ad = std::abs(d);
            if (ad == 0.0) return kNegInf;
            if (p.w <= 0.0) throw std::domain_error("majorant: W = 0 in a power case");
            const double pref =
                (2.0 / (k - 1.0)) * (std::log(2.0) + double(j) * std::log(k - 1.0) +
                                     double(j) * std::log(2.0 * p.w) -
                                     std::lgamma(double(j) + 1.0));
            return pref + double(p.a) * (std::log(ad) - std::log(p.w));
        }
    }
    throw std::logic_error("majorant: unreachable case");
}

double majorant(const MajorantParams& p, cplx d, double k, uint64_t j) {
    const double lg = majorant_log(p, d, k, j);
    return lg == kNegInf ? 0.0 : std::exp(lg);
}

double boundary_case_log_ratio(double k, uint64_t j) {
    const double w = 100.0 * k * double(j);
    const double upper_pref =
        (2.0 / (k - 1.0)) * (std::log(2.0) + double(j) * std::log(k - 1.0) +
                             double(j) * std::log(2.0 * w) - std::lgamma(double(j) + 1.0));
    return 4.0 * w - upper_pref;
}

double mollifier_factor(double re_d, double k, uint64_t j) {
    const double s = truncated_exp_sum(k - 1.0, re_d, j);
    return s * s;
}

double mollifier_factor_log(double re_d, double k, uint64_t j) {
    return 2.0 * std::log(std::abs(truncated_exp_sum(k - 1.0, re_d, j)));
}

double truncation_error(double re_d, double k, uint64_t j) {
    return std::exp(2.0 * (k - 1.0) * re_d) - mollifier_factor(re_d, k, j);
}

double err_tail_sum(double k, uint64_t j, double a_m) {
    if (a_m < 0.0) throw std::domain_error("err_tail_sum: A >= 0 required");
    if (a_m == 0.0 || k == 1.0) return 0.0;
    const double lk = std::log(k - 1.0);
    const double la = std::log(a_m);
    // Row ratio falls below 1 once j1 + j2 exceeds about 2 (k-1)^2 A.
    const uint64_t cap =
        std::max<uint64_t>(4 * j + 40, uint64_t(8.0 * (k - 1.0) * (k - 1.0) * a_m) + 200);
    double total = 0.0;
    for (uint64_t ssum = 1; ssum <= cap; ++ssum) {
        double row = 0.0;
        const uint64_t half = (ssum + 1) / 2;  // ceil(ssum / 2)
        for (uint64_t j1 = 0; j1 <= ssum; ++j1) {
            const uint64_t j2 = ssum - j1;
            if (std::max(j1, j2) <= j) continue;
            row += std::exp(double(ssum) * lk - std::lgamma(double(j1) + 1.0) -
                            std::lgamma(double(j2) + 1.0) + std::lgamma(double(half) + 1.0) +
                            0.5 * double(ssum) * la);
        }
        total += row;
        if (ssum > 2 * j + 2 && row < 1e-16 * total) break;
    }
    return total;
}

Evaluator seeded_evaluator(uint64_t seed) {
    return [seed](uint64_t p) { return unit_phase(seed, p); };
}

cplx interval_sum(const MollifierSchedule& s, std::size_t m, int l,
                  const hecke::HeckeTable& t, const primes::PrimeList& pl,
                  const Evaluator& ev) {
    if (m < 1 || m > s.m_count) throw std::out_of_range("interval_sum: bad m");
    const double y_lo = s.y_m[m - 1];
    const double y_hi = s.y_m[m];
    if (!pl.covers(uint64_t(y_hi)))
        throw std::out_of_range("interval_sum: sieve below interval top");
    if (!t.covers(uint64_t(y_hi)))
        throw std::out_of_range("interval_sum: eigenvalue table below interval top");
    const double theta_scale = double(l) / s.log_y;
    PairwiseAccumulator<cplx> acc;
    for (uint64_t p : pl.primes) {
        const double pd = double(p);
        if (pd <= y_lo) continue;
        if (pd > y_hi) break;
        const double lp = std::log(pd);
        const double lam = t.lambda[p];
        const cplx e = ev(p);
        const cplx ph = std::polar(1.0, -theta_scale * lp);
        // lambda(p^2) - 1 = lambda(p)^2 - 2 by the Hecke recursion.
        acc.add(lam * e * ph / std::sqrt(pd) +
                (lam * lam - 2.0) * e * e * ph * ph / (2.0 * pd));
    }
    return acc.total();
}

double weight_total(const MollifierSchedule& s, const hecke::HeckeTable& t,
                    const primes::PrimeList& pl, const Evaluator& ev) {
    const int lr = s.l_range();
    PairwiseAccumulator<double> acc;
    for (int l = -lr; l <= lr; ++l) {
        double prod = 1.0;
        for (std::size_t m = 1; m <= s.m_count; ++m) {
            const cplx d = interval_sum(s, m, l, t, pl, ev);
            prod *= mollifier_factor(d.real(), s.k, s.j(m));
        }
        acc.add(prod);
    }
    return acc.total();
}

Lemma51Audit lemma51_audit(const MollifierSchedule& s, std::size_t m, std::size_t draws,
                           uint64_t seed) {
    const uint64_t J = s.j(m);
    const double k = s.k;
    const double base = double(J) / (100.0 * k);
    const double mag_lo = base / 8.0;
    const double mag_hi = 100.0 * k * double(J) * 64.0;
    const double allowance = std::log1p(10.0 * std::exp(-double(J)));

    Lemma51Audit out;
    out.draws = draws;
    out.partition_ok = true;
    for (std::size_t i = 0; i < draws; ++i) {
        const uint64_t si = derive_seed(seed, i);
        const double mag =
            std::exp(std::log(mag_lo) +
                     uniform01(si, 1) * (std::log(mag_hi) - std::log(mag_lo)));
        const double re = (uniform01(si, 2) < 0.5 ? -mag : mag);
        // Half the draws are purely real: the power cases use |d| >= |Re d|,
        // so real d is the tight configuration.
        const double im = (i % 2 == 0) ? 0.0 : mag * (2.0 * uniform01(si, 3) - 1.0);
        const cplx d(re, im);

        const MajorantParams p = majorant_params_from_draw(s, m, re);
        const double sup =
            (p.n == 0) ? base : base * std::pow(2.0, double(p.n));
        if (mag < p.w - 1e-12 * mag || mag > sup * (1.0 + 1e-12)) out.partition_ok = false;
        ++out.case_counts[std::size_t(p.u_case)];

        const double log_r_pow = mollifier_factor_log(re, k, J) / (k - 1.0);
        const double log_u = majorant_log(p, d, k, J);
        const double margin = log_r_pow - log_u;
        if (margin > allowance) ++out.violations;
        const double c = std::expm1(margin) * std::exp(double(J));
        out.max_constant = std::max(out.max_constant, c);
    }
    out.all_cases_seen =
        out.case_counts[0] > 0 && out.case_counts[1] > 0 && out.case_counts[2] > 0;
    out.passed = out.violations == 0 && out.all_cases_seen && out.partition_ok;
    return out;
}

ZerocaseAudit zerocase_audit(const MollifierSchedule& s, std::size_t m, int l1, int l2,
                             const hecke::HeckeTable& t, const primes::PrimeList& pl,
                             std::size_t samples, uint64_t seed) {
    const uint64_t J = s.j(m);
    const double k = s.k;
    std::vector<double> diffs(samples);
    parallel_for(samples, [&](std::size_t i) {
        const Evaluator ev = seeded_evaluator(derive_seed(seed, i));
        const double re1 = interval_sum(s, m, l1, t, pl, ev).real();
        const double re2 = interval_sum(s, m, l2, t, pl, ev).real();
        const double exact = std::exp(2.0 * (k - 1.0) * re1 + 2.0 * re2);
        // U in the n = 0 case is the k-free truncated exponential square.
        const double approx = mollifier_factor(re1, k, J) * mollifier_factor(re2, 2.0, J);
        diffs[i] = std::abs(exact - approx);
    });
    const MeanStderr ms = mean_and_stderr(diffs);
    ZerocaseAudit out;
    out.mc_mean = ms.mean;
    out.mc_stderr = ms.stderr_;
    out.bound = std::exp(-double(J));
    out.ratio = out.mc_mean / out.bound;
    return out;
}

IntervalDecayAudit interval_decay_audit(const MollifierSchedule& s, std::size_t m, int l1,
                                        int l2, const hecke::HeckeTable& t,
                                        const primes::PrimeList& pl, unsigned n_max,
                                        std::size_t samples, uint64_t seed) {
    const uint64_t J = s.j(m);
    const double k = s.k;
    std::vector<double> log_r(samples);
    std::vector<cplx> d2(samples);
    parallel_for(samples, [&](std::size_t i) {
        const Evaluator ev = seeded_evaluator(derive_seed(seed, i));
        log_r[i] = mollifier_factor_log(interval_sum(s, m, l1, t, pl, ev).real(), k, J);
        d2[i] = interval_sum(s, m, l2, t, pl, ev);
    });

    IntervalDecayAudit out;
    std::vector<double> xs, ys;
    std::vector<double> lv(samples);
    for (unsigned n = 0; n <= n_max; ++n) {
        const MajorantParams p = majorant_params(s, m, n);
        for (std::size_t i = 0; i < samples; ++i)
            lv[i] = log_r[i] + majorant_log(p, d2[i], k, J);
        IntervalDecayRow row;
        row.n = n;
        row.w = p.w;
        row.log_mean = log_sum_exp(lv) - std::log(double(samples));
        row.log_bound = -2.0 * std::log(p.w + 1.0);
        row.within_bound = row.log_mean <= row.log_bound;
        row.u_case = p.u_case;
        out.rows.push_back(row);
        if (n >= 1) {
            xs.push_back(std::log(p.w + 1.0));
            ys.push_back(row.log_mean);
        }
    }
    if (xs.size() >= 2) out.fitted_slope = linear_fit(xs, ys).slope;
    return out;
}

double pair_exponential_log_closed_form(const MollifierSchedule& s, std::size_t m, int l1,
                                        int l2, const hecke::HeckeTable& t,
                                        const primes::PrimeList& pl) {
    if (m < 1 || m > s.m_count) throw std::out_of_range("pair_exponential: bad m");
    const double y_lo = s.y_m[m - 1];
    const double y_hi = s.y_m[m];
    if (!t.covers(uint64_t(y_hi)))
        throw std::out_of_range("pair_exponential: eigenvalue table below interval top");
    const double k = s.k;
    const double dl = double(l1 - l2) / s.log_y;
    PairwiseAccumulator<double> acc;
    for (uint64_t p : pl.primes) {
        const double pd = double(p);
        if (pd <= y_lo) continue;
        if (pd > y_hi) break;
        const double l2p = t.lambda[p] * t.lambda[p];
        acc.add(((k - 1.0) * (k - 1.0) + 1.0) * l2p / pd +
                2.0 * (k - 1.0) * l2p * std::cos(dl * std::log(pd)) / pd);
    }
    return acc.total();
}

MeanStderr pair_exponential_mc(const MollifierSchedule& s, std::size_t m, int l1, int l2,
                               const hecke::HeckeTable& t, const primes::PrimeList& pl,
                               std::size_t samples, uint64_t seed) {
    const double k = s.k;
    std::vector<double> vals(samples);
    parallel_for(samples, [&](std::size_t i) {
        const Evaluator ev = seeded_evaluator(derive_seed(seed, i));
        const double re1 = interval_sum(s, m, l1, t, pl, ev).real();
        const double re2 = interval_sum(s, m, l2, t, pl, ev).real();
        vals[i] = std::exp(2.0 * (k - 1.0) * re1 + 2.0 * re2);
    });
    return mean_and_stderr(vals);
}

std::vector<LSeparationRow> l_separation_profile(const MollifierSchedule& s,
                                                 const hecke::HeckeTable& t,
                                                 const primes::PrimeList& pl, int dl_max) {
    if (!t.covers(uint64_t(s.y)))
        throw std::out_of_range("l_separation_profile: eigenvalue table below y");
    const double k = s.k;
    std::vector<LSeparationRow> rows;
    for (int dl = 0; dl <= dl_max; ++dl) {
        const double freq = double(dl) / s.log_y;
        PairwiseAccumulator<double> acc;
        for (uint64_t p : pl.primes) {
            const double pd = double(p);
            if (pd > s.y) break;
            const double l2p = t.lambda[p] * t.lambda[p];
            acc.add(((k - 1.0) * (k - 1.0) + 1.0) * l2p / pd +
                    2.0 * (k - 1.0) * l2p * std::cos(freq * std::log(pd)) / pd);
        }
        rows.push_back({dl, acc.total()});
    }
    return rows;
}

}  // namespace tml::moll
