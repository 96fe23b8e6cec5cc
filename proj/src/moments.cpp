#include "tml/moments.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace tml::moments {

uint64_t isqrt_u64(uint64_t n) {
    uint64_t r = uint64_t(std::sqrt(double(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

MomentReport moment(const chars::CharacterIndex& ci, const hecke::HeckeTable& t,
                    uint64_t x, double k) {
    if (k < 1.0) throw std::domain_error("moment: k >= 1 required");
    if (x < 1) throw std::invalid_argument("moment: x >= 1 required");
    if (!t.covers(x)) throw std::out_of_range("moment: x beyond table limit");
    if (x >= ci.q) throw std::domain_error("moment: requires x < q");

    const auto t0 = std::chrono::steady_clock::now();
    std::span<const double> coeffs(t.lambda.data(), x + 1);
    const chars::TwistedSumVector T = chars::all_twisted_sums(ci, coeffs);

    const double phi = double(ci.q - 1);
    PairwiseAccumulator<double> sk_acc;     // non-principal only
    PairwiseAccumulator<double> second_acc; // all characters
    for (uint64_t a = 0; a < T.values.size(); ++a) {
        const double n2 = std::norm(T.values[a]);
        second_acc.add(n2);
        if (a == 0) continue;
        sk_acc.add(n2 > 0.0 ? std::exp(k * std::log(n2)) : 0.0);
    }

    PairwiseAccumulator<double> diag;
    for (uint64_t n = 1; n <= x; ++n) {
        if (n % ci.q == 0) continue;
        diag.add(t.lambda[n] * t.lambda[n]);
    }
    const double diag_sum = diag.total();

    MomentReport r;
    r.q = ci.q;
    r.x = x;
    r.k = k;
    r.s_k = sk_acc.total();
    const double log_q = std::log(double(ci.q));
    r.normalized = r.s_k /
        (phi * std::exp(k * std::log(double(x))) *
         std::exp((k - 1.0) * (k - 1.0) * std::log(log_q)));
    r.second_moment_residual =
        std::abs(second_acc.total() / phi - diag_sum) / std::max(diag_sum, 1e-300);
    r.x_above_sqrt_q = double(x) > std::sqrt(double(ci.q));
    const auto t1 = std::chrono::steady_clock::now();
    r.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    return r;
}

GrowthScan growth_scan(const std::vector<uint64_t>& qs, double k,
                       const hecke::HeckeTable& t, const XRule& rule,
                       bool with_timing) {
    if (qs.empty()) throw std::invalid_argument("growth_scan: empty q list");
    GrowthScan scan;
    scan.reference_slope = (k - 1.0) * (k - 1.0);
    scan.rows.reserve(qs.size());
    for (uint64_t q : qs) {
        const uint64_t x = rule.kind == XRule::sqrt_q ? isqrt_u64(q) : rule.fixed_x;
        chars::CharacterIndex ci = chars::build_index(q);
        MomentReport row = moment(ci, t, x, k);
        if (!with_timing) row.runtime_ms = 0.0;
        scan.rows.push_back(row);
    }
    std::vector<double> xs, ys;
    for (const auto& row : scan.rows) {
        if (row.s_k <= 0.0) continue;
        const double phi = double(row.q - 1);
        xs.push_back(std::log(std::log(double(row.q))));
        ys.push_back(std::log(row.s_k) - std::log(phi) - row.k * std::log(double(row.x)));
    }
    if (xs.size() >= 3) {
        scan.fit = linear_fit(xs, ys);
        scan.ci95_lo = scan.fit.slope - 1.96 * scan.fit.slope_stderr;
        scan.ci95_hi = scan.fit.slope + 1.96 * scan.fit.slope_stderr;
    }
    return scan;
}

std::vector<uint64_t> prime_ladder(uint64_t lo, uint64_t hi, std::size_t count) {
    if (lo < 3 || hi <= lo || count < 2)
        throw std::invalid_argument("prime_ladder: bad range");
    std::vector<uint64_t> out;
    const double ratio = std::log(double(hi)) - std::log(double(lo));
    uint64_t last = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const double target =
            std::exp(std::log(double(lo)) + ratio * double(i) / double(count - 1));
        uint64_t c = std::max<uint64_t>(3, uint64_t(target));
        if (c % 2 == 0) ++c;
        while (!chars::is_prime_u64(c)) c += 2;
        if (c > hi) {
            // Top rung: take the largest prime <= hi instead of overshooting.
            c = (hi % 2 == 0) ? hi - 1 : hi;
            while (c >= 3 && !chars::is_prime_u64(c)) c -= 2;
        }
        if (c != last) out.push_back(c);
        last = c;
    }
    return out;
}

}  // namespace tml::moments
