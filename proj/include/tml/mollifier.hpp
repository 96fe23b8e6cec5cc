#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "tml/hecke.hpp"
#include "tml/numerics.hpp"
#include "tml/primes.hpp"

namespace tml::moll {

using cplx = std::complex<double>;

// paper_faithful keeps the original constants (astronomically large exponent
// budgets); desk scales them to runnable size while preserving every
// structural relation. Every derived report carries the mode tag.
enum class Mode { paper_faithful, desk };

std::string mode_name(Mode m);
Mode parse_mode(const std::string& name);

// Subdivision 1 = y_0 < y_1 < ... < y_M = y of [1, y], y = x^{1/c0}, built
// by repeated 20th roots, with truncation exponents J_m per interval.
struct MollifierSchedule {
    double x = 0.0;
    double k = 2.0;
    double c0 = 1.0;
    double y = 0.0;
    double log_y = 0.0;
    double loglog_y = 0.0;
    Mode mode = Mode::desk;
    std::size_t m_count = 0;         // M
    std::vector<double> y_m;         // size M+1; y_m[0] = 1, y_m[M] = y
    std::vector<uint64_t> j_m;       // size M+1; slot 0 unused
    std::vector<std::string> flags;  // structural deviations, never silent

    uint64_t j(std::size_t m) const { return j_m.at(m); }
    double y_at(std::size_t m) const { return y_m.at(m); }
    uint64_t a(std::size_t m) const;   // 2 ceil(200 k J_m), always even
    int l_range() const;               // floor(log y / 2); l runs over [-l_range, l_range]
    bool has_flag(const std::string& f) const;
};

struct BuildOptions {
    Mode mode = Mode::desk;
    // desk J_M = max(min_desk_jm, round(c0 / (desk_jm_divisor * k)))
    double desk_jm_divisor = 10.0;
    uint64_t min_desk_jm = 2;
};

// M is the integer with 20^{M-1} in [L^2, 20 L^2], L = loglog y; then
// y_{m-1} = y_m^{1/20}, J_1 = round(L^{3/2}), J_m = J_M + M - m for m >= 2.
// Throws when no valid M exists (x too small for this c0).
MollifierSchedule build_schedule(double x, double k, double c0, const BuildOptions& opt);

// Explicit edges for tiny worked examples; skips the 20th-root shape.
MollifierSchedule manual_schedule(double x, double k, std::vector<double> y_edges,
                                  std::vector<uint64_t> j, Mode mode);

struct LengthConstraint {
    double exponent_log = 0.0;  // sum_m exponent_m * log y_m
    double budget_log = 0.0;    // log x or log q
    double margin = 0.0;        // budget_log - exponent_log
    bool satisfied = false;
};

// prod_m y_m^{1e4 k J_m} < x.
LengthConstraint paper_length_constraint(const MollifierSchedule& s);
// prod_m y_m^{8 J_m + 2 a_m} < q; exponent_cap > 0 clips each exponent
// (the relaxed desk variant), 0 keeps the strict surrogate.
LengthConstraint desk_length_constraint(const MollifierSchedule& s, double log_q,
                                        double exponent_cap = 0.0);

// 4 sum_{y_lo < p <= y_hi} (2/p + 3/p^2), exact over the sieve.
double prime_interval_weight(const primes::PrimeList& pl, double y_lo, double y_hi);
// The same for interval m of the schedule (A_m).
double interval_weight_bound(const MollifierSchedule& s, std::size_t m,
                             const primes::PrimeList& pl);

struct EstAJRow {
    std::size_t m = 0;
    double lhs = 0.0;  // 1e4 (k-1)^2 A_m
    uint64_t j_m = 0;
    bool satisfied = false;  // lhs <= J_m
};
std::vector<EstAJRow> check_estaj(const MollifierSchedule& s, const primes::PrimeList& pl);

// Dyadic ladder I_0 = [0, J/(100k)], I_n = J/(100k) * [2^{n-1}, 2^n].
// Boundary points go to the lower interval.
unsigned interval_index(double t, double k, uint64_t j);
double interval_inf(unsigned n, double k, uint64_t j);

enum class UCase { truncated, middle, upper };

struct MajorantParams {
    std::size_t m = 0;
    unsigned n = 0;   // interval index
    double w = 0.0;   // inf I_n
    uint64_t a = 0;   // 2 ceil(200 k J_m)
    UCase u_case = UCase::truncated;
};

MajorantParams majorant_params(const MollifierSchedule& s, std::size_t m, unsigned n);
MajorantParams majorant_params_from_draw(const MollifierSchedule& s, std::size_t m,
                                         double re_d);

// Three-case majorant:
//   n = 0:            (sum_{i<=J} (Re d)^i / i!)^2
//   W <= 100 k J:     e^{4W} |d/W|^a
//   W  > 100 k J:     (2 (k-1)^J (2W)^J / J!)^{2/(k-1)} |d/W|^a
// Log form returns -inf for d = 0 in a power case.
double majorant_log(const MajorantParams& p, cplx d, double k, uint64_t j);
double majorant(const MajorantParams& p, cplx d, double k, uint64_t j);

// log(middle/upper) at the shared boundary W = 100 k J; the |d/W|^a factor
// cancels, so this depends on k and J only.
double boundary_case_log_ratio(double k, uint64_t j);

// sum_{i<=J} (k-1)^i t^i / i!, squared: the truncated-exponential weight.
double mollifier_factor(double re_d, double k, uint64_t j);
double mollifier_factor_log(double re_d, double k, uint64_t j);
// exp(2(k-1) t) minus the weight: the tail beyond the J-truncation.
double truncation_error(double re_d, double k, uint64_t j);

// Tail sum_{max(j1,j2) > J} (k-1)^{j1+j2}/(j1! j2!) ceil((j1+j2)/2)! A^{(j1+j2)/2};
// at most e^{-2J} whenever 1e4 (k-1)^2 A <= J.
double err_tail_sum(double k, uint64_t j, double a_m);

// chi(p) or f(p) at primes.
using Evaluator = std::function<cplx(uint64_t)>;
// Independent uniform phases keyed by (seed, p).
Evaluator seeded_evaluator(uint64_t seed);

// D_{m,l} = sum over y_{m-1} < p <= y_m of
//   lambda(p) e(p) / p^{1/2 + i l / log y}
//   + (lambda(p)^2 - 2) e(p)^2 / (2 p^{1 + 2 i l / log y}).
cplx interval_sum(const MollifierSchedule& s, std::size_t m, int l,
                  const hecke::HeckeTable& t, const primes::PrimeList& pl,
                  const Evaluator& ev);

// R = sum_{|l| <= l_range} prod_m R_{m,l}.
double weight_total(const MollifierSchedule& s, const hecke::HeckeTable& t,
                    const primes::PrimeList& pl, const Evaluator& ev);

struct Lemma51Audit {
    std::size_t draws = 0;
    std::size_t violations = 0;  // beyond the (1 + 10 e^{-J}) allowance
    double max_constant = 0.0;   // max (R^{1/(k-1)}/U - 1) e^J over draws
    std::size_t case_counts[3] = {0, 0, 0};  // truncated / middle / upper
    bool all_cases_seen = false;
    bool partition_ok = false;  // every drawn |Re d| landed in exactly one interval
    bool passed = false;
};
// Synthetic complex draws spanning all three majorant cases; checks the
// pointwise domination R^{1/(k-1)} <= (1 + 10 e^{-J}) U.
Lemma51Audit lemma51_audit(const MollifierSchedule& s, std::size_t m, std::size_t draws,
                           uint64_t seed);

struct ZerocaseAudit {
    double mc_mean = 0.0;  // E |e^{2(k-1)Re D_{l1} + 2 Re D_{l2}} - R_{l1} U0_{l2}|
    double mc_stderr = 0.0;
    double bound = 0.0;  // e^{-J}
    double ratio = 0.0;  // mc_mean / bound
};
ZerocaseAudit zerocase_audit(const MollifierSchedule& s, std::size_t m, int l1, int l2,
                             const hecke::HeckeTable& t, const primes::PrimeList& pl,
                             std::size_t samples, uint64_t seed);

struct IntervalDecayRow {
    unsigned n = 0;
    double w = 0.0;
    double log_mean = 0.0;   // log E[R_{l1} U_{l2}], log-sum-exp over samples
    double log_bound = 0.0;  // -2 log(W + 1)
    bool within_bound = false;
    UCase u_case = UCase::truncated;
};
struct IntervalDecayAudit {
    std::vector<IntervalDecayRow> rows;
    double fitted_slope = 0.0;  // d log E / d log(W+1) over the n >= 1 rows
    double reference_slope = -2.0;
};
IntervalDecayAudit interval_decay_audit(const MollifierSchedule& s, std::size_t m, int l1,
                                        int l2, const hecke::HeckeTable& t,
                                        const primes::PrimeList& pl, unsigned n_max,
                                        std::size_t samples, uint64_t seed);

// log E exp(2(k-1) Re D_{m,l1} + 2 Re D_{m,l2}) in closed form:
// sum over the interval of ((k-1)^2 + 1) lambda^2/p
//   + 2 (k-1) lambda^2 cos((l1-l2) log p / log y) / p.
double pair_exponential_log_closed_form(const MollifierSchedule& s, std::size_t m, int l1,
                                        int l2, const hecke::HeckeTable& t,
                                        const primes::PrimeList& pl);
MeanStderr pair_exponential_mc(const MollifierSchedule& s, std::size_t m, int l1, int l2,
                               const hecke::HeckeTable& t, const primes::PrimeList& pl,
                               std::size_t samples, uint64_t seed);

struct LSeparationRow {
    int dl = 0;
    double log_total = 0.0;  // closed form summed over all intervals (p <= y)
};
// Decay in l1 - l2; the log-total falls like -2(k-1) log|dl| for
// 1 <= |dl| <= log y / 2.
std::vector<LSeparationRow> l_separation_profile(const MollifierSchedule& s,
                                                 const hecke::HeckeTable& t,
                                                 const primes::PrimeList& pl, int dl_max);

}  // namespace tml::moll
