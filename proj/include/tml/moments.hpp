#pragma once

#include <cstdint>
#include <vector>

#include "tml/characters.hpp"
#include "tml/hecke.hpp"
#include "tml/numerics.hpp"

namespace tml::moments {

// 2k-th moment over non-principal characters,
//   S_k = sum_{chi != chi0} |sum_{n<=x} chi(n) lambda(n)|^{2k},
// normalized by phi(q) x^k (log q)^{(k-1)^2}. The second-moment residual
// checks the all-characters diagonal identity
//   (1/phi(q)) sum_chi |T(chi)|^2 = sum_{n<=x, q∤n} lambda(n)^2,
// exact in exact arithmetic whenever x^2 < q.
struct MomentReport {
    uint64_t q = 0;
    uint64_t x = 0;
    double k = 0.0;
    double s_k = 0.0;
    double normalized = 0.0;
    double second_moment_residual = 0.0;
    bool x_above_sqrt_q = false;
    double runtime_ms = 0.0;
};

MomentReport moment(const chars::CharacterIndex& ci, const hecke::HeckeTable& t,
                    uint64_t x, double k);

struct XRule {
    enum Kind { sqrt_q, fixed } kind = sqrt_q;
    uint64_t fixed_x = 0;
};

struct GrowthScan {
    std::vector<MomentReport> rows;
    // OLS of log(S_k / (phi(q) x^k)) against loglog q.
    LinearFit fit;
    double ci95_lo = 0.0, ci95_hi = 0.0;
    double reference_slope = 0.0;  // (k-1)^2
};

// One moment per q (q values must be odd primes), deterministic row order.
GrowthScan growth_scan(const std::vector<uint64_t>& qs, double k,
                       const hecke::HeckeTable& t, const XRule& rule,
                       bool with_timing = false);

// Geometric ladder of primes spanning [lo, hi].
std::vector<uint64_t> prime_ladder(uint64_t lo, uint64_t hi, std::size_t count);

uint64_t isqrt_u64(uint64_t n);

}  // namespace tml::moments
