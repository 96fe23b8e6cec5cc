#include "tml/characters.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "tml/fft.hpp"
#include "tml/int128.hpp"

namespace tml::chars {

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return uint64_t(uint128(a) * b % m);
}

uint64_t powmod_u64(uint64_t b, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    b %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, b, m);
        b = mulmod_u64(b, b, m);
        e >>= 1;
    }
    return r;
}

std::vector<uint64_t> prime_factors(uint64_t n) {
    std::vector<uint64_t> f;
    for (uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p) continue;
        f.push_back(p);
        while (n % p == 0) n /= p;
    }
    if (n > 1) f.push_back(n);
    return f;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (uint64_t a : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

uint64_t find_primitive_root(uint64_t q) {
    if (q < 3 || !is_prime_u64(q))
        throw std::invalid_argument("find_primitive_root: q must be an odd prime");
    const std::vector<uint64_t> factors = prime_factors(q - 1);
    for (uint64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (uint64_t r : factors) {
            if (powmod_u64(g, (q - 1) / r, q) == 1) { ok = false; break; }
        }
        if (ok) return g;
    }
    throw std::logic_error("find_primitive_root: exhausted candidates");  // unreachable
}

uint32_t CharacterIndex::index_of(uint64_t n) const {
    const uint64_t r = n % q;
    if (r == 0) throw std::domain_error("CharacterIndex: n divisible by q has no index");
    return ind[r];
}

CharacterIndex build_index(uint64_t q, uint64_t g) {
    if (q < 3 || !is_prime_u64(q))
        throw std::invalid_argument("build_index: q must be an odd prime");
    if (q > (uint64_t(1) << 32))
        throw std::length_error("build_index: q exceeds the index-table capacity");
    const std::vector<uint64_t> factors = prime_factors(q - 1);
    for (uint64_t r : factors)
        if (powmod_u64(g, (q - 1) / r, q) == 1)
            throw std::invalid_argument("build_index: g is not a primitive root mod q");

    CharacterIndex ci;
    ci.q = q;
    ci.g = g;
    ci.ind.assign(q, 0);
    uint64_t cur = 1;
    for (uint64_t i = 0; i < q - 1; ++i) {
        ci.ind[cur] = uint32_t(i);
        cur = mulmod_u64(cur, g, q);
    }
    if (cur != 1) throw std::logic_error("build_index: generator order mismatch");
    return ci;
}

CharacterIndex build_index(uint64_t q) { return build_index(q, find_primitive_root(q)); }

cplx chi_value(const CharacterIndex& ci, uint64_t a, uint64_t n) {
    if (n % ci.q == 0) return {0.0, 0.0};
    const uint64_t L = ci.order();
    const uint64_t prod = mulmod_u64(a % L, ci.index_of(n), L);
    const double ang = 2.0 * std::numbers::pi * double(prod) / double(L);
    return {std::cos(ang), std::sin(ang)};
}

TwistedSumVector all_twisted_sums(const CharacterIndex& ci, std::span<const double> coeffs) {
    if (coeffs.size() < 2)
        throw std::invalid_argument("all_twisted_sums: need at least one coefficient");
    const uint64_t x = coeffs.size() - 1;
    const uint64_t L = ci.order();

    // Bucket coefficients by discrete-log class; n with q | n contribute 0.
    std::vector<cplx> buckets(L, cplx(0.0, 0.0));
    for (uint64_t n = 1; n <= x; ++n) {
        const uint64_t r = n % ci.q;
        if (r == 0) continue;
        buckets[ci.ind[r]] += coeffs[n];
    }

    // T(chi_a) = sum_j buckets[j] e(+aj/L): positive-sign DFT of length L.
    ChirpZ plan(L, +1);
    TwistedSumVector out;
    out.q = ci.q;
    out.x = x;
    out.values = plan.transform(buckets);
    return out;
}

cplx naive_twisted_sum(const CharacterIndex& ci, uint64_t a, std::span<const double> coeffs) {
    if (coeffs.size() < 2)
        throw std::invalid_argument("naive_twisted_sum: need at least one coefficient");
    const uint64_t x = coeffs.size() - 1;
    cplx sum(0.0, 0.0);
    for (uint64_t n = 1; n <= x; ++n) {
        if (n % ci.q == 0) continue;
        sum += coeffs[n] * chi_value(ci, a, n);
    }
    return sum;
}

}  // namespace tml::chars
