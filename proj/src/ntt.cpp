#include "tml/ntt.hpp"

#include <bit>
#include <stdexcept>

namespace tml {

namespace ntt {

void transform(std::vector<uint64_t>& a, uint64_t p, uint64_t gen, bool invert) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("ntt::transform: length must be a power of two");

    // Bit-reversal permutation.
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        uint64_t w_len = powmod(gen, (p - 1) / len, p);
        if (invert) w_len = invmod(w_len, p);
        for (std::size_t i = 0; i < n; i += len) {
            uint64_t w = 1;
            for (std::size_t j = 0; j < len / 2; ++j) {
                const uint64_t u = a[i + j];
                const uint64_t v = mulmod(a[i + j + len / 2], w, p);
                // p sits within 2^32 of 2^64, so u + v can wrap; the wrap
                // and the >= p case both need one subtraction of p.
                uint64_t s = u + v;
                if (s < u || s >= p) s -= p;
                a[i + j] = s;
                a[i + j + len / 2] = u >= v ? u - v : u + p - v;
                w = mulmod(w, w_len, p);
            }
        }
    }
    if (invert) {
        const uint64_t n_inv = invmod(uint64_t(n % p), p);
        for (auto& x : a) x = mulmod(x, n_inv, p);
    }
}

}  // namespace ntt

namespace {

using namespace ntt;

std::vector<uint64_t> reduce_mod(const std::vector<int128>& a, uint64_t p, std::size_t m) {
    std::vector<uint64_t> r(m, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        int128 v = a[i] % int128(p);
        if (v < 0) v += int128(p);
        r[i] = uint64_t(v);
    }
    return r;
}

// CRT for residues (r1 mod P1, r2 mod P2), centered into signed 128-bit.
int128 crt_centered(uint64_t r1, uint64_t r2) {
    // r = r1 + P1 * t with t = (r2 - r1) / P1 mod P2.
    static const uint64_t p1_inv_mod_p2 = invmod(P1 % P2, P2);
    const uint64_t d = (r2 >= r1 % P2) ? r2 - r1 % P2 : r2 + P2 - r1 % P2;
    const uint64_t t = mulmod(d, p1_inv_mod_p2, P2);
    const uint128 r = uint128(r1) + uint128(P1) * t;
    static const uint128 M = uint128(P1) * P2;
    if (r > M / 2) return int128(r) - int128(M);
    return int128(r);
}

std::size_t fft_size(std::size_t min_len) {
    std::size_t m = 1;
    while (m < min_len) m <<= 1;
    return m;
}

}  // namespace

std::vector<int128> convolve_exact(const std::vector<int128>& a,
                                   const std::vector<int128>& b,
                                   std::size_t keep) {
    using namespace ntt;
    if (a.empty() || b.empty() || keep == 0) return {};
    const std::size_t full = a.size() + b.size() - 1;
    keep = std::min(keep, full);
    const std::size_t m = fft_size(full);
    if (m > (std::size_t(1) << 31))
        throw std::length_error("convolve_exact: transform size exceeds supported range");

    std::vector<int128> out(keep);
    std::vector<uint64_t> res1, res2;
    for (int pass = 0; pass < 2; ++pass) {
        const uint64_t p = pass == 0 ? P1 : P2;
        const uint64_t g = pass == 0 ? G1 : G2;
        std::vector<uint64_t> fa = reduce_mod(a, p, m);
        std::vector<uint64_t> fb = reduce_mod(b, p, m);
        transform(fa, p, g, false);
        transform(fb, p, g, false);
        for (std::size_t i = 0; i < m; ++i) fa[i] = mulmod(fa[i], fb[i], p);
        transform(fa, p, g, true);
        fa.resize(keep);
        (pass == 0 ? res1 : res2) = std::move(fa);
    }
    for (std::size_t i = 0; i < keep; ++i) out[i] = crt_centered(res1[i], res2[i]);
    return out;
}

std::vector<int128> square_exact(const std::vector<int128>& a, std::size_t keep) {
    using namespace ntt;
    if (a.empty() || keep == 0) return {};
    const std::size_t full = 2 * a.size() - 1;
    keep = std::min(keep, full);
    const std::size_t m = fft_size(full);
    if (m > (std::size_t(1) << 31))
        throw std::length_error("square_exact: transform size exceeds supported range");

    std::vector<int128> out(keep);
    std::vector<uint64_t> res1, res2;
    for (int pass = 0; pass < 2; ++pass) {
        const uint64_t p = pass == 0 ? P1 : P2;
        const uint64_t g = pass == 0 ? G1 : G2;
        std::vector<uint64_t> fa = reduce_mod(a, p, m);
        transform(fa, p, g, false);
        for (std::size_t i = 0; i < m; ++i) fa[i] = mulmod(fa[i], fa[i], p);
        transform(fa, p, g, true);
        fa.resize(keep);
        (pass == 0 ? res1 : res2) = std::move(fa);
    }
    for (std::size_t i = 0; i < keep; ++i) out[i] = crt_centered(res1[i], res2[i]);
    return out;
}

}  // namespace tml
