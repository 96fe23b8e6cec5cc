#include "tml/hecke.hpp"

#include <cmath>
#include <cstring>
#include <stdexcept>

#include "tml/ntt.hpp"
#include "tml/report.hpp"

namespace tml::hecke {

namespace {

// Coefficients of the cube of the pentagonal series (Jacobi):
//   prod_{m>=1} (1 - q^m)^3 = sum_{j>=0} (-1)^j (2j+1) q^{j(j+1)/2}.
// Dense array of the first len coefficients; sparse support of size O(sqrt(len)).
std::vector<int128> eta_cubed(std::size_t len) {
    std::vector<int128> c(len, 0);
    for (uint64_t j = 0;; ++j) {
        const uint64_t e = j * (j + 1) / 2;
        if (e >= len) break;
        const int128 v = int128(2 * j + 1);
        c[e] = (j % 2 == 0) ? v : -v;
    }
    return c;
}

// Sparse self-convolution, exact. Used for the first squaring where the
// support is O(sqrt(len)) and direct pairing beats a transform.
std::vector<int128> square_sparse(const std::vector<int128>& a, std::size_t keep) {
    std::vector<std::pair<std::size_t, int128>> nz;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0) nz.emplace_back(i, a[i]);
    std::vector<int128> out(keep, 0);
    for (std::size_t u = 0; u < nz.size(); ++u) {
        const auto [iu, vu] = nz[u];
        if (2 * iu < keep) out[2 * iu] += vu * vu;
        for (std::size_t w = u + 1; w < nz.size(); ++w) {
            const std::size_t e = iu + nz[w].first;
            if (e >= keep) break;
            out[e] += 2 * vu * nz[w].second;
        }
    }
    return out;
}

}  // namespace

std::vector<int128> build_tau_table(std::size_t n_max) {
    if (n_max < 1) throw std::invalid_argument("build_tau_table: n_max must be >= 1");
    if (n_max > kMaxTauLimit)
        throw std::length_error("build_tau_table: n_max exceeds the exact 128-bit capacity");

    // tau(n) is the coefficient of q^{n-1} in prod (1-q^m)^24.
    const std::size_t len = n_max;
    std::vector<int128> p3 = eta_cubed(len);
    std::vector<int128> p6 = square_sparse(p3, len);
    std::vector<int128> p12 = square_exact(p6, len);
    std::vector<int128> p24 = square_exact(p12, len);

    std::vector<int128> tau(n_max + 1, 0);
    for (std::size_t n = 1; n <= n_max; ++n) tau[n] = p24[n - 1];
    return tau;
}

double HeckeTable::at(uint64_t n) const {
    if (!covers(n)) throw std::out_of_range("HeckeTable: index outside table range");
    return lambda[n];
}

HeckeTable normalize(const std::vector<int128>& tau) {
    if (tau.size() < 2 || tau[1] != 1)
        throw std::invalid_argument("normalize: input is not a tau table (tau(1) != 1)");
    HeckeTable t;
    t.limit = tau.size() - 1;
    t.lambda.assign(tau.size(), 0.0);
    const double half_wm1 = (kWeight - 1) / 2.0;  // 11/2
    for (std::size_t n = 1; n < tau.size(); ++n)
        t.lambda[n] = double(tau[n]) / std::pow(double(n), half_wm1);
    return t;
}

HeckeTable build_hecke_table(std::size_t n_max) { return normalize(build_tau_table(n_max)); }

SatakePair satake(double lambda_p) {
    constexpr double tol = 1e-9;
    if (std::abs(lambda_p) > 2.0 + tol)
        throw std::domain_error("satake: |lambda(p)| exceeds the Deligne range");
    const double half = std::min(std::max(lambda_p / 2.0, -1.0), 1.0);
    const double imag = std::sqrt(std::max(0.0, 1.0 - half * half));
    return {{half, imag}, {half, -imag}};
}

double lambda_prime_power(double lambda_p, unsigned j) {
    if (j == 0) return 1.0;
    double prev = 1.0, cur = lambda_p;
    for (unsigned i = 1; i < j; ++i) {
        const double next = lambda_p * cur - prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

namespace {

// Factorization by trial division; fine for the desk-scale arguments here.
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

}  // namespace

double lambda_of_square(const HeckeTable& t, uint64_t n) {
    if (n == 0) throw std::invalid_argument("lambda_of_square: n must be >= 1");
    double v = 1.0;
    for (const auto& [p, e] : factorize(n)) v *= lambda_prime_power(t.at(p), 2 * e);
    return v;
}

double lambda_multiplicative(const HeckeTable& t, uint64_t n) {
    if (n == 0) throw std::invalid_argument("lambda_multiplicative: n must be >= 1");
    double v = 1.0;
    for (const auto& [p, e] : factorize(n)) v *= lambda_prime_power(t.at(p), e);
    return v;
}

uint64_t divisor_count(uint64_t n) {
    if (n == 0) throw std::invalid_argument("divisor_count: n must be >= 1");
    uint64_t d = 1;
    for (const auto& [p, e] : factorize(n)) d *= (e + 1);
    return d;
}

uint32_t omega(uint64_t n) {
    if (n == 0) throw std::invalid_argument("omega: n must be >= 1");
    return uint32_t(factorize(n).size());
}

std::vector<uint32_t> divisor_count_table(std::size_t n_max) {
    std::vector<uint32_t> d(n_max + 1, 0);
    for (std::size_t i = 1; i <= n_max; ++i)
        for (std::size_t m = i; m <= n_max; m += i) ++d[m];
    return d;
}

void write_tau_cache(const std::string& path, const std::vector<int128>& tau) {
    if (tau.size() < 2) throw std::invalid_argument("write_tau_cache: empty table");
    const uint64_t count = tau.size() - 1;
    std::string buf;
    buf.reserve(16 + 8 * count);
    const char magic[8] = {'T', 'A', 'U', 'V', '1', 0, 0, 0};
    buf.append(magic, 8);
    auto put_u64 = [&buf](uint64_t v) {
        for (int b = 0; b < 8; ++b) buf.push_back(char((v >> (8 * b)) & 0xFF));
    };
    put_u64(count);
    for (uint64_t n = 1; n <= count; ++n) {
        int64_t v;
        try {
            v = checked_int64(tau[n]);
        } catch (const std::overflow_error&) {
            throw std::overflow_error(
                "write_tau_cache: tau(" + std::to_string(n) +
                ") exceeds the int64 cache format; reduce the cached range");
        }
        put_u64(uint64_t(v));
    }
    io::atomic_write_file(path, buf);
}

std::vector<int128> read_tau_cache(const std::string& path) {
    const std::string buf = io::read_file(path);
    if (buf.size() < 16 || std::memcmp(buf.data(), "TAUV1\0\0\0", 8) != 0)
        throw std::runtime_error("read_tau_cache: bad magic in " + path);
    auto get_u64 = [&buf](std::size_t off) {
        uint64_t v = 0;
        for (int b = 0; b < 8; ++b) v |= uint64_t(uint8_t(buf[off + b])) << (8 * b);
        return v;
    };
    const uint64_t count = get_u64(8);
    if (buf.size() != 16 + 8 * count)
        throw std::runtime_error("read_tau_cache: truncated file " + path);
    std::vector<int128> tau(count + 1, 0);
    for (uint64_t n = 1; n <= count; ++n) tau[n] = int128(int64_t(get_u64(8 + 8 * n)));
    if (count >= 1 && tau[1] != 1)
        throw std::runtime_error("read_tau_cache: corrupt table (tau(1) != 1)");
    return tau;
}

}  // namespace tml::hecke
