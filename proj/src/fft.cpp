#include "tml/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace tml {

void fft_pow2(std::vector<cplx>& a, int sign) {
    const std::size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw std::invalid_argument("fft_pow2: length must be a power of two");
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = sign * 2.0 * std::numbers::pi / double(len);
        const cplx w_len(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const cplx u = a[i + j];
                const cplx v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= w_len;
            }
        }
    }
}

namespace {

std::size_t next_pow2(std::size_t v) {
    std::size_t m = 1;
    while (m < v) m <<= 1;
    return m;
}

// e^{sign * pi i * k^2 / n} with k^2 reduced mod 2n in exact integer
// arithmetic; k < 2^32 keeps k*k inside uint64.
cplx chirp_phase(std::size_t k, std::size_t n, int sign) {
    const unsigned long long kk = (unsigned long long)(k) % (2 * n);
    const unsigned long long q = (kk * kk) % (2ULL * n);
    const double ang = sign * std::numbers::pi * double(q) / double(n);
    return {std::cos(ang), std::sin(ang)};
}

}  // namespace

ChirpZ::ChirpZ(std::size_t n, int sign) : n_(n), sign_(sign) {
    if (n == 0) throw std::invalid_argument("ChirpZ: zero length");
    if (n >= (std::size_t(1) << 32)) throw std::length_error("ChirpZ: length too large");
    if (sign != 1 && sign != -1) throw std::invalid_argument("ChirpZ: sign must be +-1");
    m_ = next_pow2(2 * n - 1);
    chirp_.resize(n);
    for (std::size_t k = 0; k < n; ++k) chirp_[k] = chirp_phase(k, n, sign);
    // Kernel b[k] = conj(chirp[|k|]) laid out circularly over length m.
    std::vector<cplx> b(m_, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n; ++k) {
        const cplx v = std::conj(chirp_[k]);
        b[k] = v;
        if (k != 0) b[m_ - k] = v;
    }
    fft_pow2(b, -1);
    kernel_fft_ = std::move(b);
}

std::vector<cplx> ChirpZ::transform(const std::vector<cplx>& in) const {
    if (in.size() != n_) throw std::invalid_argument("ChirpZ::transform: length mismatch");
    std::vector<cplx> a(m_, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n_; ++k) a[k] = in[k] * chirp_[k];
    fft_pow2(a, -1);
    for (std::size_t k = 0; k < m_; ++k) a[k] *= kernel_fft_[k];
    fft_pow2(a, +1);
    const double inv_m = 1.0 / double(m_);
    std::vector<cplx> out(n_);
    for (std::size_t j = 0; j < n_; ++j) out[j] = a[j] * inv_m * chirp_[j];
    return out;
}

std::vector<cplx> dft(const std::vector<cplx>& in, int sign) {
    ChirpZ plan(in.size(), sign);
    return plan.transform(in);
}

}  // namespace tml
