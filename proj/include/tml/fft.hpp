#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace tml {

using cplx = std::complex<double>;

// In-place iterative radix-2 FFT, length a power of two.
// sign = -1: forward (e^{-2 pi i jk/n}); sign = +1: inverse without 1/n.
void fft_pow2(std::vector<cplx>& a, int sign);

// Arbitrary-length DFT via the Bluestein chirp-z reduction:
//   out[j] = sum_k in[k] * e^{sign * 2 pi i * jk / n}.
// The quadratic chirp indices are reduced mod 2n before any floating-point
// angle is formed, so accuracy does not degrade with n.
class ChirpZ {
public:
    ChirpZ(std::size_t n, int sign);
    std::size_t length() const { return n_; }
    std::vector<cplx> transform(const std::vector<cplx>& in) const;

private:
    std::size_t n_;
    std::size_t m_;                 // power-of-two convolution length >= 2n-1
    int sign_;
    std::vector<cplx> chirp_;       // w^{k^2/2}, k in [0, n)
    std::vector<cplx> kernel_fft_;  // FFT of the mirrored conjugate chirp
};

// Convenience one-shot wrapper.
std::vector<cplx> dft(const std::vector<cplx>& in, int sign);

}  // namespace tml
