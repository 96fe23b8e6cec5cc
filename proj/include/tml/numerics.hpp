#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace tml {

// Deterministic pairwise (cascade) summation. Result depends only on the
// order of the input values, never on chunking or thread count.
template <typename T>
T pairwise_sum(std::span<const T> v) {
    const std::size_t n = v.size();
    if (n == 0) return T{};
    if (n <= 8) {
        T s{};
        for (const T& x : v) s += x;
        return s;
    }
    const std::size_t h = n / 2;
    return pairwise_sum(v.subspan(0, h)) + pairwise_sum(v.subspan(h));
}

template <typename T>
T pairwise_sum(const std::vector<T>& v) {
    return pairwise_sum(std::span<const T>(v));
}

// Streaming variant: accumulates like binary carry chains, equivalent to
// pairwise summation over the push order.
template <typename T>
class PairwiseAccumulator {
public:
    void add(T x) {
        std::size_t carry = count_++;
        std::size_t level = 0;
        while (carry & 1) {
            x += levels_[level];
            levels_[level] = T{};
            carry >>= 1;
            ++level;
        }
        if (level == levels_.size()) levels_.push_back(T{});
        levels_[level] = x;
    }
    T total() const {
        T s{};
        for (auto it = levels_.rbegin(); it != levels_.rend(); ++it) s += *it;
        return s;
    }
    std::size_t count() const { return count_; }

private:
    std::vector<T> levels_;
    std::size_t count_ = 0;
};

// Adaptive Simpson quadrature with absolute tolerance.
namespace detail {
inline double simpson_step(const std::function<double(double)>& f, double a, double b,
                           double fa, double fm, double fb, double whole, double tol,
                           int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
        return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}
}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol = 1e-10, int max_depth = 40) {
    const double m = 0.5 * (a + b);
    const double fa = f(a), fm = f(m), fb = f(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return detail::simpson_step(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Trapezoid rule on a full period, refined by doubling. Converges
// geometrically for smooth periodic integrands; used for unit-circle averages.
inline double periodic_mean(const std::function<double(double)>& f, double period,
                            double rel_tol = 1e-12, int min_points = 16,
                            int max_points = 1 << 20) {
    int n = min_points;
    double h = period / n;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += f(i * h);
    double mean = sum / n;
    while (n < max_points) {
        // Add the midpoints of the current grid.
        double add = 0.0;
        for (int i = 0; i < n; ++i) add += f((i + 0.5) * h);
        const double next = 0.5 * (mean + add / n);
        n *= 2;
        h *= 0.5;
        const bool converged = std::abs(next - mean) <=
                               rel_tol * std::max(1.0, std::abs(next));
        mean = next;
        if (converged) break;
    }
    return mean;
}

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double slope_stderr = 0.0;   // from residual variance
    double intercept_stderr = 0.0;
    double r2 = 0.0;
};

// Ordinary least squares y = slope*x + intercept.
inline LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
    const std::size_t n = x.size();
    if (n != y.size() || n < 2) throw std::invalid_argument("linear_fit: need n >= 2 equal-length inputs");
    double sx = 0, sy = 0;
    for (std::size_t i = 0; i < n; ++i) { sx += x[i]; sy += y[i]; }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0) throw std::invalid_argument("linear_fit: degenerate abscissae");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    double ss_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.slope * x[i] + fit.intercept);
        ss_res += r * r;
    }
    if (n > 2) {
        const double sigma2 = ss_res / double(n - 2);
        fit.slope_stderr = std::sqrt(sigma2 / sxx);
        fit.intercept_stderr = std::sqrt(sigma2 * (1.0 / double(n) + mx * mx / sxx));
    }
    fit.r2 = (syy == 0) ? 1.0 : 1.0 - ss_res / syy;
    return fit;
}

// Quadratic least squares y = c0 + c1*u + c2*u^2; returns {c0, c1, c2}.
// Used by the constant-fitting oracle with u = 1/log x (intercept = limit).
inline std::array<double, 3> quadratic_fit(std::span<const double> u, std::span<const double> y) {
    const std::size_t n = u.size();
    if (n != y.size() || n < 3) throw std::invalid_argument("quadratic_fit: need n >= 3 equal-length inputs");
    // Normal equations for the 3x3 system, solved by Gaussian elimination.
    double m[3][4] = {};
    for (std::size_t i = 0; i < n; ++i) {
        const double u1 = u[i], u2 = u1 * u1;
        const double row[3] = {1.0, u1, u2};
        for (int r = 0; r < 3; ++r) {
            for (int c = 0; c < 3; ++c) m[r][c] += row[r] * row[c];
            m[r][3] += row[r] * y[i];
        }
    }
    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(m[r][col]) > std::abs(m[piv][col])) piv = r;
        for (int c = 0; c < 4; ++c) std::swap(m[col][c], m[piv][c]);
        if (m[col][col] == 0) throw std::invalid_argument("quadratic_fit: singular system");
        for (int r = 0; r < 3; ++r) {
            if (r == col) continue;
            const double f = m[r][col] / m[col][col];
            for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
        }
    }
    return {m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]};
}

// log(sum(exp(v))) without overflow; -inf for empty input.
inline double log_sum_exp(std::span<const double> v) {
    if (v.empty()) return -std::numeric_limits<double>::infinity();
    double mx = -std::numeric_limits<double>::infinity();
    for (double x : v) mx = std::max(mx, x);
    if (!std::isfinite(mx)) return mx;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

struct MeanStderr {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::size_t n = 0;
};

inline MeanStderr mean_and_stderr(std::span<const double> v) {
    MeanStderr r;
    r.n = v.size();
    if (r.n == 0) return r;
    r.mean = pairwise_sum(v) / double(r.n);
    if (r.n < 2) return r;
    double ss = 0.0;
    for (double x : v) {
        const double d = x - r.mean;
        ss += d * d;
    }
    r.stderr_ = std::sqrt(ss / double(r.n - 1) / double(r.n));
    return r;
}

}  // namespace tml
