#include "tml/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tml/numerics.hpp"

namespace tml::transfer {

PhasePolynomial::PhasePolynomial(std::vector<uint64_t> basis) : basis_(std::move(basis)) {
    if (basis_.empty()) throw std::invalid_argument("PhasePolynomial: empty basis");
    if (!std::is_sorted(basis_.begin(), basis_.end()))
        throw std::invalid_argument("PhasePolynomial: basis must be sorted");
}

void PhasePolynomial::add_term(const Key& exponents, cplx coeff) {
    if (exponents.size() != basis_.size())
        throw std::invalid_argument("PhasePolynomial: exponent vector size mismatch");
    auto [it, inserted] = terms_.try_emplace(exponents, coeff);
    if (!inserted) it->second += coeff;
}

void PhasePolynomial::add_integer_term(uint64_t n, cplx coeff) {
    if (n == 0) throw std::invalid_argument("PhasePolynomial: n >= 1 required");
    Key key(basis_.size(), 0);
    for (std::size_t i = 0; i < basis_.size() && n > 1; ++i) {
        while (n % basis_[i] == 0) {
            n /= basis_[i];
            ++key[i];
        }
    }
    if (n > 1)
        throw std::domain_error("PhasePolynomial: integer has a prime outside the basis");
    add_term(key, coeff);
}

PhasePolynomial PhasePolynomial::operator+(const PhasePolynomial& o) const {
    PhasePolynomial out = *this;
    out += o;
    return out;
}

PhasePolynomial& PhasePolynomial::operator+=(const PhasePolynomial& o) {
    if (o.basis_ != basis_) throw std::invalid_argument("PhasePolynomial: basis mismatch");
    for (const auto& [key, coeff] : o.terms_) add_term(key, coeff);
    return *this;
}

PhasePolynomial PhasePolynomial::operator*(const PhasePolynomial& o) const {
    if (o.basis_ != basis_) throw std::invalid_argument("PhasePolynomial: basis mismatch");
    PhasePolynomial out(basis_);
    Key key(basis_.size(), 0);
    for (const auto& [k1, c1] : terms_) {
        for (const auto& [k2, c2] : o.terms_) {
            for (std::size_t i = 0; i < key.size(); ++i) key[i] = k1[i] + k2[i];
            out.add_term(key, c1 * c2);
        }
    }
    return out;
}

PhasePolynomial PhasePolynomial::scaled(cplx factor) const {
    PhasePolynomial out(basis_);
    for (const auto& [key, coeff] : terms_) out.terms_.emplace(key, coeff * factor);
    return out;
}

PhasePolynomial PhasePolynomial::conjugate() const {
    PhasePolynomial out(basis_);
    Key key(basis_.size(), 0);
    for (const auto& [k, c] : terms_) {
        for (std::size_t i = 0; i < key.size(); ++i) key[i] = -k[i];
        out.add_term(key, std::conj(c));
    }
    return out;
}

PhasePolynomial PhasePolynomial::real_part() const {
    return (*this + conjugate()).scaled(0.5);
}

cplx PhasePolynomial::expectation() const {
    const auto it = terms_.find(Key(basis_.size(), 0));
    return it == terms_.end() ? cplx(0.0, 0.0) : it->second;
}

double PhasePolynomial::max_one_sided_monomial() const {
    double best = 1.0;
    for (const auto& [key, coeff] : terms_) {
        (void)coeff;
        double pos = 1.0, neg = 1.0;
        for (std::size_t i = 0; i < key.size(); ++i) {
            for (int e = 0; e < key[i]; ++e) pos *= double(basis_[i]);
            for (int e = 0; e > key[i]; --e) neg *= double(basis_[i]);
        }
        best = std::max(best, std::max(pos, neg));
    }
    return best;
}

PhasePolynomial twisted_sum_polynomial(const hecke::HeckeTable& t, uint64_t x,
                                       const std::vector<uint64_t>& basis) {
    if (!t.covers(x)) throw std::out_of_range("twisted_sum_polynomial: x beyond table");
    PhasePolynomial z(basis);
    for (uint64_t n = 1; n <= x; ++n) z.add_integer_term(n, t.lambda[n]);
    return z;
}

PhasePolynomial interval_sum_polynomial(const moll::MollifierSchedule& s, std::size_t m,
                                        int l, const hecke::HeckeTable& t,
                                        const primes::PrimeList& pl,
                                        const std::vector<uint64_t>& basis) {
    if (m < 1 || m > s.m_count) throw std::out_of_range("interval_sum_polynomial: bad m");
    const double y_lo = s.y_m[m - 1];
    const double y_hi = s.y_m[m];
    if (!t.covers(uint64_t(y_hi)))
        throw std::out_of_range("interval_sum_polynomial: table below interval top");
    PhasePolynomial d(basis);
    const double theta_scale = double(l) / s.log_y;
    for (uint64_t p : pl.primes) {
        const double pd = double(p);
        if (pd <= y_lo) continue;
        if (pd > y_hi) break;
        const double lp = std::log(pd);
        const double lam = t.lambda[p];
        const cplx ph = std::polar(1.0, -theta_scale * lp);
        d.add_integer_term(p, lam * ph / std::sqrt(pd));
        d.add_integer_term(p * p, (lam * lam - 2.0) * ph * ph / (2.0 * pd));
    }
    return d;
}

PhasePolynomial weight_polynomial(const moll::MollifierSchedule& s,
                                  const hecke::HeckeTable& t, const primes::PrimeList& pl,
                                  const std::vector<uint64_t>& basis) {
    PhasePolynomial total(basis);
    const int lr = s.l_range();
    for (int l = -lr; l <= lr; ++l) {
        PhasePolynomial prod(basis);
        prod.add_term(PhasePolynomial::Key(basis.size(), 0), 1.0);
        for (std::size_t m = 1; m <= s.m_count; ++m) {
            const PhasePolynomial re_d =
                interval_sum_polynomial(s, m, l, t, pl, basis).real_part();
            const uint64_t jm = s.j(m);
            // sum_{j<=J} (k-1)^j Re D^j / j!, then squared.
            PhasePolynomial sum(basis);
            sum.add_term(PhasePolynomial::Key(basis.size(), 0), 1.0);
            PhasePolynomial pw(basis);
            pw.add_term(PhasePolynomial::Key(basis.size(), 0), 1.0);
            double coeff = 1.0;
            for (uint64_t j = 1; j <= jm; ++j) {
                pw = pw * re_d;
                coeff *= (s.k - 1.0) / double(j);
                sum += pw.scaled(coeff);
            }
            prod = prod * (sum * sum);
        }
        total += prod;
    }
    return total;
}

TransferCheck orthogonality_transfer_check(uint64_t q, uint64_t x,
                                           const moll::MollifierSchedule& s,
                                           const hecke::HeckeTable& t,
                                           const primes::PrimeList& pl) {
    const uint64_t top = std::max<uint64_t>(x, uint64_t(s.y));
    std::vector<uint64_t> basis;
    for (uint64_t p : pl.primes) {
        if (p > top) break;
        basis.push_back(p);
    }
    if (basis.empty()) throw std::invalid_argument("transfer check: no basis primes");

    const PhasePolynomial z = twisted_sum_polynomial(t, x, basis);
    const PhasePolynomial zz = z * z.conjugate();
    const PhasePolynomial full = zz * weight_polynomial(s, t, pl, basis);

    TransferCheck out;
    out.q = q;
    out.x = x;
    out.expected_side = full.expectation().real();
    out.max_monomial = full.max_one_sided_monomial();
    out.diagonal_exact = out.max_monomial < double(q);

    const chars::CharacterIndex ci = chars::build_index(q);
    PairwiseAccumulator<double> acc;
    for (uint64_t a = 0; a + 1 < q; ++a) {
        const moll::Evaluator ev = [&ci, a](uint64_t p) { return chars::chi_value(ci, a, p); };
        cplx tw(0.0, 0.0);
        for (uint64_t n = 1; n <= x; ++n) tw += t.lambda[n] * chars::chi_value(ci, a, n);
        acc.add(std::norm(tw) * moll::weight_total(s, t, pl, ev));
    }
    out.char_side = acc.total() / double(q - 1);
    out.rel_gap = std::abs(out.char_side - out.expected_side) /
                  std::max(std::abs(out.expected_side), 1e-300);
    return out;
}

}  // namespace tml::transfer
