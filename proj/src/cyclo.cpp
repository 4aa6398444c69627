#include "polyfract/cyclo.hpp"

#include <mpfr.h>

#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numeric>

namespace polyfract {

namespace {

using Poly = std::vector<Rational>;  // ascending coefficients

int poly_degree(const Poly& p) {
    for (int i = static_cast<int>(p.size()) - 1; i >= 0; --i) {
        if (p[i] != 0) return i;
    }
    return -1;
}

void poly_trim(Poly& p) {
    p.resize(static_cast<size_t>(poly_degree(p) + 1));
}

Poly poly_mul(const Poly& a, const Poly& b) {
    if (a.empty() || b.empty()) return {};
    Poly out(a.size() + b.size() - 1, Rational(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    poly_trim(out);
    return out;
}

/// Division with remainder of a by monic-or-not b; returns quotient, leaves
/// remainder in a.
Poly poly_divmod(Poly& a, const Poly& b) {
    int db = poly_degree(b);
    int da = poly_degree(a);
    if (db < 0) throw DivisionByZero("polynomial division by zero");
    Poly q(da >= db ? da - db + 1 : 0, Rational(0));
    while ((da = poly_degree(a)) >= db) {
        Rational c = a[da] / b[db];
        q[da - db] = c;
        for (int i = 0; i <= db; ++i) a[da - db + i] -= c * b[i];
    }
    poly_trim(a);
    return q;
}

Poly cyclotomic_polynomial(int n) {
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d.
    Poly num(static_cast<size_t>(n) + 1, Rational(0));
    num[0] = -1;
    num[static_cast<size_t>(n)] = 1;
    for (int d = 1; d < n; ++d) {
        if (n % d != 0) continue;
        Poly phi_d = cyclotomic_polynomial(d);
        Poly rem = num;
        Poly q = poly_divmod(rem, phi_d);
        if (poly_degree(rem) >= 0) {
            throw InternalInconsistency("cyclotomic polynomial division left a remainder");
        }
        num = q;
    }
    poly_trim(num);
    return num;
}

int rational_sign(const Rational& r) { return sgn(r); }

}  // namespace

CycloField::CycloField(int J) : J_(J) {
    if (J < 3) throw JTooSmall("polygon order must be at least 3");
    n_ = std::lcm(2 * J, 4);
    modulus_ = cyclotomic_polynomial(n_);
    degree_ = poly_degree(modulus_);
    // zeta^k mod Phi_n for k = 0..n-1 by repeated multiplication by x.
    zeta_powers_.resize(static_cast<size_t>(n_));
    Poly cur(static_cast<size_t>(degree_), Rational(0));
    cur[0] = 1;
    for (int k = 0; k < n_; ++k) {
        zeta_powers_[static_cast<size_t>(k)] = cur;
        // cur <- x * cur mod Phi.
        Poly next(static_cast<size_t>(degree_), Rational(0));
        Rational lead = cur[static_cast<size_t>(degree_ - 1)];
        for (int i = degree_ - 1; i >= 1; --i) next[static_cast<size_t>(i)] = cur[static_cast<size_t>(i - 1)];
        if (lead != 0) {
            for (int i = 0; i < degree_; ++i) {
                next[static_cast<size_t>(i)] -= lead * modulus_[static_cast<size_t>(i)];
            }
        }
        cur = next;
    }
}

CycloFieldPtr CycloField::for_gon(int J) {
    static std::mutex mu;
    static std::map<int, CycloFieldPtr> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(J);
    if (it != cache.end()) return it->second;
    CycloFieldPtr field(new CycloField(J));
    cache.emplace(J, field);
    return field;
}

const std::vector<Rational>& CycloField::zeta_power(long k) const {
    long m = k % n_;
    if (m < 0) m += n_;
    return zeta_powers_[static_cast<size_t>(m)];
}

CycloNumber::CycloNumber(CycloFieldPtr field, std::vector<Rational> coeffs)
    : field_(std::move(field)), coeffs_(std::move(coeffs)) {
    reduce_();
}

void CycloNumber::reduce_() {
    const int d = field_->degree();
    if (static_cast<int>(coeffs_.size()) < d) {
        coeffs_.resize(static_cast<size_t>(d), Rational(0));
        return;
    }
    if (static_cast<int>(coeffs_.size()) == d) return;
    std::vector<Rational> out(coeffs_.begin(), coeffs_.begin() + d);
    for (size_t k = static_cast<size_t>(d); k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        const auto& pw = field_->zeta_power(static_cast<long>(k));
        for (int i = 0; i < d; ++i) out[static_cast<size_t>(i)] += coeffs_[k] * pw[static_cast<size_t>(i)];
    }
    coeffs_ = std::move(out);
}

CycloNumber CycloNumber::zero(const CycloFieldPtr& field) {
    return CycloNumber(field, std::vector<Rational>(static_cast<size_t>(field->degree()), Rational(0)));
}

CycloNumber CycloNumber::one(const CycloFieldPtr& field) {
    return from_rational(field, Rational(1));
}

CycloNumber CycloNumber::from_rational(const CycloFieldPtr& field, const Rational& value) {
    std::vector<Rational> c(static_cast<size_t>(field->degree()), Rational(0));
    c[0] = value;
    return CycloNumber(field, std::move(c));
}

CycloNumber CycloNumber::root_power(const CycloFieldPtr& field, long k) {
    return CycloNumber(field, field->zeta_power(k));
}

CycloNumber CycloNumber::omega_power(const CycloFieldPtr& field, long k) {
    const long stride = field->root_order() / (2L * field->gon());
    return root_power(field, k * stride);
}

CycloNumber CycloNumber::imaginary_unit(const CycloFieldPtr& field) {
    return root_power(field, field->root_order() / 4);
}

CycloNumber CycloNumber::operator+(const CycloNumber& o) const {
    std::vector<Rational> c(coeffs_);
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.coeffs_[i];
    return CycloNumber(field_, std::move(c));
}

CycloNumber CycloNumber::operator-(const CycloNumber& o) const {
    std::vector<Rational> c(coeffs_);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.coeffs_[i];
    return CycloNumber(field_, std::move(c));
}

CycloNumber CycloNumber::operator-() const {
    std::vector<Rational> c(coeffs_);
    for (auto& x : c) x = -x;
    return CycloNumber(field_, std::move(c));
}

CycloNumber CycloNumber::operator*(const CycloNumber& o) const {
    const size_t d = coeffs_.size();
    std::vector<Rational> conv(2 * d - 1, Rational(0));
    for (size_t i = 0; i < d; ++i) {
        if (coeffs_[i] == 0) continue;
        for (size_t j = 0; j < d; ++j) {
            if (o.coeffs_[j] == 0) continue;
            conv[i + j] += coeffs_[i] * o.coeffs_[j];
        }
    }
    return CycloNumber(field_, std::move(conv));
}

CycloNumber CycloNumber::operator*(const Rational& r) const {
    std::vector<Rational> c(coeffs_);
    for (auto& x : c) x *= r;
    return CycloNumber(field_, std::move(c));
}

CycloNumber CycloNumber::inverse() const {
    if (is_zero()) throw DivisionByZero("inverse of zero cyclotomic number");
    // Extended Euclid in Q[x]: u * this + v * Phi = gcd = constant.
    Poly r0 = field_->modulus();
    Poly r1 = coeffs_;
    poly_trim(r1);
    Poly s0 = {};            // coefficient of `this` in r0
    Poly s1 = {Rational(1)};  // coefficient of `this` in r1
    while (poly_degree(r1) > 0) {
        Poly rem = r0;
        Poly q = poly_divmod(rem, r1);
        Poly qs = poly_mul(q, s1);
        Poly s2 = s0;
        s2.resize(std::max(s2.size(), qs.size()), Rational(0));
        for (size_t i = 0; i < qs.size(); ++i) s2[i] -= qs[i];
        poly_trim(s2);
        r0 = std::move(r1);
        s0 = std::move(s1);
        r1 = std::move(rem);
        s1 = std::move(s2);
    }
    if (poly_degree(r1) != 0) {
        throw InternalInconsistency("cyclotomic modulus not coprime to nonzero element");
    }
    Rational inv_c = Rational(1) / r1[0];
    for (auto& x : s1) x *= inv_c;
    return CycloNumber(field_, std::move(s1));
}

CycloNumber CycloNumber::operator/(const CycloNumber& o) const {
    return *this * o.inverse();
}

CycloNumber CycloNumber::conj() const {
    const int d = field_->degree();
    const int n = field_->root_order();
    std::vector<Rational> out(static_cast<size_t>(d), Rational(0));
    for (int k = 0; k < d; ++k) {
        if (coeffs_[static_cast<size_t>(k)] == 0) continue;
        const auto& pw = field_->zeta_power(static_cast<long>((n - k) % n));
        for (int i = 0; i < d; ++i) {
            out[static_cast<size_t>(i)] += coeffs_[static_cast<size_t>(k)] * pw[static_cast<size_t>(i)];
        }
    }
    return CycloNumber(field_, std::move(out));
}

CycloNumber CycloNumber::real_part() const {
    return (*this + conj()) * Rational(1, 2);
}

CycloNumber CycloNumber::imag_part() const {
    return (*this - conj()) * Rational(1, 2) * (-imaginary_unit(field_));
}

bool CycloNumber::operator==(const CycloNumber& o) const {
    return field_->root_order() == o.field_->root_order() && coeffs_ == o.coeffs_;
}

bool CycloNumber::is_zero() const {
    for (const auto& c : coeffs_) {
        if (c != 0) return false;
    }
    return true;
}

bool CycloNumber::is_real() const { return *this == conj(); }

bool CycloNumber::is_rational() const {
    for (size_t i = 1; i < coeffs_.size(); ++i) {
        if (coeffs_[i] != 0) return false;
    }
    return true;
}

long real_sign_precision_cap() {
    if (const char* env = std::getenv("POLYFRACT_PRECISION_CAP")) {
        long cap = std::atol(env);
        if (cap >= 64) return cap;
    }
    return 4096;
}

int CycloNumber::real_sign() const {
    if (!is_real()) throw NotReal("real_sign applied to a non-real cyclotomic number");
    if (is_zero()) return 0;
    if (is_rational()) return rational_sign(coeffs_[0]);

    const int n = field_->root_order();
    const int d = field_->degree();
    const long cap = real_sign_precision_cap();
    for (long prec = 64; prec <= cap; prec *= 2) {
        mpfr_t sum, sumabs, term, angle, pi, err;
        mpfr_inits2(prec, sum, sumabs, term, angle, pi, err, static_cast<mpfr_ptr>(nullptr));
        mpfr_set_zero(sum, 1);
        mpfr_set_zero(sumabs, 1);
        mpfr_const_pi(pi, MPFR_RNDN);
        for (int k = 0; k < d; ++k) {
            if (coeffs_[static_cast<size_t>(k)] == 0) continue;
            mpfr_mul_si(angle, pi, 2L * k, MPFR_RNDN);
            mpfr_div_si(angle, angle, n, MPFR_RNDN);
            mpfr_cos(angle, angle, MPFR_RNDN);
            mpfr_set_q(term, coeffs_[static_cast<size_t>(k)].get_mpq_t(), MPFR_RNDN);
            mpfr_mul(term, term, angle, MPFR_RNDN);
            mpfr_add(sum, sum, term, MPFR_RNDN);
            mpfr_abs(term, term, MPFR_RNDN);
            mpfr_add(sumabs, sumabs, term, MPFR_RNDN);
        }
        // Conservative rounding-error envelope: every intermediate value is
        // bounded by sumabs + 1 and the whole evaluation performs well under
        // 16*(d+2) roundings of at most half an ulp each.
        mpfr_add_ui(err, sumabs, 1, MPFR_RNDU);
        mpfr_mul_si(err, err, 16L * (d + 2), MPFR_RNDU);
        mpfr_mul_2si(err, err, -prec, MPFR_RNDU);
        int result = 0;
        bool decided = false;
        mpfr_abs(term, sum, MPFR_RNDD);
        if (mpfr_cmp(term, err) > 0) {
            result = mpfr_sgn(sum);
            decided = true;
        }
        mpfr_clears(sum, sumabs, term, angle, pi, err, static_cast<mpfr_ptr>(nullptr));
        if (decided) return result;
    }
    throw PrecisionExhausted("real_sign interval refinement exceeded the precision cap");
}

std::complex<double> CycloNumber::to_complex() const {
    const int n = field_->root_order();
    std::complex<double> out(0.0, 0.0);
    for (size_t k = 0; k < coeffs_.size(); ++k) {
        if (coeffs_[k] == 0) continue;
        double c = coeffs_[k].get_d();
        double a = 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        out += std::complex<double>(c * std::cos(a), c * std::sin(a));
    }
    return out;
}

int compare_real(const CycloNumber& a, const CycloNumber& b) {
    return (a - b).real_sign();
}

}  // namespace polyfract
