#pragma once

#include <gmpxx.h>

#include <complex>
#include <memory>
#include <vector>

#include "polyfract/errors.hpp"

namespace polyfract {

using Rational = mpq_class;

class CycloField;
using CycloFieldPtr = std::shared_ptr<const CycloField>;

/// The cyclotomic field Q(zeta_n) attached to a J-gon, with n = lcm(2J, 4)
/// so that both the primitive 2J-th root of unity and the imaginary unit are
/// available. For even J this is exactly Q(zeta_{2J}). Elements are stored in
/// the power basis 1, zeta, ..., zeta^{degree-1} modulo the n-th cyclotomic
/// polynomial.
class CycloField : public std::enable_shared_from_this<CycloField> {
public:
    /// Cached field instance for the given polygon order J >= 3.
    static CycloFieldPtr for_gon(int J);

    int gon() const { return J_; }
    /// Order n of the primitive root generating the field.
    int root_order() const { return n_; }
    /// Degree phi(n) of the field over Q; length of coefficient vectors.
    int degree() const { return degree_; }

    /// Coefficients (length degree) of zeta^k reduced modulo the cyclotomic
    /// polynomial, for any integer k (taken mod n).
    const std::vector<Rational>& zeta_power(long k) const;

    /// The n-th cyclotomic polynomial, monic, ascending coefficients.
    const std::vector<Rational>& modulus() const { return modulus_; }

private:
    explicit CycloField(int J);

    int J_;
    int n_;
    int degree_;
    std::vector<Rational> modulus_;
    std::vector<std::vector<Rational>> zeta_powers_;  // index 0..n-1
};

/// Exact element of the cyclotomic field attached to a J-gon, identified with
/// a complex scalar / planar point. Immutable after construction; canonical
/// form (reduced modulo the cyclotomic polynomial, rationals in lowest terms)
/// is maintained by every operation, so equality is coefficient-wise.
class CycloNumber {
public:
    CycloNumber(CycloFieldPtr field, std::vector<Rational> coeffs);

    static CycloNumber zero(const CycloFieldPtr& field);
    static CycloNumber one(const CycloFieldPtr& field);
    static CycloNumber from_rational(const CycloFieldPtr& field, const Rational& value);
    /// zeta_n^k for the field's primitive root.
    static CycloNumber root_power(const CycloFieldPtr& field, long k);
    /// omega^k where omega = e^{i pi / J} is the primitive 2J-th root.
    static CycloNumber omega_power(const CycloFieldPtr& field, long k);
    /// The imaginary unit.
    static CycloNumber imaginary_unit(const CycloFieldPtr& field);

    const CycloFieldPtr& field() const { return field_; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }

    CycloNumber operator+(const CycloNumber& o) const;
    CycloNumber operator-(const CycloNumber& o) const;
    CycloNumber operator-() const;
    CycloNumber operator*(const CycloNumber& o) const;
    CycloNumber operator*(const Rational& r) const;
    /// Field division; throws DivisionByZero when o == 0.
    CycloNumber operator/(const CycloNumber& o) const;
    CycloNumber inverse() const;

    /// Complex conjugate (the automorphism zeta -> zeta^{-1}).
    CycloNumber conj() const;
    /// (z + conj z) / 2.
    CycloNumber real_part() const;
    /// (z - conj z) / (2i).
    CycloNumber imag_part() const;

    bool operator==(const CycloNumber& o) const;
    bool operator!=(const CycloNumber& o) const { return !(*this == o); }
    bool is_zero() const;
    bool is_real() const;
    /// True when the value is a plain rational (all non-constant coeffs zero).
    bool is_rational() const;
    /// The constant coefficient; meaningful when is_rational().
    const Rational& rational_value() const { return coeffs_[0]; }

    /// Exact sign of a real element: 0 decided symbolically (canonical zero),
    /// otherwise by interval evaluation with doubling precision. Throws
    /// NotReal when conj(x) != x, PrecisionExhausted past the bit cap.
    int real_sign() const;

    /// Double-precision embedding (for spatial hashing / rendering only;
    /// never used in exact decisions).
    std::complex<double> to_complex() const;

private:
    void reduce_();

    CycloFieldPtr field_;
    std::vector<Rational> coeffs_;
};

/// sign(a - b) for real cyclotomic numbers.
int compare_real(const CycloNumber& a, const CycloNumber& b);

/// Hard cap (bits) for interval refinement; reads POLYFRACT_PRECISION_CAP,
/// default 4096.
long real_sign_precision_cap();

}  // namespace polyfract
