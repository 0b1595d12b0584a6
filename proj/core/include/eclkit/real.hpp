#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <string>

namespace eclkit {

/// Significand precision in bits.
using Precision = mpfr_prec_t;

enum class Round {
    Down,    // toward -inf
    Up,      // toward +inf
    Nearest,
};

mpfr_rnd_t to_mpfr(Round r);

/// Value-semantic wrapper around mpfr_t. Every operation states its target
/// precision and rounding direction explicitly; there is no global rounding
/// state.
class Real {
public:
    Real();                       // NaN at minimal precision
    explicit Real(Precision prec); // NaN at prec
    Real(const Real& other);
    Real(Real&& other) noexcept;
    Real& operator=(const Real& other);
    Real& operator=(Real&& other) noexcept;
    ~Real();

    static Real from_long(long v, Precision prec, Round r = Round::Nearest);
    static Real from_double(double v, Precision prec, Round r = Round::Nearest);
    static Real from_mpz(const mpz_class& v, Precision prec, Round r);
    /// Parses decimal or hexadecimal ("0x...p...") literals.
    static Real from_string(const std::string& s, Precision prec, Round r);
    static Real pos_infinity(Precision prec);
    static Real neg_infinity(Precision prec);
    static Real zero(Precision prec);

    Precision precision() const;
    Real rounded_to(Precision prec, Round r) const;

    bool is_nan() const;
    bool is_inf() const;
    bool is_finite() const;
    bool is_zero() const;
    int sign() const; // -1, 0, +1 (0 for nan)

    double to_double() const;
    long to_long_clamped() const; // rounds to nearest, clamps to long range

    /// Decimal rendering with `digits` significant digits, rounded in
    /// direction r (Round::Down/Up give outward-safe endpoint strings).
    std::string to_decimal(int digits, Round r) const;
    /// Exact hexadecimal-float rendering ("0x1.8p+1"); round-trips bit-exactly
    /// through from_string at the same precision.
    std::string to_hex() const;

    const mpfr_t& raw() const { return v_; }
    mpfr_t& raw() { return v_; }

    friend int cmp(const Real& a, const Real& b); // nan-free inputs
    bool operator==(const Real& b) const { return cmp(*this, b) == 0; }
    bool operator<(const Real& b) const { return cmp(*this, b) < 0; }
    bool operator<=(const Real& b) const { return cmp(*this, b) <= 0; }
    bool operator>(const Real& b) const { return cmp(*this, b) > 0; }
    bool operator>=(const Real& b) const { return cmp(*this, b) >= 0; }

private:
    mpfr_t v_;
};

Real add(const Real& a, const Real& b, Precision prec, Round r);
Real sub(const Real& a, const Real& b, Precision prec, Round r);
Real mul(const Real& a, const Real& b, Precision prec, Round r);
Real div(const Real& a, const Real& b, Precision prec, Round r);
Real mul_mpz(const Real& a, const mpz_class& m, Precision prec, Round r);
Real neg(const Real& a, Precision prec, Round r);
Real abs(const Real& a, Precision prec, Round r);
Real pow_ui(const Real& a, unsigned long e, Precision prec, Round r);
/// a * 2^k, exact apart from precision change.
Real mul_2si(const Real& a, long k, Precision prec, Round r);
Real min(const Real& a, const Real& b);
Real max(const Real& a, const Real& b);

} // namespace eclkit
