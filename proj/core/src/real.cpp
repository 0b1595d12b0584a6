#include "eclkit/real.hpp"

#include "eclkit/errors.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace eclkit {

mpfr_rnd_t to_mpfr(Round r) {
    switch (r) {
    case Round::Down: return MPFR_RNDD;
    case Round::Up: return MPFR_RNDU;
    case Round::Nearest: return MPFR_RNDN;
    }
    return MPFR_RNDN;
}

Real::Real() { mpfr_init2(v_, MPFR_PREC_MIN); }

Real::Real(Precision prec) { mpfr_init2(v_, prec); }

Real::Real(const Real& other) {
    mpfr_init2(v_, mpfr_get_prec(other.v_));
    mpfr_set(v_, other.v_, MPFR_RNDN);
}

Real::Real(Real&& other) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, other.v_);
}

Real& Real::operator=(const Real& other) {
    if (this != &other) {
        mpfr_set_prec(v_, mpfr_get_prec(other.v_));
        mpfr_set(v_, other.v_, MPFR_RNDN);
    }
    return *this;
}

Real& Real::operator=(Real&& other) noexcept {
    if (this != &other) mpfr_swap(v_, other.v_);
    return *this;
}

Real::~Real() { mpfr_clear(v_); }

Real Real::from_long(long v, Precision prec, Round r) {
    Real out(prec);
    mpfr_set_si(out.v_, v, to_mpfr(r));
    return out;
}

Real Real::from_double(double v, Precision prec, Round r) {
    Real out(prec);
    mpfr_set_d(out.v_, v, to_mpfr(r));
    return out;
}

Real Real::from_mpz(const mpz_class& v, Precision prec, Round r) {
    Real out(prec);
    mpfr_set_z(out.v_, v.get_mpz_t(), to_mpfr(r));
    return out;
}

Real Real::from_string(const std::string& s, Precision prec, Round r) {
    Real out(prec);
    const char* begin = s.c_str();
    char* end = nullptr;
    mpfr_strtofr(out.v_, begin, &end, 0, to_mpfr(r));
    if (end == begin || (end && *end != '\0')) {
        throw DomainError("not a numeric literal: '" + s + "'");
    }
    return out;
}

Real Real::pos_infinity(Precision prec) {
    Real out(prec);
    mpfr_set_inf(out.v_, +1);
    return out;
}

Real Real::neg_infinity(Precision prec) {
    Real out(prec);
    mpfr_set_inf(out.v_, -1);
    return out;
}

Real Real::zero(Precision prec) {
    Real out(prec);
    mpfr_set_zero(out.v_, +1);
    return out;
}

Precision Real::precision() const { return mpfr_get_prec(v_); }

Real Real::rounded_to(Precision prec, Round r) const {
    Real out(prec);
    mpfr_set(out.v_, v_, to_mpfr(r));
    return out;
}

bool Real::is_nan() const { return mpfr_nan_p(v_) != 0; }
bool Real::is_inf() const { return mpfr_inf_p(v_) != 0; }
bool Real::is_finite() const { return mpfr_number_p(v_) != 0; }
bool Real::is_zero() const { return mpfr_zero_p(v_) != 0; }
int Real::sign() const { return is_nan() ? 0 : mpfr_sgn(v_); }

double Real::to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

long Real::to_long_clamped() const {
    if (is_nan()) return 0;
    if (!mpfr_fits_slong_p(v_, MPFR_RNDN)) {
        return sign() > 0 ? __LONG_MAX__ : -__LONG_MAX__ - 1;
    }
    return mpfr_get_si(v_, MPFR_RNDN);
}

std::string Real::to_decimal(int digits, Round r) const {
    char* buf = nullptr;
    int n = mpfr_asprintf(&buf, r == Round::Down ? "%.*RDg"
                                : r == Round::Up ? "%.*RUg"
                                                 : "%.*RNg",
                          digits, v_);
    if (n < 0 || buf == nullptr) throw Error("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

std::string Real::to_hex() const {
    char* buf = nullptr;
    int n = mpfr_asprintf(&buf, "%Ra", v_);
    if (n < 0 || buf == nullptr) throw Error("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

int cmp(const Real& a, const Real& b) { return mpfr_cmp(a.raw(), b.raw()); }

namespace {
template <typename F>
Real binop(const Real& a, const Real& b, Precision prec, Round r, F f) {
    Real out(prec);
    f(out.raw(), a.raw(), b.raw(), to_mpfr(r));
    return out;
}
} // namespace

Real add(const Real& a, const Real& b, Precision prec, Round r) {
    return binop(a, b, prec, r, mpfr_add);
}
Real sub(const Real& a, const Real& b, Precision prec, Round r) {
    return binop(a, b, prec, r, mpfr_sub);
}
Real mul(const Real& a, const Real& b, Precision prec, Round r) {
    return binop(a, b, prec, r, mpfr_mul);
}
Real div(const Real& a, const Real& b, Precision prec, Round r) {
    return binop(a, b, prec, r, mpfr_div);
}

Real mul_mpz(const Real& a, const mpz_class& m, Precision prec, Round r) {
    Real out(prec);
    mpfr_mul_z(out.raw(), a.raw(), m.get_mpz_t(), to_mpfr(r));
    return out;
}

Real neg(const Real& a, Precision prec, Round r) {
    Real out(prec);
    mpfr_neg(out.raw(), a.raw(), to_mpfr(r));
    return out;
}

Real abs(const Real& a, Precision prec, Round r) {
    Real out(prec);
    mpfr_abs(out.raw(), a.raw(), to_mpfr(r));
    return out;
}

Real pow_ui(const Real& a, unsigned long e, Precision prec, Round r) {
    Real out(prec);
    mpfr_pow_ui(out.raw(), a.raw(), e, to_mpfr(r));
    return out;
}

Real mul_2si(const Real& a, long k, Precision prec, Round r) {
    Real out(prec);
    mpfr_mul_2si(out.raw(), a.raw(), k, to_mpfr(r));
    return out;
}

Real min(const Real& a, const Real& b) { return cmp(a, b) <= 0 ? a : b; }
Real max(const Real& a, const Real& b) { return cmp(a, b) >= 0 ? a : b; }

} // namespace eclkit
