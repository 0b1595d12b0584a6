#include "eclkit/interval.hpp"

#include "eclkit/errors.hpp"

#include <cmath>
#include <map>
#include <mutex>

namespace eclkit {

Interval::Interval() : lo_(), hi_() {}

Interval::Interval(Real lo, Real hi) : lo_(std::move(lo)), hi_(std::move(hi)) {}

Interval Interval::point(const Real& x) { return Interval(x, x); }

Interval Interval::from_long(long v, Precision prec) {
    return Interval(Real::from_long(v, prec, Round::Down),
                    Real::from_long(v, prec, Round::Up));
}

Interval Interval::from_mpz(const mpz_class& v, Precision prec) {
    return Interval(Real::from_mpz(v, prec, Round::Down),
                    Real::from_mpz(v, prec, Round::Up));
}

Interval Interval::from_string(const std::string& s, Precision prec) {
    return Interval(Real::from_string(s, prec, Round::Down),
                    Real::from_string(s, prec, Round::Up));
}

Interval Interval::from_endpoints(const std::string& lo, const std::string& hi,
                                  Precision prec) {
    Interval out(Real::from_string(lo, prec, Round::Down),
                 Real::from_string(hi, prec, Round::Up));
    if (!out.valid()) throw DomainError("interval endpoints out of order");
    return out;
}

Interval Interval::entire(Precision prec) {
    return Interval(Real::neg_infinity(prec), Real::pos_infinity(prec));
}

bool Interval::valid() const {
    return !lo_.is_nan() && !hi_.is_nan() && cmp(lo_, hi_) <= 0;
}

bool Interval::is_point() const { return valid() && cmp(lo_, hi_) == 0; }

bool Interval::is_finite() const { return lo_.is_finite() && hi_.is_finite(); }

bool Interval::contains_zero() const {
    return lo_.sign() <= 0 && hi_.sign() >= 0;
}

bool Interval::contains(const Real& x) const {
    return cmp(lo_, x) <= 0 && cmp(x, hi_) <= 0;
}

bool Interval::contains(const Interval& other) const {
    return cmp(lo_, other.lo_) <= 0 && cmp(other.hi_, hi_) <= 0;
}

bool Interval::strictly_contains(const Interval& other) const {
    return cmp(lo_, other.lo_) < 0 && cmp(other.hi_, hi_) < 0;
}

bool Interval::disjoint(const Interval& other) const {
    return cmp(hi_, other.lo_) < 0 || cmp(other.hi_, lo_) < 0;
}

Real Interval::width(Precision prec) const {
    return sub(hi_, lo_, prec, Round::Up);
}

Real Interval::midpoint(Precision prec) const {
    Real m = mul_2si(add(lo_, hi_, prec, Round::Nearest), -1, prec, Round::Nearest);
    if (!lo_.is_finite() || !hi_.is_finite()) {
        if (lo_.is_finite()) return lo_;
        if (hi_.is_finite()) return hi_;
        return Real::zero(prec);
    }
    // Rounding may nudge the value outside a very thin interval.
    if (cmp(m, lo_) < 0) return lo_.rounded_to(prec, Round::Up);
    if (cmp(m, hi_) > 0) return hi_.rounded_to(prec, Round::Down);
    return m;
}

Real Interval::magnitude(Precision prec) const {
    return max(abs(lo_, prec, Round::Up), abs(hi_, prec, Round::Up));
}

Interval Interval::rounded_to(Precision prec) const {
    return Interval(lo_.rounded_to(prec, Round::Down),
                    hi_.rounded_to(prec, Round::Up));
}

std::string Interval::to_string(int digits) const {
    return "[" + lo_.to_decimal(digits, Round::Down) + ", " +
           hi_.to_decimal(digits, Round::Up) + "]";
}

std::string Interval::to_hex() const {
    return "[" + lo_.to_hex() + ", " + hi_.to_hex() + "]";
}

Interval Interval::parse_hex(const std::string& s, Precision prec) {
    size_t open = s.find('[');
    size_t comma = s.find(',');
    size_t close = s.rfind(']');
    if (open == std::string::npos || comma == std::string::npos ||
        close == std::string::npos || !(open < comma && comma < close)) {
        throw DomainError("malformed interval record: '" + s + "'");
    }
    auto trim = [](std::string t) {
        size_t b = t.find_first_not_of(" \t");
        size_t e = t.find_last_not_of(" \t");
        if (b == std::string::npos) return std::string();
        return t.substr(b, e - b + 1);
    };
    std::string lo = trim(s.substr(open + 1, comma - open - 1));
    std::string hi = trim(s.substr(comma + 1, close - comma - 1));
    return from_endpoints(lo, hi, prec);
}

bool Interval::same_endpoints(const Interval& other) const {
    return cmp(lo_, other.lo_) == 0 && cmp(hi_, other.hi_) == 0;
}

Interval add(const Interval& a, const Interval& b, Precision prec) {
    return Interval(add(a.lo(), b.lo(), prec, Round::Down),
                    add(a.hi(), b.hi(), prec, Round::Up));
}

Interval sub(const Interval& a, const Interval& b, Precision prec) {
    return Interval(sub(a.lo(), b.hi(), prec, Round::Down),
                    sub(a.hi(), b.lo(), prec, Round::Up));
}

namespace {
// 0 * inf yields NaN in mpfr; the interval convention for that corner is 0.
Real fix_nan_zero(Real x, Precision prec) {
    if (x.is_nan()) return Real::zero(prec);
    return x;
}
} // namespace

Interval mul(const Interval& a, const Interval& b, Precision prec) {
    const Real* as[2] = {&a.lo(), &a.hi()};
    const Real* bs[2] = {&b.lo(), &b.hi()};
    Real lo, hi;
    bool first = true;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Real d = fix_nan_zero(mul(*as[i], *bs[j], prec, Round::Down), prec);
            Real u = fix_nan_zero(mul(*as[i], *bs[j], prec, Round::Up), prec);
            if (first) {
                lo = d;
                hi = u;
                first = false;
            } else {
                lo = min(lo, d);
                hi = max(hi, u);
            }
        }
    }
    return Interval(lo, hi);
}

Interval div(const Interval& a, const Interval& b, Precision prec) {
    if (b.contains_zero()) throw DomainError("interval division by an enclosure of 0");
    const Real* as[2] = {&a.lo(), &a.hi()};
    const Real* bs[2] = {&b.lo(), &b.hi()};
    Real lo, hi;
    bool first = true;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            Real d = div(*as[i], *bs[j], prec, Round::Down);
            Real u = div(*as[i], *bs[j], prec, Round::Up);
            if (first) {
                lo = d;
                hi = u;
                first = false;
            } else {
                lo = min(lo, d);
                hi = max(hi, u);
            }
        }
    }
    return Interval(lo, hi);
}

Interval neg(const Interval& a, Precision prec) {
    return Interval(neg(a.hi(), prec, Round::Down), neg(a.lo(), prec, Round::Up));
}

Interval mul_mpz(const Interval& a, const mpz_class& m, Precision prec) {
    if (sgn(m) >= 0) {
        return Interval(mul_mpz(a.lo(), m, prec, Round::Down),
                        mul_mpz(a.hi(), m, prec, Round::Up));
    }
    return Interval(mul_mpz(a.hi(), m, prec, Round::Down),
                    mul_mpz(a.lo(), m, prec, Round::Up));
}

Interval pow_nat(const Interval& a, unsigned long e, Precision prec) {
    if (e == 0) return Interval::from_long(1, prec);
    if (e == 1) return a.rounded_to(prec);
    if (e % 2 == 1 || a.lo().sign() >= 0) {
        return Interval(pow_ui(a.lo(), e, prec, Round::Down),
                        pow_ui(a.hi(), e, prec, Round::Up));
    }
    if (a.hi().sign() <= 0) {
        return Interval(pow_ui(a.hi(), e, prec, Round::Down),
                        pow_ui(a.lo(), e, prec, Round::Up));
    }
    // Even power of an interval straddling zero.
    Real m = a.magnitude(prec);
    return Interval(Real::zero(prec), pow_ui(m, e, prec, Round::Up));
}

Interval hull(const Interval& a, const Interval& b, Precision prec) {
    return Interval(min(a.lo(), b.lo()).rounded_to(prec, Round::Down),
                    max(a.hi(), b.hi()).rounded_to(prec, Round::Up));
}

bool intersect(const Interval& a, const Interval& b, Precision prec, Interval& out) {
    if (a.disjoint(b)) return false;
    out = Interval(max(a.lo(), b.lo()).rounded_to(prec, Round::Down),
                   min(a.hi(), b.hi()).rounded_to(prec, Round::Up));
    return true;
}

Interval inflate(const Interval& a, double rel, Precision prec) {
    Real pad = mul(a.width(prec), Real::from_double(rel, prec, Round::Up), prec,
                   Round::Up);
    // A few ulp of absolute padding so point intervals widen too.
    Real tiny = mul_2si(max(Real::from_long(1, prec), a.magnitude(prec)),
                        -static_cast<long>(prec) + 4, prec, Round::Up);
    pad = add(pad, tiny, prec, Round::Up);
    return Interval(sub(a.lo(), pad, prec, Round::Down),
                    add(a.hi(), pad, prec, Round::Up));
}

Interval ln2_enclosure(Precision prec) {
    static std::mutex mu;
    static std::map<Precision, Interval> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(prec);
        if (it != cache.end()) return it->second;
    }

    const Precision w = prec + 16;
    const long terms = static_cast<long>(w) + 4;
    Real slo = Real::zero(w);
    Real shi = Real::zero(w);
    Real one = Real::from_long(1, w);
    for (long k = 1; k <= terms; ++k) {
        // 1/(k 2^k), the mul_2si is exact
        Real td = mul_2si(div(one, Real::from_long(k, w), w, Round::Down), -k, w,
                          Round::Down);
        Real tu = mul_2si(div(one, Real::from_long(k, w), w, Round::Up), -k, w,
                          Round::Up);
        slo = add(slo, td, w, Round::Down);
        shi = add(shi, tu, w, Round::Up);
    }
    // tail: sum_{k>terms} 1/(k 2^k) < 2^-terms
    shi = add(shi, mul_2si(one, -terms, w, Round::Up), w, Round::Up);
    Interval out(slo.rounded_to(prec, Round::Down), shi.rounded_to(prec, Round::Up));

    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(prec, out);
    return out;
}

namespace {

// Smallest Taylor degree N with 2 * 0.5^(N+1) / (N+1)! < 2^-(bits).
int taylor_degree(Precision bits) {
    double log2fact = 0.0;
    for (int n = 1; n < 512; ++n) {
        log2fact += std::log2(static_cast<double>(n + 1));
        double log2bound = 1.0 - (n + 1) - log2fact;
        if (log2bound < -static_cast<double>(bits + 4)) return n;
    }
    throw Error("taylor_degree: unreachable precision request");
}

struct ExpPlan {
    int degree;
    Real inv_fact_2x; // 2 / (degree+1)! rounded up at the working precision
};

const ExpPlan& exp_plan(Precision w) {
    static std::mutex mu;
    static std::map<Precision, ExpPlan> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(w);
    if (it != cache.end()) return it->second;
    ExpPlan plan;
    plan.degree = taylor_degree(w);
    mpz_class fact = 1;
    for (int i = 2; i <= plan.degree + 1; ++i) fact *= i;
    plan.inv_fact_2x = div(Real::from_long(2, w), Real::from_mpz(fact, w, Round::Down),
                           w, Round::Up);
    return cache.emplace(w, std::move(plan)).first->second;
}

Interval div_ui(const Interval& a, unsigned long d, Precision prec) {
    Real lo(prec), hi(prec);
    mpfr_div_ui(lo.raw(), a.lo().raw(), d, MPFR_RNDD);
    mpfr_div_ui(hi.raw(), a.hi().raw(), d, MPFR_RNDU);
    return Interval(lo, hi);
}

// Tight two-sided enclosure of e^x for a single point x (possibly infinite).
Interval exp_point(const Real& x, Precision prec) {
    if (x.is_nan()) {
        return Interval(Real::zero(prec), Real::pos_infinity(prec));
    }
    if (x.is_inf()) {
        if (x.sign() > 0) {
            return Interval(Real::pos_infinity(prec), Real::pos_infinity(prec));
        }
        return Interval(Real::zero(prec), Real::zero(prec));
    }

    const Precision w = prec + 32;
    const Interval ln2 = ln2_enclosure(w);

    Real t = div(x, ln2.lo(), 64, Round::Nearest);
    long k = t.to_long_clamped();
    const long kmax = 1L << 55;
    if (k > kmax || k < -kmax) {
        // Saturate far outside any desk-scale range; still sound.
        if (k > 0) {
            return Interval(mul_2si(Real::from_long(1, prec), kmax, prec, Round::Down),
                            Real::pos_infinity(prec));
        }
        return Interval(Real::zero(prec),
                        mul_2si(Real::from_long(1, prec), -kmax, prec, Round::Up));
    }

    // r = x - k ln2, |r| <= ln2/2 up to enclosure noise
    Interval r = sub(Interval::point(x), mul_mpz(ln2, mpz_class(k), w), w);

    const ExpPlan& plan = exp_plan(w);
    const int n_terms = plan.degree;
    Interval one = Interval::from_long(1, w);
    Interval acc = one;
    for (int i = n_terms; i >= 1; --i) {
        acc = add(one, div_ui(mul(r, acc, w), static_cast<unsigned long>(i), w), w);
    }
    // Lagrange remainder: |R| <= 2 |r|^(N+1) / (N+1)!  (e^xi <= e^0.5 < 2)
    Real m = r.magnitude(w);
    if (cmp(m, Real::from_double(0.5, w, Round::Down)) > 0) {
        throw Error("exp argument reduction out of range");
    }
    Real bound = mul(pow_ui(m, static_cast<unsigned long>(n_terms) + 1, w, Round::Up),
                     plan.inv_fact_2x, w, Round::Up);
    acc = add(acc, Interval(neg(bound, w, Round::Down), bound), w);

    Real lo = mul_2si(acc.lo(), k, w, Round::Down).rounded_to(prec, Round::Down);
    Real hi = mul_2si(acc.hi(), k, w, Round::Up).rounded_to(prec, Round::Up);
    if (lo.sign() < 0) lo = Real::zero(prec);
    return Interval(lo, hi);
}

} // namespace

Interval exp_enclosure(const Interval& x, Precision prec) {
    Interval at_lo = exp_point(x.lo(), prec);
    Interval at_hi = exp_point(x.hi(), prec);
    return Interval(at_lo.lo(), at_hi.hi());
}

Real box_max_width(const IntervalBox& box, Precision prec) {
    Real w = Real::zero(prec);
    for (const auto& iv : box) w = max(w, iv.width(prec));
    return w;
}

bool box_contains(const IntervalBox& outer, const IntervalBox& inner) {
    if (outer.size() != inner.size()) return false;
    for (size_t i = 0; i < outer.size(); ++i) {
        if (!outer[i].contains(inner[i])) return false;
    }
    return true;
}

bool box_strictly_contains(const IntervalBox& outer, const IntervalBox& inner) {
    if (outer.size() != inner.size()) return false;
    for (size_t i = 0; i < outer.size(); ++i) {
        if (!outer[i].strictly_contains(inner[i])) return false;
    }
    return true;
}

bool box_disjoint(const IntervalBox& a, const IntervalBox& b) {
    if (a.size() != b.size()) return false;
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i].disjoint(b[i])) return true;
    }
    return false;
}

std::string box_to_string(const IntervalBox& box, int digits) {
    std::string out;
    for (size_t i = 0; i < box.size(); ++i) {
        if (i) out += "; ";
        out += box[i].to_string(digits);
    }
    return out;
}

Truth3 kleene_and(Truth3 a, Truth3 b) {
    if (a == Truth3::False || b == Truth3::False) return Truth3::False;
    if (a == Truth3::True && b == Truth3::True) return Truth3::True;
    return Truth3::Unknown;
}

Truth3 kleene_or(Truth3 a, Truth3 b) {
    if (a == Truth3::True || b == Truth3::True) return Truth3::True;
    if (a == Truth3::False && b == Truth3::False) return Truth3::False;
    return Truth3::Unknown;
}

Truth3 kleene_not(Truth3 a) {
    if (a == Truth3::True) return Truth3::False;
    if (a == Truth3::False) return Truth3::True;
    return Truth3::Unknown;
}

std::string to_string(Truth3 t) {
    switch (t) {
    case Truth3::True: return "true";
    case Truth3::False: return "false";
    case Truth3::Unknown: return "unknown";
    }
    return "unknown";
}

} // namespace eclkit
