#include "oracle.hpp"

#include "eclkit/errors.hpp"

#include <algorithm>
#include <stdexcept>

namespace eclkit::oracle {

RatInterval rat_add(const RatInterval& a, const RatInterval& b) {
    return {a.lo + b.lo, a.hi + b.hi};
}

RatInterval rat_sub(const RatInterval& a, const RatInterval& b) {
    return {a.lo - b.hi, a.hi - b.lo};
}

RatInterval rat_mul(const RatInterval& a, const RatInterval& b) {
    mpq_class p1 = a.lo * b.lo, p2 = a.lo * b.hi, p3 = a.hi * b.lo,
              p4 = a.hi * b.hi;
    mpq_class lo = std::min(std::min(p1, p2), std::min(p3, p4));
    mpq_class hi = std::max(std::max(p1, p2), std::max(p3, p4));
    return {lo, hi};
}

RatInterval rat_pow(const RatInterval& a, unsigned long e) {
    RatInterval out{1, 1};
    RatInterval base = a;
    while (e > 0) {
        if (e & 1UL) out = rat_mul(out, base);
        e >>= 1;
        if (e > 0) base = rat_mul(base, base);
    }
    return out;
}

RatInterval rat_exp(const mpq_class& x, int tail_bits) {
    mpq_class ax = abs(x);
    if (ax > 48) throw std::invalid_argument("rat_exp: |x| too large for the oracle");
    // e^xi <= e^ceil(|x|) <= 3^ceil(|x|)
    mpz_class c = 1;
    mpq_class bound_base = 3;
    mpq_class tmp = ax;
    long ceil_ax = mpz_class(tmp.get_num() / tmp.get_den()).get_si() + 1;
    for (long i = 0; i < ceil_ax; ++i) c *= 3;

    mpq_class tail_limit(1, 1);
    tail_limit >>= tail_bits; // 2^-tail_bits

    mpq_class sum = 1;
    mpq_class term = 1;
    mpq_class bound;
    int n = 0;
    for (;;) {
        ++n;
        term *= x;
        term /= n;
        sum += term;
        // |R_n| <= |x|^(n+1)/(n+1)! * e^|x|
        mpq_class next = abs(term) * ax / (n + 1);
        bound = next * c;
        if (bound < tail_limit && n >= 4) break;
        if (n > 4096) throw std::runtime_error("rat_exp failed to converge");
    }
    return {sum - bound, sum + bound};
}

RatInterval e_enclosure(int tail_bits) { return rat_exp(mpq_class(1), tail_bits); }

RatInterval eval_term(const ExpTerm& t, const std::map<int, mpq_class>& point,
                      int tail_bits) {
    switch (t.kind()) {
    case ExpTerm::Kind::Constant: {
        mpq_class c(t.constant_value());
        return {c, c};
    }
    case ExpTerm::Kind::Variable: {
        auto it = point.find(t.variable_index());
        if (it == point.end()) {
            throw std::invalid_argument("oracle point misses a variable");
        }
        return {it->second, it->second};
    }
    case ExpTerm::Kind::Sum: {
        RatInterval acc{0, 0};
        for (const auto& c : t.children()) {
            acc = rat_add(acc, eval_term(c, point, tail_bits));
        }
        return acc;
    }
    case ExpTerm::Kind::Product: {
        RatInterval acc{1, 1};
        for (const auto& c : t.children()) {
            acc = rat_mul(acc, eval_term(c, point, tail_bits));
        }
        return acc;
    }
    case ExpTerm::Kind::Power: {
        if (!mpz_fits_ulong_p(t.exponent().get_mpz_t())) {
            throw std::invalid_argument("oracle: exponent too large");
        }
        return rat_pow(eval_term(t.children()[0], point, tail_bits),
                       mpz_get_ui(t.exponent().get_mpz_t()));
    }
    case ExpTerm::Kind::Exp: {
        RatInterval a = eval_term(t.children()[0], point, tail_bits);
        RatInterval lo = rat_exp(a.lo, tail_bits);
        RatInterval hi = rat_exp(a.hi, tail_bits);
        return {lo.lo, hi.hi};
    }
    }
    throw std::logic_error("unreachable term kind");
}

int term_sign(const ExpTerm& t, const mpq_class& x) {
    std::map<int, mpq_class> point{{1, x}};
    for (int bits = 96; bits <= 768; bits *= 2) {
        RatInterval v = eval_term(t, point, bits);
        if (v.lo > 0) return 1;
        if (v.hi < 0) return -1;
        if (v.lo == 0 && v.hi == 0) return 0;
        if (v.lo == v.hi) return sgn(v.lo);
    }
    // exp-free terms evaluate exactly, so reaching here with a straddling
    // enclosure means an exact zero of an exp-free combination
    RatInterval v = eval_term(t, point, 96);
    if (v.lo == v.hi) return sgn(v.lo);
    throw std::runtime_error("oracle sign did not resolve; suspicious input");
}

RatInterval bisect_root(const ExpTerm& t, mpq_class lo, mpq_class hi,
                        const mpq_class& width) {
    int slo = term_sign(t, lo);
    int shi = term_sign(t, hi);
    if (slo == 0) return {lo, lo};
    if (shi == 0) return {hi, hi};
    if (slo == shi) throw std::invalid_argument("bisect_root: no sign change");
    while (hi - lo > width) {
        mpq_class mid = (lo + hi) / 2;
        int sm = term_sign(t, mid);
        if (sm == 0) return {mid, mid};
        if (sm == slo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return {lo, hi};
}

std::vector<RatInterval> sample_roots(const ExpTerm& t, const mpq_class& lo,
                                      const mpq_class& hi, int samples,
                                      const mpq_class& width) {
    std::vector<RatInterval> roots;
    mpq_class step = (hi - lo) / samples;
    std::vector<int> signs;
    std::vector<mpq_class> xs;
    for (int i = 0; i <= samples; ++i) {
        mpq_class x = lo + step * i;
        xs.push_back(x);
        signs.push_back(term_sign(t, x));
    }
    for (int i = 0; i <= samples; ++i) {
        if (signs[static_cast<size_t>(i)] == 0) {
            roots.push_back({xs[static_cast<size_t>(i)], xs[static_cast<size_t>(i)]});
        }
    }
    for (int i = 0; i < samples; ++i) {
        int a = signs[static_cast<size_t>(i)], b = signs[static_cast<size_t>(i) + 1];
        if (a != 0 && b != 0 && a != b) {
            roots.push_back(
                bisect_root(t, xs[static_cast<size_t>(i)],
                            xs[static_cast<size_t>(i) + 1], width));
        }
    }
    std::sort(roots.begin(), roots.end(),
              [](const RatInterval& a, const RatInterval& b) { return a.lo < b.lo; });
    return roots;
}

RatInterval omega_enclosure(const mpq_class& width) {
    // x e^x - 1 is increasing on [1/2, 1] and changes sign there
    ExpTerm x = ExpTerm::variable(1);
    ExpTerm g = x * ExpTerm::exp(x) - ExpTerm::constant(1);
    return bisect_root(g, mpq_class(1, 2), mpq_class(1), width);
}

Interval to_interval(const RatInterval& r, Precision prec) {
    Real lo(prec), hi(prec);
    mpfr_set_q(lo.raw(), r.lo.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.raw(), r.hi.get_mpq_t(), MPFR_RNDU);
    return Interval(lo, hi);
}

bool interval_contains(const Interval& outer, const RatInterval& inner) {
    return mpfr_cmp_q(outer.lo().raw(), inner.lo.get_mpq_t()) <= 0 &&
           mpfr_cmp_q(outer.hi().raw(), inner.hi.get_mpq_t()) >= 0;
}

bool interval_contains(const Interval& outer, const mpq_class& value) {
    return mpfr_cmp_q(outer.lo().raw(), value.get_mpq_t()) <= 0 &&
           mpfr_cmp_q(outer.hi().raw(), value.get_mpq_t()) >= 0;
}

bool intervals_overlap(const Interval& a, const RatInterval& b) {
    return mpfr_cmp_q(a.lo().raw(), b.hi.get_mpq_t()) <= 0 &&
           mpfr_cmp_q(a.hi().raw(), b.lo.get_mpq_t()) >= 0;
}

mpq_class mid(const RatInterval& r) { return (r.lo + r.hi) / 2; }

mpq_class rat_from_decimal(const std::string& text) {
    std::string digits;
    bool neg = false;
    long frac_digits = 0;
    bool seen_point = false;
    for (char ch : text) {
        if (ch == '-') {
            neg = true;
        } else if (ch == '+') {
        } else if (ch == '.') {
            seen_point = true;
        } else if (ch >= '0' && ch <= '9') {
            digits += ch;
            if (seen_point) ++frac_digits;
        } else {
            throw std::invalid_argument("rat_from_decimal: bad literal " + text);
        }
    }
    mpz_class num(digits.empty() ? std::string("0") : digits, 10);
    mpz_class den = 1;
    for (long i = 0; i < frac_digits; ++i) den *= 10;
    mpq_class q(num, den);
    q.canonicalize();
    return neg ? mpq_class(-q) : q;
}

} // namespace eclkit::oracle
