#pragma once

// Independent test oracles built on exact GMP rational arithmetic. These
// share no evaluation code with the interval/solver path they are used to
// check: terms are evaluated straight off the expression tree, exp through
// its Taylor series with an explicit remainder bound, roots through sign
// bisection at rational points.

#include "eclkit/interval.hpp"
#include "eclkit/term.hpp"

#include <gmpxx.h>

#include <map>
#include <vector>

namespace eclkit::oracle {

/// Exact rational interval. All field operations are exact; width is only
/// introduced by exp truncation.
struct RatInterval {
    mpq_class lo, hi;

    bool contains_zero() const { return lo <= 0 && hi >= 0; }
    mpq_class width() const { return hi - lo; }
};

RatInterval rat_add(const RatInterval& a, const RatInterval& b);
RatInterval rat_sub(const RatInterval& a, const RatInterval& b);
RatInterval rat_mul(const RatInterval& a, const RatInterval& b);
RatInterval rat_pow(const RatInterval& a, unsigned long e);

/// Enclosure of e^x with truncation error below 2^-tail_bits. Requires
/// |x| <= 16.
RatInterval rat_exp(const mpq_class& x, int tail_bits);

/// Enclosure of e = exp(1).
RatInterval e_enclosure(int tail_bits);

/// Evaluate a term at an exact rational point. Every exp call contributes
/// at most 2^-tail_bits of relative slack.
RatInterval eval_term(const ExpTerm& t, const std::map<int, mpq_class>& point,
                      int tail_bits);

/// Sign of a term at a rational point: -1, 0, +1. Escalates the exp tail
/// precision until the sign resolves; throws if the enclosure still
/// straddles zero at the maximum (only possible for an exact rational zero
/// of a transcendental combination, i.e. never for the corpora used here).
int term_sign(const ExpTerm& t, const mpq_class& x);

/// Bisection on a sign change of a univariate term (variable x1). Requires
/// opposite nonzero signs at lo and hi; returns a bracket of width below
/// `width`.
RatInterval bisect_root(const ExpTerm& t, mpq_class lo, mpq_class hi,
                        const mpq_class& width);

/// Dense-sampling root search for a univariate term on [lo, hi]: signs at
/// `samples`+1 equally spaced rational points, exact zeros kept as point
/// roots, every sign change bisected to `width`. Misses root pairs inside a
/// single sample cell by construction (the corpora are generated to keep
/// roots separated).
std::vector<RatInterval> sample_roots(const ExpTerm& t, const mpq_class& lo,
                                      const mpq_class& hi, int samples,
                                      const mpq_class& width);

/// Omega = the root of x e^x - 1 (Lambert W at 1), bracketed to `width`.
RatInterval omega_enclosure(const mpq_class& width);

// conversions and containment checks against the interval side
Interval to_interval(const RatInterval& r, Precision prec);
bool interval_contains(const Interval& outer, const RatInterval& inner);
bool interval_contains(const Interval& outer, const mpq_class& value);
/// True when the two enclosures intersect (both contain the same true value
/// whenever each is sound).
bool intervals_overlap(const Interval& a, const RatInterval& b);
mpq_class mid(const RatInterval& r);

/// Parse a decimal literal like "-1.8414056604369606" into an exact
/// rational.
mpq_class rat_from_decimal(const std::string& text);

} // namespace eclkit::oracle
