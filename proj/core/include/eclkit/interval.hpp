#pragma once

#include "eclkit/real.hpp"

#include <string>
#include <vector>

namespace eclkit {

/// Closed real interval [lo, hi] with outward-rounded endpoints. Every
/// operation takes the target endpoint precision explicitly and preserves
/// containment: the result contains the exact image of the inputs.
class Interval {
public:
    Interval(); // [nan, nan]
    Interval(Real lo, Real hi);

    static Interval point(const Real& x);
    static Interval from_long(long v, Precision prec);
    static Interval from_mpz(const mpz_class& v, Precision prec);
    /// Outward-rounded enclosure of a decimal (or hex-float) literal.
    static Interval from_string(const std::string& s, Precision prec);
    static Interval from_endpoints(const std::string& lo, const std::string& hi,
                                   Precision prec);
    static Interval entire(Precision prec);

    const Real& lo() const { return lo_; }
    const Real& hi() const { return hi_; }

    bool valid() const;       // lo <= hi, neither nan
    bool is_point() const;
    bool is_finite() const;
    bool contains_zero() const;
    bool contains(const Real& x) const;
    bool contains(const Interval& other) const;          // other subset of this
    bool strictly_contains(const Interval& other) const; // other in interior
    bool disjoint(const Interval& other) const;
    bool overlaps(const Interval& other) const { return !disjoint(other); }

    Real width(Precision prec) const;      // hi - lo rounded up
    Real midpoint(Precision prec) const;   // contained in the interval
    Real magnitude(Precision prec) const;  // max(|lo|, |hi|) rounded up

    Interval rounded_to(Precision prec) const; // outward

    /// "[lo, hi]" with decimal endpoints rounded outward at `digits`
    /// significant digits.
    std::string to_string(int digits = 15) const;
    /// "[0x..., 0x...]" exact endpoints; round-trips through parse_hex.
    std::string to_hex() const;
    static Interval parse_hex(const std::string& s, Precision prec);

    bool same_endpoints(const Interval& other) const;

private:
    Real lo_, hi_;
};

Interval add(const Interval& a, const Interval& b, Precision prec);
Interval sub(const Interval& a, const Interval& b, Precision prec);
Interval mul(const Interval& a, const Interval& b, Precision prec);
/// Requires 0 not in b.
Interval div(const Interval& a, const Interval& b, Precision prec);
Interval neg(const Interval& a, Precision prec);
Interval mul_mpz(const Interval& a, const mpz_class& m, Precision prec);
Interval pow_nat(const Interval& a, unsigned long e, Precision prec);
Interval hull(const Interval& a, const Interval& b, Precision prec);
/// Empty result is reported via the bool.
bool intersect(const Interval& a, const Interval& b, Precision prec, Interval& out);
/// Widens every endpoint outward by `rel` of the width plus a few ulp.
Interval inflate(const Interval& a, double rel, Precision prec);

/// Enclosure of ln 2 at the given precision, from the series
/// sum_{k>=1} 1/(k 2^k) with an explicit tail bound; all steps outward
/// rounded.
Interval ln2_enclosure(Precision prec);

/// Enclosure of {e^r : r in x}. Monotone, so only the endpoints are
/// evaluated. Argument reduction x = k ln2 + r, |r| <= ln2/2, then a Taylor
/// polynomial with a Lagrange remainder bound, all in directed rounding.
Interval exp_enclosure(const Interval& x, Precision prec);

/// Box of intervals, one per variable (1-based variable index maps to
/// 0-based component).
using IntervalBox = std::vector<Interval>;

Real box_max_width(const IntervalBox& box, Precision prec);
bool box_contains(const IntervalBox& outer, const IntervalBox& inner);
bool box_strictly_contains(const IntervalBox& outer, const IntervalBox& inner);
bool box_disjoint(const IntervalBox& a, const IntervalBox& b);
std::string box_to_string(const IntervalBox& box, int digits = 15);

/// Kleene three-valued logic.
enum class Truth3 { False, Unknown, True };

Truth3 kleene_and(Truth3 a, Truth3 b);
Truth3 kleene_or(Truth3 a, Truth3 b);
Truth3 kleene_not(Truth3 a);
std::string to_string(Truth3 t);

} // namespace eclkit
