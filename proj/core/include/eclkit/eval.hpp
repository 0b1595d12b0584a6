#pragma once

#include "eclkit/interval.hpp"
#include "eclkit/poly.hpp"

#include <map>
#include <utility>

namespace eclkit {

/// Memo for exponential-atom enclosures over one fixed box at one
/// precision. Atom arguments are shared between a system's equations, its
/// Jacobian, and its determinant, so reusing their enclosures saves most of
/// the exp work. Only valid for the (box, precision) pair it was built for.
class EvalCache {
public:
    using Key = std::pair<const CanonicalPoly*, mpz_class>;
    std::map<Key, Interval> atoms;
};

/// Interval enclosure of {p(r) : r in box}. The box must cover every
/// variable of p (variable i reads box[i-1]). Containment-sound; endpoints
/// may overflow to infinities.
Interval eval_poly(const CanonicalPoly& p, const IntervalBox& box, Precision prec,
                   EvalCache* cache = nullptr);

} // namespace eclkit
