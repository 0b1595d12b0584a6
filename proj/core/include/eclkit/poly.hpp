#pragma once

#include "eclkit/term.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <utility>
#include <vector>

namespace eclkit {

/// Resource budget for normalization and arithmetic. Exceeding it signals
/// resource exhaustion, not mathematical failure.
struct Limits {
    int max_depth = 32;             // exp tower height
    size_t max_monomials = 1000000; // per polynomial
};

class CanonicalPoly;

/// One exponential factor E(arg)^mult. The argument is canonical, nonzero,
/// and immutable (shared between polynomials).
struct ExpAtom {
    std::shared_ptr<const CanonicalPoly> arg;
    mpz_class mult; // >= 1
};

/// coeff * prod x_i^e_i * prod E(q_j)^m_j. Powers sorted by variable index,
/// atoms sorted descending by argument order with unique arguments.
struct Monomial {
    mpz_class coeff; // != 0
    std::vector<std::pair<int, unsigned long>> powers;
    std::vector<ExpAtom> atoms;
};

/// Canonical form of an exponential polynomial over Z^E: monomials sorted
/// descending by graded-lex key, unique keys, no zero coefficients.
/// Structural equality of canonical forms is deliberately coarser than
/// denotational equality; E is split over top-level sums only where a part
/// has a positive integer coefficient.
class CanonicalPoly {
public:
    CanonicalPoly(); // zero

    static CanonicalPoly from_mpz(mpz_class c);
    static CanonicalPoly from_long(long c);
    static CanonicalPoly variable(int index);
    /// Sorts, merges equal keys, drops zeros. Each monomial must already
    /// have sorted powers/atoms.
    static CanonicalPoly from_monomials(std::vector<Monomial> monos,
                                        const Limits& limits);

    bool is_zero() const { return monos_.empty(); }
    bool is_constant() const;
    /// Value when the polynomial is a constant (including zero).
    mpz_class constant_value() const;
    const std::vector<Monomial>& monomials() const { return monos_; }

    int max_variable() const;
    int tower_height() const;
    void variables(std::vector<int>& out) const; // sorted unique indices

    struct Complexity {
        int tower_height = 0;
        size_t monomial_count = 0;
        size_t coeff_bits = 0;
    };
    Complexity complexity() const;

private:
    std::vector<Monomial> monos_;
};

/// Total order on canonical polynomials (and the pieces it is built from).
/// Returns <0, 0, >0. cmp(a, b) == 0 iff structurally equal.
int cmp(const CanonicalPoly& a, const CanonicalPoly& b);
int cmp_monomial_key(const Monomial& a, const Monomial& b);
bool operator==(const CanonicalPoly& a, const CanonicalPoly& b);
bool operator!=(const CanonicalPoly& a, const CanonicalPoly& b);

struct PolyLess {
    bool operator()(const CanonicalPoly& a, const CanonicalPoly& b) const {
        return cmp(a, b) < 0;
    }
};

CanonicalPoly add(const CanonicalPoly& p, const CanonicalPoly& q,
                  const Limits& limits = {});
CanonicalPoly sub(const CanonicalPoly& p, const CanonicalPoly& q,
                  const Limits& limits = {});
CanonicalPoly neg(const CanonicalPoly& p);
CanonicalPoly mul(const CanonicalPoly& p, const CanonicalPoly& q,
                  const Limits& limits = {});
CanonicalPoly scale(const CanonicalPoly& p, const mpz_class& c);
CanonicalPoly pow_nat(const CanonicalPoly& p, unsigned long e,
                      const Limits& limits = {});

/// Canonical form of E(arg): E(0) -> 1, and E(c*m + rest) splits into
/// E(m)^c * E(rest) for every part with a positive integer coefficient c.
CanonicalPoly exp_atom(const CanonicalPoly& arg, const Limits& limits = {});

CanonicalPoly normalize(const ExpTerm& term, const Limits& limits = {});

/// Assignment must cover every variable occurring in p.
CanonicalPoly substitute(const CanonicalPoly& p,
                         const std::map<int, CanonicalPoly>& assignment,
                         const Limits& limits = {});

/// Substitution x_i -> x_{i+offset} for every variable.
CanonicalPoly shift_variables(const CanonicalPoly& p, int offset,
                              const Limits& limits = {});

/// d/dx_i with (E(u))' = u' E(u).
CanonicalPoly partial_derivative(const CanonicalPoly& p, int var,
                                 const Limits& limits = {});

} // namespace eclkit
