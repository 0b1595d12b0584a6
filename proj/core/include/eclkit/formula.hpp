#pragma once

#include "eclkit/interval.hpp"
#include "eclkit/poly.hpp"
#include "eclkit/term.hpp"

#include <memory>
#include <vector>

namespace eclkit {

enum class Relation { Eq, Ne, Lt, Le };

/// Quantifier-free boolean combination of term comparisons.
class ConstraintFormula {
public:
    enum class Kind { Atom, And, Or, Not };

    static ConstraintFormula atom(ExpTerm lhs, Relation rel, ExpTerm rhs);
    static ConstraintFormula conj(ConstraintFormula a, ConstraintFormula b);
    static ConstraintFormula disj(ConstraintFormula a, ConstraintFormula b);
    static ConstraintFormula negation(ConstraintFormula a);

    Kind kind() const;
    const ExpTerm& lhs() const;
    Relation relation() const;
    const ExpTerm& rhs() const;
    const ConstraintFormula& left() const;  // And/Or; operand for Not
    const ConstraintFormula& right() const; // And/Or

    int max_variable() const;

private:
    struct Node;
    explicit ConstraintFormula(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

/// Three-valued evaluation over a box covering all variables of the formula.
/// True/False are only returned when interval arithmetic proves/refutes the
/// formula for every point of the box. Atoms whose sides normalize to
/// structurally equal polynomials are decided without numerics.
Truth3 eval_formula(const ConstraintFormula& f, const IntervalBox& box,
                    Precision prec, const Limits& limits = {});

/// Like eval_formula, but atoms mentioning a variable beyond the box
/// dimension evaluate to Unknown instead of failing. Used when a prefix of
/// the variables is bound and the tail is implicitly existential.
Truth3 eval_formula_partial(const ConstraintFormula& f, const IntervalBox& box,
                            Precision prec, const Limits& limits = {});

} // namespace eclkit
