#include "eclkit/formula.hpp"

#include "eclkit/errors.hpp"
#include "eclkit/eval.hpp"

#include <algorithm>

namespace eclkit {

struct ConstraintFormula::Node {
    Kind kind = Kind::Atom;
    ExpTerm lhs, rhs;
    Relation rel = Relation::Eq;
    std::vector<ConstraintFormula> children;
};

ConstraintFormula::ConstraintFormula(std::shared_ptr<const Node> node)
    : node_(std::move(node)) {}

ConstraintFormula ConstraintFormula::atom(ExpTerm lhs, Relation rel, ExpTerm rhs) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Atom;
    n->lhs = std::move(lhs);
    n->rel = rel;
    n->rhs = std::move(rhs);
    return ConstraintFormula(std::move(n));
}

ConstraintFormula ConstraintFormula::conj(ConstraintFormula a, ConstraintFormula b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::And;
    n->children = {std::move(a), std::move(b)};
    return ConstraintFormula(std::move(n));
}

ConstraintFormula ConstraintFormula::disj(ConstraintFormula a, ConstraintFormula b) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Or;
    n->children = {std::move(a), std::move(b)};
    return ConstraintFormula(std::move(n));
}

ConstraintFormula ConstraintFormula::negation(ConstraintFormula a) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Not;
    n->children = {std::move(a)};
    return ConstraintFormula(std::move(n));
}

ConstraintFormula::Kind ConstraintFormula::kind() const { return node_->kind; }
const ExpTerm& ConstraintFormula::lhs() const { return node_->lhs; }
Relation ConstraintFormula::relation() const { return node_->rel; }
const ExpTerm& ConstraintFormula::rhs() const { return node_->rhs; }
const ConstraintFormula& ConstraintFormula::left() const { return node_->children[0]; }
const ConstraintFormula& ConstraintFormula::right() const { return node_->children[1]; }

int ConstraintFormula::max_variable() const {
    if (node_->kind == Kind::Atom) {
        return std::max(node_->lhs.max_variable(), node_->rhs.max_variable());
    }
    int m = 0;
    for (const auto& c : node_->children) m = std::max(m, c.max_variable());
    return m;
}

namespace {

Truth3 eval_atom(const ExpTerm& lhs, Relation rel, const ExpTerm& rhs,
                 const IntervalBox& box, Precision prec, const Limits& limits,
                 bool partial) {
    CanonicalPoly diff = sub(normalize(lhs, limits), normalize(rhs, limits), limits);
    if (diff.is_zero()) {
        // structurally equal sides decide the atom without numerics
        switch (rel) {
        case Relation::Eq: return Truth3::True;
        case Relation::Le: return Truth3::True;
        case Relation::Ne: return Truth3::False;
        case Relation::Lt: return Truth3::False;
        }
    }
    if (partial && diff.max_variable() > static_cast<int>(box.size())) {
        return Truth3::Unknown;
    }
    Interval d = eval_poly(diff, box, prec);
    bool excludes_zero = !d.contains_zero();
    switch (rel) {
    case Relation::Eq:
        if (excludes_zero) return Truth3::False;
        if (d.is_point() && d.lo().is_zero()) return Truth3::True;
        return Truth3::Unknown;
    case Relation::Ne:
        if (excludes_zero) return Truth3::True;
        if (d.is_point() && d.lo().is_zero()) return Truth3::False;
        return Truth3::Unknown;
    case Relation::Lt:
        if (d.hi().sign() < 0) return Truth3::True;
        if (d.lo().sign() >= 0) return Truth3::False;
        return Truth3::Unknown;
    case Relation::Le:
        if (d.hi().sign() <= 0) return Truth3::True;
        if (d.lo().sign() > 0) return Truth3::False;
        return Truth3::Unknown;
    }
    return Truth3::Unknown;
}

Truth3 eval_impl(const ConstraintFormula& f, const IntervalBox& box, Precision prec,
                 const Limits& limits, bool partial) {
    switch (f.kind()) {
    case ConstraintFormula::Kind::Atom:
        return eval_atom(f.lhs(), f.relation(), f.rhs(), box, prec, limits, partial);
    case ConstraintFormula::Kind::And:
        return kleene_and(eval_impl(f.left(), box, prec, limits, partial),
                          eval_impl(f.right(), box, prec, limits, partial));
    case ConstraintFormula::Kind::Or:
        return kleene_or(eval_impl(f.left(), box, prec, limits, partial),
                         eval_impl(f.right(), box, prec, limits, partial));
    case ConstraintFormula::Kind::Not:
        return kleene_not(eval_impl(f.left(), box, prec, limits, partial));
    }
    return Truth3::Unknown;
}

} // namespace

Truth3 eval_formula(const ConstraintFormula& f, const IntervalBox& box,
                    Precision prec, const Limits& limits) {
    if (f.max_variable() > static_cast<int>(box.size())) {
        throw DomainError("evaluation box does not cover all formula variables");
    }
    return eval_impl(f, box, prec, limits, false);
}

Truth3 eval_formula_partial(const ConstraintFormula& f, const IntervalBox& box,
                            Precision prec, const Limits& limits) {
    return eval_impl(f, box, prec, limits, true);
}

} // namespace eclkit
