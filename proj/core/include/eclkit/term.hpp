#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

namespace eclkit {

/// Immutable expression tree for exponential polynomials. Subtrees are
/// shared; copies are cheap and thread-safe.
class ExpTerm {
public:
    enum class Kind { Constant, Variable, Sum, Product, Power, Exp };

    ExpTerm(); // constant 0

    static ExpTerm constant(mpz_class value);
    static ExpTerm variable(int index); // index >= 1
    static ExpTerm sum(std::vector<ExpTerm> terms);
    static ExpTerm product(std::vector<ExpTerm> factors);
    static ExpTerm power(ExpTerm base, mpz_class exponent); // exponent >= 0
    static ExpTerm exp(ExpTerm argument);

    Kind kind() const;
    const mpz_class& constant_value() const;   // Kind::Constant
    int variable_index() const;                // Kind::Variable
    const std::vector<ExpTerm>& children() const; // Sum/Product; {base} for Power; {arg} for Exp
    const mpz_class& exponent() const;         // Kind::Power

    /// Max nesting of exp nodes.
    int tower_height() const;
    /// Largest variable index occurring in the term, 0 if none.
    int max_variable() const;
    /// Node count.
    size_t size() const;

    // Convenience builders.
    friend ExpTerm operator+(const ExpTerm& a, const ExpTerm& b);
    friend ExpTerm operator-(const ExpTerm& a, const ExpTerm& b);
    friend ExpTerm operator*(const ExpTerm& a, const ExpTerm& b);
    ExpTerm operator-() const;

private:
    struct Node;
    explicit ExpTerm(std::shared_ptr<const Node> node);
    std::shared_ptr<const Node> node_;
};

} // namespace eclkit
