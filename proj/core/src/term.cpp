#include "eclkit/term.hpp"

#include "eclkit/errors.hpp"

#include <algorithm>

namespace eclkit {

struct ExpTerm::Node {
    Kind kind = Kind::Constant;
    mpz_class value;              // Constant; also Power exponent
    int var = 0;                  // Variable
    std::vector<ExpTerm> children;
};

ExpTerm::ExpTerm(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

ExpTerm::ExpTerm() {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = 0;
    node_ = std::move(n);
}

ExpTerm ExpTerm::constant(mpz_class value) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = std::move(value);
    return ExpTerm(std::move(n));
}

ExpTerm ExpTerm::variable(int index) {
    if (index < 1) throw DomainError("variable index must be >= 1");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    n->var = index;
    return ExpTerm(std::move(n));
}

ExpTerm ExpTerm::sum(std::vector<ExpTerm> terms) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Sum;
    n->children = std::move(terms);
    return ExpTerm(std::move(n));
}

ExpTerm ExpTerm::product(std::vector<ExpTerm> factors) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Product;
    n->children = std::move(factors);
    return ExpTerm(std::move(n));
}

ExpTerm ExpTerm::power(ExpTerm base, mpz_class exponent) {
    if (sgn(exponent) < 0) throw DomainError("power exponent must be >= 0");
    auto n = std::make_shared<Node>();
    n->kind = Kind::Power;
    n->value = std::move(exponent);
    n->children.push_back(std::move(base));
    return ExpTerm(std::move(n));
}

ExpTerm ExpTerm::exp(ExpTerm argument) {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Exp;
    n->children.push_back(std::move(argument));
    return ExpTerm(std::move(n));
}

ExpTerm::Kind ExpTerm::kind() const { return node_->kind; }

const mpz_class& ExpTerm::constant_value() const { return node_->value; }

int ExpTerm::variable_index() const { return node_->var; }

const std::vector<ExpTerm>& ExpTerm::children() const { return node_->children; }

const mpz_class& ExpTerm::exponent() const { return node_->value; }

int ExpTerm::tower_height() const {
    int h = 0;
    for (const auto& c : node_->children) h = std::max(h, c.tower_height());
    if (node_->kind == Kind::Exp) h += 1;
    return h;
}

int ExpTerm::max_variable() const {
    int m = node_->kind == Kind::Variable ? node_->var : 0;
    for (const auto& c : node_->children) m = std::max(m, c.max_variable());
    return m;
}

size_t ExpTerm::size() const {
    size_t s = 1;
    for (const auto& c : node_->children) s += c.size();
    return s;
}

ExpTerm operator+(const ExpTerm& a, const ExpTerm& b) {
    return ExpTerm::sum({a, b});
}

ExpTerm operator-(const ExpTerm& a, const ExpTerm& b) {
    return ExpTerm::sum({a, ExpTerm::product({ExpTerm::constant(-1), b})});
}

ExpTerm operator*(const ExpTerm& a, const ExpTerm& b) {
    return ExpTerm::product({a, b});
}

ExpTerm ExpTerm::operator-() const {
    return ExpTerm::product({ExpTerm::constant(-1), *this});
}

} // namespace eclkit
