#include "eclkit/poly.hpp"

#include "eclkit/errors.hpp"

#include <algorithm>

namespace eclkit {

namespace {

int cmp_mpz(const mpz_class& a, const mpz_class& b) {
    int c = ::cmp(a, b);
    return c < 0 ? -1 : c > 0 ? 1 : 0;
}

unsigned long grade(const Monomial& m) {
    unsigned long g = 0;
    for (const auto& [var, e] : m.powers) g += e;
    return g;
}

int cmp_atom(const ExpAtom& a, const ExpAtom& b) {
    int c = cmp(*a.arg, *b.arg);
    if (c != 0) return c;
    return cmp_mpz(a.mult, b.mult);
}

} // namespace

// Graded lex on the power product (x1 heaviest), then lexicographic on the
// atom list with recursively ordered arguments.
int cmp_monomial_key(const Monomial& a, const Monomial& b) {
    unsigned long ga = grade(a), gb = grade(b);
    if (ga != gb) return ga < gb ? -1 : 1;
    size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        const auto& [va, ea] = a.powers[i];
        const auto& [vb, eb] = b.powers[j];
        if (va != vb) return va < vb ? 1 : -1; // smaller index present => greater
        if (ea != eb) return ea > eb ? 1 : -1;
        ++i;
        ++j;
    }
    if (i < a.powers.size()) return 1;
    if (j < b.powers.size()) return -1;
    // power products equal: compare atom lists
    size_t n = std::min(a.atoms.size(), b.atoms.size());
    for (size_t k = 0; k < n; ++k) {
        int c = cmp_atom(a.atoms[k], b.atoms[k]);
        if (c != 0) return c;
    }
    if (a.atoms.size() != b.atoms.size()) {
        return a.atoms.size() < b.atoms.size() ? -1 : 1;
    }
    return 0;
}

int cmp(const CanonicalPoly& a, const CanonicalPoly& b) {
    const auto& ma = a.monomials();
    const auto& mb = b.monomials();
    size_t n = std::min(ma.size(), mb.size());
    for (size_t k = 0; k < n; ++k) {
        int c = cmp_monomial_key(ma[k], mb[k]);
        if (c != 0) return c;
        c = cmp_mpz(ma[k].coeff, mb[k].coeff);
        if (c != 0) return c;
    }
    if (ma.size() != mb.size()) return ma.size() < mb.size() ? -1 : 1;
    return 0;
}

bool operator==(const CanonicalPoly& a, const CanonicalPoly& b) {
    return cmp(a, b) == 0;
}

bool operator!=(const CanonicalPoly& a, const CanonicalPoly& b) {
    return cmp(a, b) != 0;
}

CanonicalPoly::CanonicalPoly() = default;

CanonicalPoly CanonicalPoly::from_mpz(mpz_class c) {
    CanonicalPoly p;
    if (sgn(c) != 0) {
        Monomial m;
        m.coeff = std::move(c);
        p.monos_.push_back(std::move(m));
    }
    return p;
}

CanonicalPoly CanonicalPoly::from_long(long c) { return from_mpz(mpz_class(c)); }

CanonicalPoly CanonicalPoly::variable(int index) {
    if (index < 1) throw DomainError("variable index must be >= 1");
    CanonicalPoly p;
    Monomial m;
    m.coeff = 1;
    m.powers.emplace_back(index, 1UL);
    p.monos_.push_back(std::move(m));
    return p;
}

CanonicalPoly CanonicalPoly::from_monomials(std::vector<Monomial> monos,
                                            const Limits& limits) {
    std::sort(monos.begin(), monos.end(), [](const Monomial& a, const Monomial& b) {
        return cmp_monomial_key(a, b) > 0; // descending
    });
    CanonicalPoly p;
    for (auto& m : monos) {
        if (sgn(m.coeff) == 0) continue;
        if (!p.monos_.empty() && cmp_monomial_key(p.monos_.back(), m) == 0) {
            p.monos_.back().coeff += m.coeff;
            if (sgn(p.monos_.back().coeff) == 0) p.monos_.pop_back();
        } else {
            p.monos_.push_back(std::move(m));
        }
    }
    if (p.monos_.size() > limits.max_monomials) {
        throw ResourceLimitError("monomial budget exceeded");
    }
    return p;
}

bool CanonicalPoly::is_constant() const {
    if (monos_.empty()) return true;
    return monos_.size() == 1 && monos_[0].powers.empty() && monos_[0].atoms.empty();
}

mpz_class CanonicalPoly::constant_value() const {
    if (monos_.empty()) return 0;
    if (!is_constant()) throw DomainError("polynomial is not constant");
    return monos_[0].coeff;
}

int CanonicalPoly::max_variable() const {
    int m = 0;
    for (const auto& mono : monos_) {
        for (const auto& [var, e] : mono.powers) m = std::max(m, var);
        for (const auto& atom : mono.atoms) m = std::max(m, atom.arg->max_variable());
    }
    return m;
}

int CanonicalPoly::tower_height() const {
    int h = 0;
    for (const auto& mono : monos_) {
        for (const auto& atom : mono.atoms) {
            h = std::max(h, 1 + atom.arg->tower_height());
        }
    }
    return h;
}

void CanonicalPoly::variables(std::vector<int>& out) const {
    for (const auto& mono : monos_) {
        for (const auto& [var, e] : mono.powers) out.push_back(var);
        for (const auto& atom : mono.atoms) atom.arg->variables(out);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
}

CanonicalPoly::Complexity CanonicalPoly::complexity() const {
    Complexity c;
    c.tower_height = tower_height();
    c.monomial_count = monos_.size();
    for (const auto& mono : monos_) {
        c.coeff_bits = std::max(c.coeff_bits,
                                mpz_sizeinbase(mono.coeff.get_mpz_t(), 2));
        for (const auto& atom : mono.atoms) {
            c.coeff_bits = std::max(c.coeff_bits, atom.arg->complexity().coeff_bits);
        }
    }
    return c;
}

CanonicalPoly add(const CanonicalPoly& p, const CanonicalPoly& q,
                  const Limits& limits) {
    std::vector<Monomial> out;
    out.reserve(p.monomials().size() + q.monomials().size());
    size_t i = 0, j = 0;
    const auto& mp = p.monomials();
    const auto& mq = q.monomials();
    while (i < mp.size() && j < mq.size()) {
        int c = cmp_monomial_key(mp[i], mq[j]);
        if (c > 0) {
            out.push_back(mp[i++]);
        } else if (c < 0) {
            out.push_back(mq[j++]);
        } else {
            Monomial m = mp[i++];
            m.coeff += mq[j++].coeff;
            if (sgn(m.coeff) != 0) out.push_back(std::move(m));
        }
    }
    while (i < mp.size()) out.push_back(mp[i++]);
    while (j < mq.size()) out.push_back(mq[j++]);
    return CanonicalPoly::from_monomials(std::move(out), limits);
}

CanonicalPoly sub(const CanonicalPoly& p, const CanonicalPoly& q,
                  const Limits& limits) {
    return add(p, neg(q), limits);
}

CanonicalPoly neg(const CanonicalPoly& p) {
    std::vector<Monomial> out = p.monomials();
    for (auto& m : out) m.coeff = -m.coeff;
    Limits unlimited;
    unlimited.max_monomials = out.size() + 1;
    return CanonicalPoly::from_monomials(std::move(out), unlimited);
}

CanonicalPoly scale(const CanonicalPoly& p, const mpz_class& c) {
    if (sgn(c) == 0) return CanonicalPoly();
    std::vector<Monomial> out = p.monomials();
    for (auto& m : out) m.coeff *= c;
    Limits unlimited;
    unlimited.max_monomials = out.size() + 1;
    return CanonicalPoly::from_monomials(std::move(out), unlimited);
}

namespace {

Monomial mul_monomials(const Monomial& a, const Monomial& b) {
    Monomial out;
    out.coeff = a.coeff * b.coeff;
    // merge power products
    size_t i = 0, j = 0;
    while (i < a.powers.size() && j < b.powers.size()) {
        if (a.powers[i].first < b.powers[j].first) {
            out.powers.push_back(a.powers[i++]);
        } else if (a.powers[i].first > b.powers[j].first) {
            out.powers.push_back(b.powers[j++]);
        } else {
            out.powers.emplace_back(a.powers[i].first,
                                    a.powers[i].second + b.powers[j].second);
            ++i;
            ++j;
        }
    }
    while (i < a.powers.size()) out.powers.push_back(a.powers[i++]);
    while (j < b.powers.size()) out.powers.push_back(b.powers[j++]);
    // merge atom multisets (both sorted descending by argument)
    size_t k = 0, l = 0;
    while (k < a.atoms.size() && l < b.atoms.size()) {
        int c = cmp(*a.atoms[k].arg, *b.atoms[l].arg);
        if (c > 0) {
            out.atoms.push_back(a.atoms[k++]);
        } else if (c < 0) {
            out.atoms.push_back(b.atoms[l++]);
        } else {
            ExpAtom atom = a.atoms[k++];
            atom.mult += b.atoms[l++].mult;
            out.atoms.push_back(std::move(atom));
        }
    }
    while (k < a.atoms.size()) out.atoms.push_back(a.atoms[k++]);
    while (l < b.atoms.size()) out.atoms.push_back(b.atoms[l++]);
    return out;
}

} // namespace

CanonicalPoly mul(const CanonicalPoly& p, const CanonicalPoly& q,
                  const Limits& limits) {
    const auto& mp = p.monomials();
    const auto& mq = q.monomials();
    if (mp.size() * mq.size() > limits.max_monomials) {
        throw ResourceLimitError("monomial budget exceeded");
    }
    std::vector<Monomial> out;
    out.reserve(mp.size() * mq.size());
    for (const auto& a : mp) {
        for (const auto& b : mq) {
            out.push_back(mul_monomials(a, b));
        }
    }
    return CanonicalPoly::from_monomials(std::move(out), limits);
}

CanonicalPoly pow_nat(const CanonicalPoly& p, unsigned long e, const Limits& limits) {
    CanonicalPoly result = CanonicalPoly::from_long(1);
    CanonicalPoly base = p;
    while (e > 0) {
        if (e & 1UL) result = mul(result, base, limits);
        e >>= 1;
        if (e > 0) base = mul(base, base, limits);
    }
    return result;
}

CanonicalPoly exp_atom(const CanonicalPoly& arg, const Limits& limits) {
    if (arg.is_zero()) return CanonicalPoly::from_long(1);
    if (1 + arg.tower_height() > limits.max_depth) {
        throw ResourceLimitError("exp tower depth budget exceeded");
    }
    std::vector<ExpAtom> atoms;
    std::vector<Monomial> residual;
    for (const auto& m : arg.monomials()) {
        if (sgn(m.coeff) > 0) {
            Monomial unit = m;
            unit.coeff = 1;
            Limits one_mono;
            auto peeled = std::make_shared<CanonicalPoly>(
                CanonicalPoly::from_monomials({std::move(unit)}, one_mono));
            atoms.push_back(ExpAtom{std::move(peeled), m.coeff});
        } else {
            residual.push_back(m);
        }
    }
    if (!residual.empty()) {
        Limits res_lim = limits;
        auto rest = std::make_shared<CanonicalPoly>(
            CanonicalPoly::from_monomials(std::move(residual), res_lim));
        atoms.push_back(ExpAtom{std::move(rest), mpz_class(1)});
    }
    std::sort(atoms.begin(), atoms.end(), [](const ExpAtom& a, const ExpAtom& b) {
        return cmp(*a.arg, *b.arg) > 0;
    });
    Monomial m;
    m.coeff = 1;
    m.atoms = std::move(atoms);
    return CanonicalPoly::from_monomials({std::move(m)}, limits);
}

namespace {

// Raise a product of exponential atoms (a single monomial with coefficient
// +-1 and no variable powers) to a natural power by scaling multiplicities.
CanonicalPoly atom_product_pow(const CanonicalPoly& p, const mpz_class& e,
                               const Limits& limits) {
    if (sgn(e) == 0) return CanonicalPoly::from_long(1);
    if (p.is_constant()) {
        mpz_class c = p.constant_value();
        if (c == 1) return CanonicalPoly::from_long(1);
        if (c == -1) {
            return CanonicalPoly::from_long(mpz_odd_p(e.get_mpz_t()) ? -1 : 1);
        }
        throw ResourceLimitError("power exponent too large for this base");
    }
    if (p.monomials().size() != 1) {
        throw ResourceLimitError("power exponent too large for this base");
    }
    Monomial m = p.monomials()[0];
    if ((m.coeff != 1 && m.coeff != -1) || !m.powers.empty()) {
        throw ResourceLimitError("power exponent too large for this base");
    }
    if (m.coeff == -1 && mpz_even_p(e.get_mpz_t())) m.coeff = 1;
    for (auto& atom : m.atoms) atom.mult *= e;
    return CanonicalPoly::from_monomials({std::move(m)}, limits);
}

} // namespace

CanonicalPoly normalize(const ExpTerm& term, const Limits& limits) {
    switch (term.kind()) {
    case ExpTerm::Kind::Constant:
        return CanonicalPoly::from_mpz(term.constant_value());
    case ExpTerm::Kind::Variable:
        return CanonicalPoly::variable(term.variable_index());
    case ExpTerm::Kind::Sum: {
        CanonicalPoly acc;
        for (const auto& c : term.children()) {
            acc = add(acc, normalize(c, limits), limits);
        }
        return acc;
    }
    case ExpTerm::Kind::Product: {
        CanonicalPoly acc = CanonicalPoly::from_long(1);
        for (const auto& c : term.children()) {
            acc = mul(acc, normalize(c, limits), limits);
        }
        return acc;
    }
    case ExpTerm::Kind::Power: {
        CanonicalPoly base = normalize(term.children()[0], limits);
        const mpz_class& e = term.exponent();
        if (mpz_fits_ulong_p(e.get_mpz_t())) {
            return pow_nat(base, mpz_get_ui(e.get_mpz_t()), limits);
        }
        // Huge exponents are only representable for pure atom products.
        return atom_product_pow(base, e, limits);
    }
    case ExpTerm::Kind::Exp:
        return exp_atom(normalize(term.children()[0], limits), limits);
    }
    throw Error("unreachable term kind");
}

CanonicalPoly substitute(const CanonicalPoly& p,
                         const std::map<int, CanonicalPoly>& assignment,
                         const Limits& limits) {
    CanonicalPoly result;
    for (const auto& m : p.monomials()) {
        CanonicalPoly acc = CanonicalPoly::from_mpz(m.coeff);
        for (const auto& [var, e] : m.powers) {
            auto it = assignment.find(var);
            if (it == assignment.end()) {
                throw DomainError("substitute: no assignment for x" +
                                  std::to_string(var));
            }
            acc = mul(acc, pow_nat(it->second, e, limits), limits);
        }
        for (const auto& atom : m.atoms) {
            CanonicalPoly inner = substitute(*atom.arg, assignment, limits);
            CanonicalPoly split = exp_atom(inner, limits);
            acc = mul(acc, atom_product_pow(split, atom.mult, limits), limits);
        }
        result = add(result, acc, limits);
    }
    return result;
}

CanonicalPoly shift_variables(const CanonicalPoly& p, int offset,
                              const Limits& limits) {
    std::vector<int> vars;
    p.variables(vars);
    std::map<int, CanonicalPoly> assignment;
    for (int v : vars) assignment.emplace(v, CanonicalPoly::variable(v + offset));
    return substitute(p, assignment, limits);
}

CanonicalPoly partial_derivative(const CanonicalPoly& p, int var,
                                 const Limits& limits) {
    if (var < 1) throw DomainError("variable index must be >= 1");
    CanonicalPoly result;
    for (const auto& m : p.monomials()) {
        // power-product part
        for (size_t i = 0; i < m.powers.size(); ++i) {
            if (m.powers[i].first != var) continue;
            Monomial d = m;
            d.coeff *= static_cast<long>(m.powers[i].second);
            if (d.powers[i].second == 1) {
                d.powers.erase(d.powers.begin() + static_cast<long>(i));
            } else {
                d.powers[i].second -= 1;
            }
            result = add(result, CanonicalPoly::from_monomials({std::move(d)}, limits),
                         limits);
        }
        // chain rule through each atom: (E(q)^k)' = k q' E(q)^k
        for (const auto& atom : m.atoms) {
            CanonicalPoly dq = partial_derivative(*atom.arg, var, limits);
            if (dq.is_zero()) continue;
            Monomial base = m;
            base.coeff *= atom.mult;
            result = add(result,
                         mul(CanonicalPoly::from_monomials({std::move(base)}, limits),
                             dq, limits),
                         limits);
        }
    }
    return result;
}

} // namespace eclkit
