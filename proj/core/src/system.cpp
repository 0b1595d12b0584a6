#include "eclkit/system.hpp"

#include "eclkit/errors.hpp"

namespace eclkit {

KhovanskiiSystem::KhovanskiiSystem(std::vector<CanonicalPoly> equations,
                                   const Limits& limits)
    : n_(static_cast<int>(equations.size())), equations_(std::move(equations)) {
    if (n_ == 0) throw DomainError("a Khovanskii system needs at least one equation");
    for (const auto& f : equations_) {
        if (f.max_variable() > n_) {
            throw DomainError("system is not square: equation mentions x" +
                              std::to_string(f.max_variable()) + " but only " +
                              std::to_string(n_) + " equations given");
        }
    }
    jacobian_.resize(static_cast<size_t>(n_));
    for (int i = 0; i < n_; ++i) {
        jacobian_[static_cast<size_t>(i)].reserve(static_cast<size_t>(n_));
        for (int j = 1; j <= n_; ++j) {
            jacobian_[static_cast<size_t>(i)].push_back(
                partial_derivative(equations_[static_cast<size_t>(i)], j, limits));
        }
    }
    det_ = matrix_det(jacobian_, limits);
}

CanonicalPoly matrix_det(const std::vector<std::vector<CanonicalPoly>>& m,
                         const Limits& limits) {
    size_t n = m.size();
    if (n == 0) return CanonicalPoly::from_long(1);
    if (n == 1) return m[0][0];
    CanonicalPoly det;
    for (size_t col = 0; col < n; ++col) {
        if (m[0][col].is_zero()) continue;
        std::vector<std::vector<CanonicalPoly>> minor;
        minor.reserve(n - 1);
        for (size_t row = 1; row < n; ++row) {
            std::vector<CanonicalPoly> r;
            r.reserve(n - 1);
            for (size_t c = 0; c < n; ++c) {
                if (c != col) r.push_back(m[row][c]);
            }
            minor.push_back(std::move(r));
        }
        CanonicalPoly term = mul(m[0][col], matrix_det(minor, limits), limits);
        det = (col % 2 == 0) ? add(det, term, limits) : sub(det, term, limits);
    }
    return det;
}

KhovanskiiSystem augment_log(const KhovanskiiSystem& s, const Limits& limits) {
    std::vector<CanonicalPoly> eqs;
    eqs.reserve(static_cast<size_t>(s.dimension()) + 1);
    // E(y) - x1 with y re-indexed as the new first variable
    CanonicalPoly f0 = sub(exp_atom(CanonicalPoly::variable(1), limits),
                           CanonicalPoly::variable(2), limits);
    eqs.push_back(std::move(f0));
    for (const auto& f : s.equations()) {
        eqs.push_back(shift_variables(f, 1, limits));
    }
    return KhovanskiiSystem(std::move(eqs), limits);
}

KhovanskiiSystem combine(const KhovanskiiSystem& a, const KhovanskiiSystem* b,
                         CombineOp op, const Limits& limits) {
    const bool binary = op == CombineOp::Sum || op == CombineOp::Product;
    if (binary && b == nullptr) {
        throw DomainError("combine: binary operation needs two systems");
    }
    int na = a.dimension();
    int nb = binary ? b->dimension() : 0;

    CanonicalPoly z = CanonicalPoly::variable(1);
    CanonicalPoly u = CanonicalPoly::variable(2);
    CanonicalPoly v = binary ? CanonicalPoly::variable(na + 2) : CanonicalPoly();

    CanonicalPoly fresh;
    switch (op) {
    case CombineOp::Sum:
        fresh = sub(z, add(u, v, limits), limits);
        break;
    case CombineOp::Product:
        fresh = sub(z, mul(u, v, limits), limits);
        break;
    case CombineOp::Inverse:
        fresh = sub(mul(z, u, limits), CanonicalPoly::from_long(1), limits);
        break;
    case CombineOp::Exp:
        fresh = sub(z, exp_atom(u, limits), limits);
        break;
    }

    std::vector<CanonicalPoly> eqs;
    eqs.reserve(static_cast<size_t>(na + nb) + 1);
    eqs.push_back(std::move(fresh));
    for (const auto& f : a.equations()) eqs.push_back(shift_variables(f, 1, limits));
    if (binary) {
        for (const auto& f : b->equations()) {
            eqs.push_back(shift_variables(f, na + 1, limits));
        }
    }
    return KhovanskiiSystem(std::move(eqs), limits);
}

} // namespace eclkit
