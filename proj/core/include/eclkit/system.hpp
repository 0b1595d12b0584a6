#pragma once

#include "eclkit/poly.hpp"

#include <vector>

namespace eclkit {

/// Square system f_1 = ... = f_n = 0 of exponential polynomials in
/// x_1..x_n, with the side condition |J| != 0 at solutions. The symbolic
/// Jacobian and its determinant are computed on construction. Immutable.
class KhovanskiiSystem {
public:
    explicit KhovanskiiSystem(std::vector<CanonicalPoly> equations,
                              const Limits& limits = {});

    int dimension() const { return n_; }
    const std::vector<CanonicalPoly>& equations() const { return equations_; }
    /// jacobian()[i][j] = d f_{i+1} / d x_{j+1}
    const std::vector<std::vector<CanonicalPoly>>& jacobian() const {
        return jacobian_;
    }
    const CanonicalPoly& jacobian_det() const { return det_; }

private:
    int n_;
    std::vector<CanonicalPoly> equations_;
    std::vector<std::vector<CanonicalPoly>> jacobian_;
    CanonicalPoly det_;
};

/// Exact symbolic determinant by cofactor expansion along the first row.
CanonicalPoly matrix_det(const std::vector<std::vector<CanonicalPoly>>& m,
                         const Limits& limits = {});

/// The (n+1)-variable system (E(y) - x_1, f_1, ..., f_n) with the new
/// variable y first; satisfies det(augmented) = E(y) det(S) symbolically.
KhovanskiiSystem augment_log(const KhovanskiiSystem& s, const Limits& limits = {});

enum class CombineOp { Sum, Product, Inverse, Exp };

/// Renames the operands apart, appends one fresh variable z constrained by
/// the operation (z-(u+v), z-uv, zu-1, or z-E(u) where u, v are the first
/// variables of a and b), and reorders so z is the first coordinate. The
/// determinant of the result is det(a) det(b) times 1 (sum/product/exp) or
/// u (inverse). b is ignored for Inverse and Exp.
KhovanskiiSystem combine(const KhovanskiiSystem& a, const KhovanskiiSystem* b,
                         CombineOp op, const Limits& limits = {});

} // namespace eclkit
