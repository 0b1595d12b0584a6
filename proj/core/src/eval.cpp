#include "eclkit/eval.hpp"

#include "eclkit/errors.hpp"

namespace eclkit {

Interval eval_poly(const CanonicalPoly& p, const IntervalBox& box, Precision prec,
                   EvalCache* cache) {
    if (p.max_variable() > static_cast<int>(box.size())) {
        throw DomainError("evaluation box does not cover all variables");
    }
    Interval sum = Interval::from_long(0, prec);
    for (const auto& m : p.monomials()) {
        Interval acc = Interval::from_mpz(m.coeff, prec);
        for (const auto& [var, e] : m.powers) {
            acc = mul(acc, pow_nat(box[static_cast<size_t>(var) - 1], e, prec), prec);
        }
        for (const auto& atom : m.atoms) {
            if (cache) {
                EvalCache::Key key{atom.arg.get(), atom.mult};
                auto it = cache->atoms.find(key);
                if (it != cache->atoms.end()) {
                    acc = mul(acc, it->second, prec);
                    continue;
                }
                Interval inner = eval_poly(*atom.arg, box, prec, cache);
                // E(q)^k = E(k q): one exp call regardless of multiplicity
                Interval value =
                    exp_enclosure(mul_mpz(inner, atom.mult, prec), prec);
                cache->atoms.emplace(std::move(key), value);
                acc = mul(acc, value, prec);
            } else {
                Interval inner = eval_poly(*atom.arg, box, prec);
                acc = mul(acc, exp_enclosure(mul_mpz(inner, atom.mult, prec), prec),
                          prec);
            }
        }
        sum = add(sum, acc, prec);
    }
    return sum;
}

} // namespace eclkit
