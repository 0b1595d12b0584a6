#include "eclkit/ecl.hpp"

#include "eclkit/errors.hpp"
#include "eclkit/eval.hpp"
#include "eclkit/syntax.hpp"

#include <algorithm>
#include <set>

namespace eclkit {

EclNumber EclNumber::from_certificate(KhovanskiiCertificate cert) {
    if (!verify_certificate(cert)) {
        throw CertifyError("certificate failed re-verification");
    }
    Interval enc = cert.box[0];
    return EclNumber(std::move(cert), std::move(enc));
}

EclNumber ecl_from_system(std::shared_ptr<const KhovanskiiSystem> s,
                          const IntervalBox& box, const SolveConfig& cfg) {
    SolveReport report = solve_in_box(s, box, cfg);
    if (!report.undecided.empty()) {
        throw CertifyError(
            "solution isolation incomplete: " +
            std::to_string(report.undecided.size()) +
            " undecided box(es) remain" +
            (report.budget_exhausted ? " (budget exhausted)" : ""));
    }
    if (report.certificates.size() != 1) {
        throw CertifyError("expected exactly one certified solution, found " +
                           std::to_string(report.certificates.size()));
    }
    return EclNumber::from_certificate(std::move(report.certificates[0]));
}

namespace {

IntervalBox operand_box(const Interval& z_seed, const EclNumber& a,
                        const EclNumber* b, Precision prec) {
    IntervalBox box;
    box.push_back(inflate(z_seed, 0.25, prec));
    for (const auto& iv : a.certificate().box) box.push_back(iv);
    if (b) {
        for (const auto& iv : b->certificate().box) box.push_back(iv);
    }
    return box;
}

} // namespace

EclNumber ecl_add(const EclNumber& a, const EclNumber& b, const SolveConfig& cfg) {
    auto sys = std::make_shared<KhovanskiiSystem>(
        combine(a.system(), &b.system(), CombineOp::Sum, cfg.limits));
    Interval z = add(a.enclosure(), b.enclosure(), cfg.precision);
    return ecl_from_system(sys, operand_box(z, a, &b, cfg.precision), cfg);
}

EclNumber ecl_mul(const EclNumber& a, const EclNumber& b, const SolveConfig& cfg) {
    auto sys = std::make_shared<KhovanskiiSystem>(
        combine(a.system(), &b.system(), CombineOp::Product, cfg.limits));
    Interval z = mul(a.enclosure(), b.enclosure(), cfg.precision);
    return ecl_from_system(sys, operand_box(z, a, &b, cfg.precision), cfg);
}

EclNumber ecl_inv(const EclNumber& a, const SolveConfig& cfg) {
    if (a.enclosure().contains_zero()) {
        throw DomainError("inverse of an enclosure containing 0");
    }
    auto sys = std::make_shared<KhovanskiiSystem>(
        combine(a.system(), nullptr, CombineOp::Inverse, cfg.limits));
    Interval z = div(Interval::from_long(1, cfg.precision), a.enclosure(),
                     cfg.precision);
    return ecl_from_system(sys, operand_box(z, a, nullptr, cfg.precision), cfg);
}

EclNumber ecl_exp(const EclNumber& a, const SolveConfig& cfg) {
    auto sys = std::make_shared<KhovanskiiSystem>(
        combine(a.system(), nullptr, CombineOp::Exp, cfg.limits));
    Interval z = exp_enclosure(a.enclosure(), cfg.precision);
    return ecl_from_system(sys, operand_box(z, a, nullptr, cfg.precision), cfg);
}

EclNumber ecl_log(const EclNumber& a, const SolveConfig& cfg) {
    if (a.enclosure().lo().sign() <= 0) {
        throw DomainError("log of a non-positive enclosure");
    }
    auto sys = std::make_shared<KhovanskiiSystem>(
        augment_log(a.system(), cfg.limits));
    // Rigorous log bracket from the binary exponents of the enclosure:
    // 2^(e-1) <= x < 2^e gives (e-1) ln2 <= ln x <= e ln2.
    const Precision prec = cfg.precision;
    Interval ln2 = ln2_enclosure(prec);
    long e_lo = mpfr_get_exp(a.enclosure().lo().raw());
    long e_hi = mpfr_get_exp(a.enclosure().hi().raw());
    Interval y_seed = hull(mul_mpz(ln2, mpz_class(e_lo - 1), prec),
                           mul_mpz(ln2, mpz_class(e_hi), prec), prec);
    IntervalBox box;
    box.push_back(inflate(y_seed, 0.25, prec));
    for (const auto& iv : a.certificate().box) box.push_back(iv);
    return ecl_from_system(sys, box, cfg);
}

namespace {

// All power products over nvars variables with total degree in [0, max_deg],
// in a deterministic order.
void power_products(int nvars, int max_deg,
                    std::vector<std::vector<std::pair<int, unsigned long>>>& out) {
    std::vector<std::pair<int, unsigned long>> current;
    // recursive enumeration: exponent of each variable from 0..remaining
    struct Rec {
        int nvars;
        int max_deg;
        std::vector<std::vector<std::pair<int, unsigned long>>>& out;
        std::vector<std::pair<int, unsigned long>>& current;
        void go(int var, int remaining) {
            if (var > nvars) {
                out.push_back(current);
                return;
            }
            for (int e = 0; e <= remaining; ++e) {
                if (e > 0) current.emplace_back(var, static_cast<unsigned long>(e));
                go(var + 1, remaining - e);
                if (e > 0) current.pop_back();
            }
        }
    } rec{nvars, max_deg, out, current};
    rec.go(1, max_deg);
}

} // namespace

std::vector<CanonicalPoly> SystemEnumerator::polynomial_pool(
    const EnumBounds& bounds, int nvars, const Limits& limits) {
    // Monomial keys: power product (deg <= max_degree) x optional single
    // exponential atom E(q)^m, m <= max_degree, with q drawn from the
    // canonical atom-argument grid one tower level down.
    std::vector<std::vector<std::pair<int, unsigned long>>> pps;
    power_products(nvars, bounds.max_degree, pps);

    // Atom arguments at tower t: coefficient-one single monomials over the
    // tower-(t-1) grid, plus all-negative polynomials from it (the two
    // canonical shapes exp_atom produces).
    std::set<CanonicalPoly, PolyLess> atom_args;
    std::vector<std::vector<ExpAtom>> atom_options;
    atom_options.push_back({}); // no atom
    if (bounds.max_tower >= 1) {
        EnumBounds inner = bounds;
        inner.max_tower = bounds.max_tower - 1;
        std::vector<CanonicalPoly> inner_pool =
            inner.max_tower >= 0 ? polynomial_pool(inner, nvars, limits)
                                 : std::vector<CanonicalPoly>{};
        for (const auto& q : inner_pool) {
            // coefficient-one single monomials
            if (q.monomials().size() == 1) {
                Monomial unit = q.monomials()[0];
                if (unit.coeff != 1) continue;
                atom_args.insert(q);
            }
            // all-negative polynomials
            bool all_neg = !q.is_zero();
            for (const auto& m : q.monomials()) {
                if (sgn(m.coeff) > 0) all_neg = false;
            }
            if (all_neg) atom_args.insert(q);
        }
        for (const auto& q : atom_args) {
            auto shared = std::make_shared<CanonicalPoly>(q);
            for (int m = 1; m <= bounds.max_degree; ++m) {
                atom_options.push_back({ExpAtom{shared, mpz_class(m)}});
            }
        }
    }

    // coefficient values: 0 < |c| <= 2^bits - 1
    std::vector<mpz_class> coeffs;
    mpz_class cmax = (mpz_class(1) << bounds.max_coeff_bits) - 1;
    for (mpz_class c = 1; c <= cmax; ++c) {
        coeffs.push_back(c);
        coeffs.push_back(-c);
    }

    // all monomial keys
    std::vector<Monomial> keys;
    for (const auto& pp : pps) {
        for (const auto& atoms : atom_options) {
            Monomial m;
            m.coeff = 1;
            m.powers = pp;
            m.atoms = atoms;
            keys.push_back(std::move(m));
        }
    }

    // polynomials: nonempty subsets of keys up to max_monomials, each key
    // with every coefficient choice
    std::set<CanonicalPoly, PolyLess> polys;
    std::vector<size_t> subset;
    std::vector<size_t> coeff_idx;
    struct Builder {
        const std::vector<Monomial>& keys;
        const std::vector<mpz_class>& coeffs;
        const Limits& limits;
        std::set<CanonicalPoly, PolyLess>& polys;
        int max_monomials;
        std::vector<size_t> chosen;

        void assign_coeffs(size_t pos, std::vector<Monomial>& monos) {
            if (pos == chosen.size()) {
                auto copy = monos;
                polys.insert(CanonicalPoly::from_monomials(std::move(copy), limits));
                return;
            }
            for (const auto& c : coeffs) {
                monos.push_back(keys[chosen[pos]]);
                monos.back().coeff = c;
                assign_coeffs(pos + 1, monos);
                monos.pop_back();
            }
        }
        void choose(size_t from, int remaining) {
            if (!chosen.empty()) {
                std::vector<Monomial> monos;
                assign_coeffs(0, monos);
            }
            if (remaining == 0) return;
            for (size_t i = from; i < keys.size(); ++i) {
                chosen.push_back(i);
                choose(i + 1, remaining - 1);
                chosen.pop_back();
            }
        }
    } builder{keys, coeffs, limits, polys, bounds.max_monomials, {}};
    builder.choose(0, bounds.max_monomials);

    std::vector<CanonicalPoly> out(polys.begin(), polys.end());
    return out;
}

SystemEnumerator::SystemEnumerator(EnumBounds bounds, const Limits& limits)
    : bounds_(bounds), limits_(limits) {
    if (bounds_.max_n < 1 || bounds_.max_tower < 0 || bounds_.max_coeff_bits < 1 ||
        bounds_.max_monomials < 1 || bounds_.max_degree < 1) {
        exhausted_ = true;
        return;
    }
    load_pool();
}

void SystemEnumerator::load_pool() {
    pool_ = polynomial_pool(bounds_, n_, limits_);
    odometer_.assign(static_cast<size_t>(n_), 0);
    if (pool_.empty()) exhausted_ = true;
}

std::optional<KhovanskiiSystem> SystemEnumerator::next() {
    while (!exhausted_) {
        if (odometer_.empty()) {
            exhausted_ = true;
            break;
        }
        std::vector<CanonicalPoly> eqs;
        eqs.reserve(odometer_.size());
        for (size_t idx : odometer_) eqs.push_back(pool_[idx]);

        // advance the odometer (last index fastest)
        for (size_t i = odometer_.size(); i-- > 0;) {
            if (++odometer_[i] < pool_.size()) break;
            odometer_[i] = 0;
            if (i == 0) {
                ++n_;
                if (n_ > bounds_.max_n) {
                    exhausted_ = true;
                } else {
                    load_pool();
                }
            }
        }

        try {
            return KhovanskiiSystem(std::move(eqs), limits_);
        } catch (const DomainError&) {
            // equation tuple not square (mentions a variable beyond n); skip
            continue;
        }
    }
    return std::nullopt;
}

namespace {

Real dedup_target_width() {
    // 1e-30
    return Real::from_string("1e-30", 128, Round::Down);
}

} // namespace

Catalog build_catalog(const EnumBounds& bounds, const IntervalBox& box,
                      const SolveConfig& cfg) {
    Catalog cat;
    SystemEnumerator en(bounds, cfg.limits);
    struct Found {
        EclNumber number;
        std::string source;
    };
    std::vector<Found> found;
    while (auto sys = en.next()) {
        cat.systems_enumerated += 1;
        IntervalBox query;
        if (box.size() == static_cast<size_t>(sys->dimension())) {
            query = box;
        } else if (box.size() == 1) {
            query.assign(static_cast<size_t>(sys->dimension()), box[0]);
        } else {
            throw DomainError("catalog box dimension must be 1 or max_n");
        }
        auto shared = std::make_shared<KhovanskiiSystem>(std::move(*sys));
        SolveReport report = solve_in_box(shared, query, cfg);
        if (report.budget_exhausted || !report.undecided.empty()) {
            cat.systems_budget_exhausted += 1;
        }
        for (auto& cert : report.certificates) {
            found.push_back(Found{
                EclNumber::from_certificate(std::move(cert)),
                print_system_inline(*shared),
            });
        }
    }

    std::stable_sort(found.begin(), found.end(), [](const Found& a, const Found& b) {
        int c = cmp(a.number.enclosure().lo(), b.number.enclosure().lo());
        if (c != 0) return c < 0;
        c = cmp(a.number.enclosure().hi(), b.number.enclosure().hi());
        if (c != 0) return c < 0;
        return a.source < b.source;
    });

    // Deduplicate adjacent overlapping numbers by refining both to width
    // 1e-30; numbers that separate stay distinct, numbers that still overlap
    // are merged, and refinement failures at max precision are reported as
    // unresolved pairs.
    Real target = dedup_target_width();
    std::vector<Found> kept;
    for (auto& f : found) {
        if (kept.empty() ||
            kept.back().number.enclosure().disjoint(f.number.enclosure())) {
            kept.push_back(std::move(f));
            continue;
        }
        auto ra = refine_certificate(kept.back().number.certificate(), target,
                                     std::max<Precision>(cfg.max_precision, 192));
        auto rb = refine_certificate(f.number.certificate(), target,
                                     std::max<Precision>(cfg.max_precision, 192));
        if (ra && rb) {
            EclNumber na = EclNumber::from_certificate(std::move(*ra));
            EclNumber nb = EclNumber::from_certificate(std::move(*rb));
            if (na.enclosure().disjoint(nb.enclosure())) {
                // genuinely distinct; keep both (refined)
                kept.back().number = std::move(na);
                f.number = std::move(nb);
                if (cmp(kept.back().number.enclosure().lo(),
                        f.number.enclosure().lo()) > 0) {
                    std::swap(kept.back(), f);
                }
                kept.push_back(std::move(f));
            }
            // still overlapping at width 1e-30: treat as the same number
            continue;
        }
        // could not refine: equality is undecidable at this budget
        kept.push_back(std::move(f));
        cat.unresolved.emplace_back(kept.size() - 2, kept.size() - 1);
    }

    for (auto& f : kept) {
        cat.entries.push_back(CatalogEntry{std::move(f.number), std::move(f.source)});
    }
    return cat;
}

std::string catalog_to_string(const Catalog& cat, int digits) {
    std::string out;
    for (size_t i = 0; i < cat.entries.size(); ++i) {
        const auto& e = cat.entries[i];
        out += "(" + e.number.enclosure().to_string(digits) + ", " +
               e.system_source + ", cert-" + std::to_string(i + 1) + ")\n";
    }
    for (const auto& [a, b] : cat.unresolved) {
        out += "unresolved-pair: " + std::to_string(a + 1) + " " +
               std::to_string(b + 1) + "\n";
    }
    return out;
}

} // namespace eclkit
