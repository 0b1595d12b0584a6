#pragma once

#include "eclkit/solver.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace eclkit {

/// A number exponentially algebraic over the empty set: the first
/// coordinate of a certified Khovanskii-system solution.
class EclNumber {
public:
    /// Wraps a certificate, re-verifying it from scratch.
    static EclNumber from_certificate(KhovanskiiCertificate cert);

    const KhovanskiiCertificate& certificate() const { return cert_; }
    const KhovanskiiSystem& system() const { return *cert_.system; }
    int coordinate() const { return 1; }
    const Interval& enclosure() const { return enclosure_; }

private:
    EclNumber(KhovanskiiCertificate cert, Interval enclosure)
        : cert_(std::move(cert)), enclosure_(std::move(enclosure)) {}
    KhovanskiiCertificate cert_;
    Interval enclosure_;
};

/// Solve the system in the box and wrap the unique certified root. Throws
/// CertifyError unless the search certifies exactly one solution with no
/// undecided residue.
EclNumber ecl_from_system(std::shared_ptr<const KhovanskiiSystem> s,
                          const IntervalBox& box, const SolveConfig& cfg);

EclNumber ecl_add(const EclNumber& a, const EclNumber& b, const SolveConfig& cfg);
EclNumber ecl_mul(const EclNumber& a, const EclNumber& b, const SolveConfig& cfg);
/// Requires 0 outside a's enclosure.
EclNumber ecl_inv(const EclNumber& a, const SolveConfig& cfg);
EclNumber ecl_exp(const EclNumber& a, const SolveConfig& cfg);
/// Requires a strictly positive enclosure; the witnessing system is
/// augment_log of a's system.
EclNumber ecl_log(const EclNumber& a, const SolveConfig& cfg);

/// Finite enumeration grid for Khovanskii systems over Z^E. All fields are
/// inclusive bounds; max_degree caps both power-product total degree and
/// exponential-atom multiplicity (the spec-level complexity bounds leave the
/// degree dimension open; it must be bounded for the grid to be finite).
struct EnumBounds {
    int max_n = 1;
    int max_tower = 1;
    int max_coeff_bits = 2;
    int max_monomials = 2;
    int max_degree = 2;
};

/// Deterministic, duplicate-free, restartable stream over all systems in
/// the grid: n from 1 to max_n, equations drawn as ordered tuples from the
/// canonical polynomial pool for that n, tuples in odometer order.
class SystemEnumerator {
public:
    explicit SystemEnumerator(EnumBounds bounds, const Limits& limits = {});
    std::optional<KhovanskiiSystem> next();

    /// The sorted pool of candidate equations over nvars variables.
    static std::vector<CanonicalPoly> polynomial_pool(const EnumBounds& bounds,
                                                      int nvars,
                                                      const Limits& limits = {});

private:
    EnumBounds bounds_;
    Limits limits_;
    int n_ = 1;
    std::vector<CanonicalPoly> pool_;
    std::vector<size_t> odometer_;
    bool exhausted_ = false;
    void load_pool();
};

struct CatalogEntry {
    EclNumber number;
    std::string system_source; // witnessing system, inline form
};

struct Catalog {
    std::vector<CatalogEntry> entries; // ascending by enclosure, deduplicated
    /// Pairs of entry indices whose enclosures still overlap at the maximum
    /// refinable precision: equality undecidable here, reported, not merged.
    std::vector<std::pair<size_t, size_t>> unresolved;
    long systems_enumerated = 0;
    long systems_budget_exhausted = 0;
};

/// Enumerate the grid, solve each system in the box (replicated across
/// coordinates when one interval is given), collect first-coordinate
/// numbers, deduplicate by refinement to width 1e-30, sort ascending.
Catalog build_catalog(const EnumBounds& bounds, const IntervalBox& box,
                      const SolveConfig& cfg);

/// One line per entry: "(enclosure, system-source, certificate-ref)".
std::string catalog_to_string(const Catalog& cat, int digits = 15);

} // namespace eclkit
