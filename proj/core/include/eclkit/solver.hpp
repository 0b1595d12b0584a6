#pragma once

#include "eclkit/interval.hpp"
#include "eclkit/system.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace eclkit {

struct SolveConfig {
    Precision precision = 64;      // starting working precision
    Precision max_precision = 256; // escalation ceiling
    double eps = 1e-12;            // target certificate box width
    long max_splits = 1000000;
    Limits limits;
};

/// Box proven, via a strict Krawczyk contraction, to contain exactly one
/// solution of the system, with the Jacobian determinant enclosure over the
/// box excluding zero.
struct KhovanskiiCertificate {
    std::shared_ptr<const KhovanskiiSystem> system;
    IntervalBox box;
    Precision precision = 64;
    double eps = 1e-12;
    bool newton_contraction = false;
    Interval jacobian_enclosure;
};

/// Everything solve_in_box found: certified roots, honest residue, and an
/// accounting of what was pruned. Certificates are pairwise disjoint and in
/// ascending box order.
struct SolveReport {
    std::shared_ptr<const KhovanskiiSystem> system;
    IntervalBox query;
    std::vector<KhovanskiiCertificate> certificates;
    std::vector<IntervalBox> undecided;
    long pruned_count = 0;
    double pruned_volume = 0.0;
    long splits_used = 0;
    bool budget_exhausted = false;
};

/// Interval Krawczyk operator K(X) with a midpoint-inverse preconditioner.
/// Returns nothing when the approximate midpoint Jacobian is numerically
/// singular. K(X) strictly interior to X proves existence and uniqueness;
/// K(X) disjoint from X refutes existence.
std::optional<IntervalBox> krawczyk_step(const KhovanskiiSystem& s,
                                         const IntervalBox& box, Precision prec);

/// Deterministic branch-and-prune search for all isolated solutions in the
/// query box. A sub-box is discarded only if some equation's enclosure
/// excludes zero or the Krawczyk operator refutes existence under a nonzero
/// Jacobian enclosure; everything else ends up certified or in `undecided`.
SolveReport solve_in_box(std::shared_ptr<const KhovanskiiSystem> s,
                         const IntervalBox& box, const SolveConfig& cfg);
SolveReport solve_in_box(const KhovanskiiSystem& s, const IntervalBox& box,
                         const SolveConfig& cfg);

/// Recomputes the Krawczyk contraction and the Jacobian-determinant
/// exclusion from scratch at the certificate's precision.
bool verify_certificate(const KhovanskiiCertificate& c);

/// Shrink a certificate's box until its width is at most `target_width`,
/// escalating precision up to max_precision. Fails (nullopt) if the target
/// cannot be met.
std::optional<KhovanskiiCertificate> refine_certificate(
    const KhovanskiiCertificate& c, const Real& target_width,
    Precision max_precision);

/// First-coordinate interval of the k-th certificate (1-based), ordering
/// certificates by ascending first coordinate. Requires the first-coordinate
/// projections to be pairwise disjoint.
Interval select_coordinate(const SolveReport& report, int k);

/// Self-contained text record: system source, exact binary-rational box
/// endpoints, precision, status flags.
std::string serialize_certificate(const KhovanskiiCertificate& c);
KhovanskiiCertificate parse_certificate(const std::string& text,
                                        const Limits& limits = {});

} // namespace eclkit
