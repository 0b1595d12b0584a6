#include "eclkit/solver.hpp"

#include "eclkit/errors.hpp"
#include "eclkit/eval.hpp"
#include "eclkit/syntax.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace eclkit {

namespace {

using RealMatrix = std::vector<std::vector<Real>>;

// Approximate inverse by Gaussian elimination with partial pivoting, in
// round-to-nearest point arithmetic. Only used as a preconditioner; its
// output is consumed by rigorous interval arithmetic.
std::optional<RealMatrix> approx_inverse(std::vector<std::vector<Real>> a,
                                         Precision prec) {
    size_t n = a.size();
    RealMatrix inv(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            inv[i].push_back(Real::from_long(i == j ? 1 : 0, prec));
        }
    }
    for (size_t col = 0; col < n; ++col) {
        size_t pivot = col;
        Real best = abs(a[col][col], prec, Round::Nearest);
        for (size_t r = col + 1; r < n; ++r) {
            Real cand = abs(a[r][col], prec, Round::Nearest);
            if (cmp(cand, best) > 0) {
                best = cand;
                pivot = r;
            }
        }
        if (!best.is_finite() || best.is_zero()) return std::nullopt;
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        Real p = a[col][col];
        for (size_t j = 0; j < n; ++j) {
            a[col][j] = div(a[col][j], p, prec, Round::Nearest);
            inv[col][j] = div(inv[col][j], p, prec, Round::Nearest);
        }
        for (size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            Real f = a[r][col];
            if (f.is_zero()) continue;
            for (size_t j = 0; j < n; ++j) {
                a[r][j] = sub(a[r][j], mul(f, a[col][j], prec, Round::Nearest),
                              prec, Round::Nearest);
                inv[r][j] = sub(inv[r][j], mul(f, inv[col][j], prec, Round::Nearest),
                                prec, Round::Nearest);
            }
        }
    }
    for (const auto& row : inv) {
        for (const auto& x : row) {
            if (!x.is_finite()) return std::nullopt;
        }
    }
    return inv;
}

IntervalBox eval_equations(const KhovanskiiSystem& s, const IntervalBox& box,
                           Precision prec, EvalCache* cache) {
    IntervalBox out;
    out.reserve(s.equations().size());
    for (const auto& f : s.equations()) {
        out.push_back(eval_poly(f, box, prec, cache));
    }
    return out;
}

std::vector<std::vector<Interval>> eval_jacobian(const KhovanskiiSystem& s,
                                                 const IntervalBox& box,
                                                 Precision prec, EvalCache* cache) {
    std::vector<std::vector<Interval>> out;
    out.reserve(s.jacobian().size());
    for (const auto& row : s.jacobian()) {
        std::vector<Interval> r;
        r.reserve(row.size());
        for (const auto& e : row) r.push_back(eval_poly(e, box, prec, cache));
        out.push_back(std::move(r));
    }
    return out;
}

double box_volume(const IntervalBox& box) {
    double v = 1.0;
    for (const auto& iv : box) v *= iv.width(53).to_double();
    return v;
}

} // namespace

std::optional<IntervalBox> krawczyk_step(const KhovanskiiSystem& s,
                                         const IntervalBox& box, Precision prec) {
    const size_t n = box.size();
    // midpoint as a point box
    IntervalBox mid(n);
    std::vector<Real> m(n, Real(prec));
    for (size_t i = 0; i < n; ++i) {
        m[i] = box[i].midpoint(prec);
        mid[i] = Interval::point(m[i]);
    }
    EvalCache mid_cache, box_cache;
    IntervalBox f_mid = eval_equations(s, mid, prec, &mid_cache);
    auto jac_box = eval_jacobian(s, box, prec, &box_cache);
    auto jac_mid = eval_jacobian(s, mid, prec, &mid_cache);

    std::vector<std::vector<Real>> jm(n);
    for (size_t i = 0; i < n; ++i) {
        for (size_t j = 0; j < n; ++j) {
            jm[i].push_back(jac_mid[i][j].midpoint(prec));
        }
    }
    auto y = approx_inverse(std::move(jm), prec);
    if (!y) return std::nullopt;

    // K = m - Y f(m) + (I - Y J(X)) (X - m)
    IntervalBox out(n);
    for (size_t i = 0; i < n; ++i) {
        Interval acc = mid[i];
        for (size_t j = 0; j < n; ++j) {
            Interval yij = Interval::point((*y)[i][j]);
            acc = sub(acc, mul(yij, f_mid[j], prec), prec);
        }
        for (size_t j = 0; j < n; ++j) {
            Interval delta = Interval::from_long(i == j ? 1 : 0, prec);
            Interval yj = Interval::from_long(0, prec);
            for (size_t k = 0; k < n; ++k) {
                yj = add(yj, mul(Interval::point((*y)[i][k]), jac_box[k][j], prec),
                         prec);
            }
            Interval coeff = sub(delta, yj, prec);
            Interval dev = sub(box[j], mid[j], prec);
            acc = add(acc, mul(coeff, dev, prec), prec);
        }
        out[i] = acc;
    }
    return out;
}

namespace {

enum class CertifyOutcome { Certified, Refuted, Unknown };

struct CertifyResult {
    CertifyOutcome outcome = CertifyOutcome::Unknown;
    KhovanskiiCertificate cert;
};

// Pad every coordinate outward so a fresh Krawczyk image can land strictly
// inside (a tight fixpoint box never strictly contains its own image).
IntervalBox inflate_box(const IntervalBox& box, const Real& pad, Precision prec) {
    IntervalBox out(box.size());
    for (size_t i = 0; i < box.size(); ++i) {
        Real ulps = mul_2si(max(Real::from_long(1, prec), box[i].magnitude(prec)),
                            -static_cast<long>(prec) + 4, prec, Round::Up);
        Real p = max(pad, ulps);
        out[i] = Interval(sub(box[i].lo(), p, prec, Round::Down),
                          add(box[i].hi(), p, prec, Round::Up));
    }
    return out;
}

// Final certification attempt on a tightly contracted box: inflate, require
// a strict Krawczyk contraction and a zero-free Jacobian enclosure.
std::optional<KhovanskiiCertificate> seal_certificate(
    std::shared_ptr<const KhovanskiiSystem> s, const IntervalBox& tight,
    const Real& pad, Precision prec, double eps) {
    IntervalBox candidate = inflate_box(tight, pad, prec);
    auto k = krawczyk_step(*s, candidate, prec);
    if (!k || !box_strictly_contains(candidate, *k)) return std::nullopt;
    Interval det_enc = eval_poly(s->jacobian_det(), candidate, prec);
    if (det_enc.contains_zero()) return std::nullopt;
    KhovanskiiCertificate cert;
    cert.system = std::move(s);
    cert.box = std::move(candidate);
    cert.precision = prec;
    cert.eps = eps;
    cert.newton_contraction = true;
    cert.jacobian_enclosure = det_enc;
    return cert;
}

// Iterate the Krawczyk contraction on a candidate box (already known to
// have a Jacobian enclosure excluding zero) until the box is below eps, the
// operator refutes existence, or progress stalls at max precision.
CertifyResult certify_in(std::shared_ptr<const KhovanskiiSystem> s,
                         const IntervalBox& start, const SolveConfig& cfg) {
    CertifyResult result;
    Precision prec = cfg.precision;
    // Inflate the cell so a solution sitting exactly on a bisection boundary
    // is strictly interior to some candidate. Refuting the inflated cell
    // refutes the cell; double-certified boundary roots are merged later.
    IntervalBox x(start.size());
    for (size_t i = 0; i < start.size(); ++i) {
        Real pad = mul_2si(start[i].width(prec), -4, prec, Round::Up);
        x[i] = Interval(sub(start[i].lo(), pad, prec, Round::Down),
                        add(start[i].hi(), pad, prec, Round::Up));
    }
    Real eps = Real::from_double(cfg.eps, 64, Round::Down);
    Real half_eps = mul_2si(eps, -1, 64, Round::Down);
    Real last_width = Real::pos_infinity(64);
    bool contracted_once = false;

    for (int iter = 0; iter < 64; ++iter) {
        auto k = krawczyk_step(*s, x, prec);
        if (!k) {
            // singular preconditioner: only worth escalating once a
            // contraction has shown there is a root to pin down
            if (contracted_once && prec < cfg.max_precision) {
                prec = std::min(prec * 2, cfg.max_precision);
                continue;
            }
            return result; // Unknown -> caller splits
        }
        if (box_disjoint(*k, x)) {
            result.outcome = CertifyOutcome::Refuted;
            return result;
        }
        contracted_once = contracted_once || box_strictly_contains(x, *k);

        IntervalBox next(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            Interval cut;
            if (!intersect((*k)[i], x[i], prec, cut)) return result;
            next[i] = cut;
        }
        Real w = box_max_width(next, 64);
        if (contracted_once && cmp(w, half_eps) <= 0) {
            Real pad = mul_2si(eps, -3, prec, Round::Down); // eps/8
            auto cert = seal_certificate(s, next, pad, prec, cfg.eps);
            if (cert) {
                result.outcome = CertifyOutcome::Certified;
                result.cert = std::move(*cert);
                return result;
            }
        }
        Real threshold = mul(last_width, Real::from_double(0.75, 64, Round::Down),
                             64, Round::Down);
        bool stalled = cmp(w, threshold) > 0;
        if (!contracted_once) {
            // no uniqueness proof yet: take at most a couple of cheap shrink
            // steps, then hand the box back to the splitter
            if (stalled || iter >= 2) return result;
        } else if (stalled) {
            if (prec >= cfg.max_precision) {
                if (iter > 6) return result; // stuck at the precision ceiling
            } else {
                prec = std::min(prec * 2, cfg.max_precision);
            }
        }
        last_width = w;
        x = std::move(next);
    }
    return result;
}

int widest_relative_coordinate(const IntervalBox& box, Precision prec) {
    int best = 0;
    Real best_w = Real::from_long(-1, prec);
    for (size_t i = 0; i < box.size(); ++i) {
        Real scale = max(Real::from_long(1, prec), box[i].magnitude(prec));
        Real rel = div(box[i].width(prec), scale, prec, Round::Nearest);
        if (cmp(rel, best_w) > 0) {
            best_w = rel;
            best = static_cast<int>(i);
        }
    }
    return best;
}

bool certificate_box_less(const KhovanskiiCertificate& a,
                          const KhovanskiiCertificate& b) {
    for (size_t i = 0; i < a.box.size() && i < b.box.size(); ++i) {
        int c = cmp(a.box[i].lo(), b.box[i].lo());
        if (c != 0) return c < 0;
        c = cmp(a.box[i].hi(), b.box[i].hi());
        if (c != 0) return c < 0;
    }
    return a.box.size() < b.box.size();
}

} // namespace

SolveReport solve_in_box(std::shared_ptr<const KhovanskiiSystem> s,
                         const IntervalBox& box, const SolveConfig& cfg) {
    if (static_cast<int>(box.size()) != s->dimension()) {
        throw DomainError("query box dimension does not match the system");
    }
    SolveReport report;
    report.system = s;
    report.query = box;

    const Precision prec = cfg.precision;
    Real min_width = mul(Real::from_double(cfg.eps, 64, Round::Down),
                         Real::from_double(0.25, 64, Round::Down), 64, Round::Down);

    std::vector<IntervalBox> stack{box};
    while (!stack.empty()) {
        IntervalBox x = std::move(stack.back());
        stack.pop_back();

        EvalCache cache;
        bool pruned = false;
        for (const auto& f : s->equations()) {
            if (!eval_poly(f, x, prec, &cache).contains_zero()) {
                pruned = true;
                break;
            }
        }
        if (pruned) {
            report.pruned_count += 1;
            report.pruned_volume += box_volume(x);
            continue;
        }

        Interval det_enc = eval_poly(s->jacobian_det(), x, prec, &cache);
        if (!det_enc.contains_zero()) {
            CertifyResult res = certify_in(s, x, cfg);
            if (res.outcome == CertifyOutcome::Certified) {
                report.certificates.push_back(std::move(res.cert));
                continue;
            }
            if (res.outcome == CertifyOutcome::Refuted) {
                report.pruned_count += 1;
                report.pruned_volume += box_volume(x);
                continue;
            }
        }

        if (cmp(box_max_width(x, 64), min_width) <= 0) {
            report.undecided.push_back(std::move(x));
            continue;
        }
        if (report.splits_used >= cfg.max_splits) {
            report.budget_exhausted = true;
            report.undecided.push_back(std::move(x));
            continue;
        }
        report.splits_used += 1;
        int j = widest_relative_coordinate(x, prec);
        Real m = x[static_cast<size_t>(j)].midpoint(prec);
        IntervalBox left = x, right = x;
        left[static_cast<size_t>(j)] = Interval(x[static_cast<size_t>(j)].lo(), m);
        right[static_cast<size_t>(j)] = Interval(m, x[static_cast<size_t>(j)].hi());
        stack.push_back(std::move(right));
        stack.push_back(std::move(left)); // lower half explored first
    }

    std::sort(report.certificates.begin(), report.certificates.end(),
              certificate_box_less);

    // A root on a bisection boundary can be certified from both adjacent
    // cells. Overlapping certificates whose hull still contracts describe
    // the same root; keep the first.
    std::vector<KhovanskiiCertificate> unique;
    for (auto& cert : report.certificates) {
        if (!unique.empty() && !box_disjoint(unique.back().box, cert.box)) {
            IntervalBox hull_box(cert.box.size());
            for (size_t i = 0; i < cert.box.size(); ++i) {
                hull_box[i] = hull(unique.back().box[i], cert.box[i],
                                   cert.precision);
            }
            auto k = krawczyk_step(*s, hull_box, cert.precision);
            if (k && box_strictly_contains(hull_box, *k)) continue; // same root
        }
        unique.push_back(std::move(cert));
    }
    report.certificates = std::move(unique);
    return report;
}

SolveReport solve_in_box(const KhovanskiiSystem& s, const IntervalBox& box,
                         const SolveConfig& cfg) {
    return solve_in_box(std::make_shared<KhovanskiiSystem>(s), box, cfg);
}

bool verify_certificate(const KhovanskiiCertificate& c) {
    if (!c.system || c.box.size() != static_cast<size_t>(c.system->dimension())) {
        return false;
    }
    Interval det_enc = eval_poly(c.system->jacobian_det(), c.box, c.precision);
    if (det_enc.contains_zero()) return false;
    auto k = krawczyk_step(*c.system, c.box, c.precision);
    if (!k) return false;
    return box_strictly_contains(c.box, *k);
}

std::optional<KhovanskiiCertificate> refine_certificate(
    const KhovanskiiCertificate& c, const Real& target_width,
    Precision max_precision) {
    SolveConfig cfg;
    cfg.precision = std::max<Precision>(c.precision, 64);
    cfg.max_precision = max_precision;
    cfg.eps = 0; // drive purely by target_width below
    Precision prec = cfg.precision;
    IntervalBox x = c.box;
    Real last_width = Real::pos_infinity(64);
    for (int iter = 0; iter < 400; ++iter) {
        Real w = box_max_width(x, 64);
        Real half_target = mul_2si(target_width, -1, 64, Round::Down);
        if (cmp(w, half_target) <= 0) {
            Real pad = mul_2si(target_width, -3, prec, Round::Down);
            auto sealed = seal_certificate(c.system, x, pad, prec, c.eps);
            if (!sealed) return std::nullopt;
            KhovanskiiCertificate out = c;
            out.box = std::move(sealed->box);
            out.precision = prec;
            out.newton_contraction = true;
            out.jacobian_enclosure = std::move(sealed->jacobian_enclosure);
            return out;
        }
        auto k = krawczyk_step(*c.system, x, prec);
        if (!k) return std::nullopt;
        IntervalBox next(x.size());
        for (size_t i = 0; i < x.size(); ++i) {
            Interval cut;
            if (!intersect((*k)[i], x[i], prec, cut)) return std::nullopt;
            next[i] = cut;
        }
        Real nw = box_max_width(next, 64);
        Real threshold = mul(last_width, Real::from_double(0.75, 64, Round::Down),
                             64, Round::Down);
        if (cmp(nw, threshold) > 0) {
            if (prec >= max_precision) return std::nullopt;
            prec = std::min(prec * 2, max_precision);
        }
        last_width = nw;
        x = std::move(next);
    }
    return std::nullopt;
}

Interval select_coordinate(const SolveReport& report, int k) {
    if (k < 1 || static_cast<size_t>(k) > report.certificates.size()) {
        throw DomainError("certificate index " + std::to_string(k) +
                          " out of range: report has " +
                          std::to_string(report.certificates.size()) +
                          " certificate(s)");
    }
    std::vector<Interval> firsts;
    firsts.reserve(report.certificates.size());
    for (const auto& c : report.certificates) firsts.push_back(c.box[0]);
    std::sort(firsts.begin(), firsts.end(), [](const Interval& a, const Interval& b) {
        return cmp(a.lo(), b.lo()) < 0;
    });
    for (size_t i = 0; i + 1 < firsts.size(); ++i) {
        if (!firsts[i].disjoint(firsts[i + 1])) {
            throw DomainError(
                "first-coordinate projections overlap; refine with a smaller eps");
        }
    }
    return firsts[static_cast<size_t>(k - 1)];
}

std::string serialize_certificate(const KhovanskiiCertificate& c) {
    std::ostringstream out;
    out << "khovanskii-certificate v1\n";
    out << "precision: " << c.precision << "\n";
    char epsbuf[64];
    std::snprintf(epsbuf, sizeof epsbuf, "%.17g", c.eps);
    out << "eps: " << epsbuf << "\n";
    out << "vars: " << c.system->dimension() << "\n";
    for (const auto& f : c.system->equations()) {
        out << "equation: " << print_poly(f) << "\n";
    }
    for (const auto& iv : c.box) {
        out << "box: " << iv.to_hex() << "\n";
    }
    out << "newton-contraction: " << (c.newton_contraction ? "true" : "false")
        << "\n";
    out << "jacobian-nonzero: " << c.jacobian_enclosure.to_hex() << "\n";
    return out.str();
}

KhovanskiiCertificate parse_certificate(const std::string& text,
                                        const Limits& limits) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line.rfind("khovanskii-certificate", 0) != 0) {
        throw DomainError("not a certificate record (bad header)");
    }
    KhovanskiiCertificate c;
    std::vector<std::string> equations;
    std::vector<std::string> boxes;
    std::string jac;
    while (std::getline(in, line)) {
        auto take = [&](const char* key) -> std::optional<std::string> {
            std::string prefix = std::string(key) + ":";
            if (line.rfind(prefix, 0) != 0) return std::nullopt;
            std::string v = line.substr(prefix.size());
            size_t b = v.find_first_not_of(" \t");
            return b == std::string::npos ? std::string() : v.substr(b);
        };
        if (auto v = take("precision")) {
            c.precision = std::stol(*v);
        } else if (auto v = take("eps")) {
            c.eps = std::stod(*v);
        } else if (auto v = take("vars")) {
            (void)*v; // implied by the equation count
        } else if (auto v = take("equation")) {
            equations.push_back(*v);
        } else if (auto v = take("box")) {
            boxes.push_back(*v);
        } else if (auto v = take("newton-contraction")) {
            c.newton_contraction = (*v == "true");
        } else if (auto v = take("jacobian-nonzero")) {
            jac = *v;
        } else if (!line.empty()) {
            throw DomainError("unrecognized certificate line: '" + line + "'");
        }
    }
    if (equations.empty() || boxes.size() != equations.size()) {
        throw DomainError("certificate record is incomplete");
    }
    if (c.precision < MPFR_PREC_MIN || c.precision > 1u << 20) {
        throw DomainError("certificate precision out of range");
    }
    std::string system_text = "vars: " + std::to_string(equations.size()) + "\n";
    for (const auto& e : equations) system_text += e + "\n";
    c.system = std::make_shared<KhovanskiiSystem>(
        parse_system(system_text, nullptr, limits));
    for (const auto& b : boxes) {
        c.box.push_back(Interval::parse_hex(b, c.precision));
    }
    if (!jac.empty()) {
        c.jacobian_enclosure = Interval::parse_hex(jac, c.precision);
    }
    return c;
}

} // namespace eclkit
