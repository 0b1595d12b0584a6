#include "eclkit/koenig.hpp"

#include "eclkit/errors.hpp"
#include "eclkit/syntax.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace eclkit {

namespace {

int cmp_payload(const std::vector<Interval>& a, const std::vector<Interval>& b) {
    size_t n = std::min(a.size(), b.size());
    for (size_t i = 0; i < n; ++i) {
        int c = cmp(a[i].lo(), b[i].lo());
        if (c != 0) return c;
        c = cmp(a[i].hi(), b[i].hi());
        if (c != 0) return c;
    }
    if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
    return 0;
}

int cmp_vertex(const LayerVertex& a, const LayerVertex& b) {
    int c = cmp_payload(a.payload, b.payload);
    if (c != 0) return c;
    if (a.key != b.key) return a.key < b.key ? -1 : 1;
    return 0;
}

} // namespace

RaySearch find_ray(const LayeredGraph& g) {
    RaySearch out;
    const int depth = g.depth();
    if (depth == 0) {
        out.found = true;
        return out;
    }
    // children[l][v] = vertices of layer l+1 adjacent to layers[l][v],
    // sorted ascending by payload for the deterministic tie-break
    std::vector<std::vector<std::vector<int>>> children(
        static_cast<size_t>(depth));
    for (int l = 1; l < depth; ++l) {
        const auto& verts = g.layers[static_cast<size_t>(l)];
        const auto& pars = g.parents[static_cast<size_t>(l)];
        if (pars.size() != verts.size()) {
            throw DomainError("layered graph: parents/vertices size mismatch");
        }
        children[static_cast<size_t>(l - 1)].resize(
            g.layers[static_cast<size_t>(l - 1)].size());
        for (size_t v = 0; v < verts.size(); ++v) {
            for (int p : pars[v]) {
                children[static_cast<size_t>(l - 1)][static_cast<size_t>(p)]
                    .push_back(static_cast<int>(v));
            }
        }
    }
    auto order_of_layer = [&](int layer) {
        std::vector<int> order(g.layers[static_cast<size_t>(layer)].size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
        std::sort(order.begin(), order.end(), [&](int x, int y) {
            return cmp_vertex(g.layers[static_cast<size_t>(layer)][static_cast<size_t>(x)],
                              g.layers[static_cast<size_t>(layer)][static_cast<size_t>(y)]) < 0;
        });
        return order;
    };
    for (auto& per_vertex : children) {
        for (auto& ch : per_vertex) {
            std::sort(ch.begin(), ch.end());
        }
    }

    std::vector<std::vector<char>> dead(static_cast<size_t>(depth));
    for (int l = 0; l < depth; ++l) {
        dead[static_cast<size_t>(l)].assign(g.layers[static_cast<size_t>(l)].size(), 0);
    }

    int max_reached = 0; // deepest layer (1-based) any path entered
    std::vector<int> path;

    // reaches_bottom(l, v): can a path from vertex v at layer l reach the
    // last layer? explores children in payload order.
    std::function<bool(int, int)> reaches_bottom = [&](int l, int v) -> bool {
        if (dead[static_cast<size_t>(l)][static_cast<size_t>(v)]) return false;
        path.push_back(v);
        max_reached = std::max(max_reached, l + 1);
        if (l == depth - 1) return true;
        // sort this vertex's children by payload order on demand
        std::vector<int> ch = children[static_cast<size_t>(l)][static_cast<size_t>(v)];
        std::sort(ch.begin(), ch.end(), [&](int x, int y) {
            return cmp_vertex(
                       g.layers[static_cast<size_t>(l + 1)][static_cast<size_t>(x)],
                       g.layers[static_cast<size_t>(l + 1)][static_cast<size_t>(y)]) < 0;
        });
        for (int c : ch) {
            if (reaches_bottom(l + 1, c)) return true;
        }
        dead[static_cast<size_t>(l)][static_cast<size_t>(v)] = 1;
        path.pop_back();
        return false;
    };

    std::vector<int> roots = order_of_layer(0);
    for (int r : roots) {
        if (reaches_bottom(0, r)) {
            out.found = true;
            out.ray.vertex_indices = path;
            for (int l = 0; l < depth; ++l) {
                out.ray.vertices.push_back(
                    g.layers[static_cast<size_t>(l)]
                            [static_cast<size_t>(path[static_cast<size_t>(l)])]);
            }
            return out;
        }
    }
    out.found = false;
    out.dead_layer = max_reached + 1;
    return out;
}

bool check_chain(const LayeredGraph& g) {
    for (int l = 1; l < g.depth(); ++l) {
        const auto& prev = g.layers[static_cast<size_t>(l - 1)];
        for (const auto& w : g.layers[static_cast<size_t>(l)]) {
            if (w.key.empty()) return false;
            std::vector<int> prefix(w.key.begin(), w.key.end() - 1);
            bool present = std::any_of(prev.begin(), prev.end(),
                                       [&](const LayerVertex& v) {
                                           return v.key == prefix;
                                       });
            if (!present) return false;
        }
    }
    return true;
}

BuildLayersResult build_layers(const EmbeddingInstance& inst, int depth,
                               const SolveConfig& cfg) {
    if (depth < 1 || static_cast<size_t>(depth) > inst.systems.size()) {
        throw DomainError("depth must be between 1 and the generator count");
    }
    BuildLayersResult out;

    for (int k = 0; k < depth; ++k) {
        SolveReport report = solve_in_box(inst.systems[static_cast<size_t>(k)],
                                          inst.boxes[static_cast<size_t>(k)], cfg);
        if (!report.undecided.empty()) {
            out.warnings.push_back(
                "system " + std::to_string(k + 1) + ": " +
                std::to_string(report.undecided.size()) +
                " undecided box(es) remain" +
                (report.budget_exhausted ? " (budget exhausted)" : ""));
        }
        std::vector<Interval> bk;
        bk.reserve(report.certificates.size());
        for (const auto& cert : report.certificates) bk.push_back(cert.box[0]);
        std::sort(bk.begin(), bk.end(), [](const Interval& a, const Interval& b) {
            return cmp(a.lo(), b.lo()) < 0;
        });
        if (bk.empty()) {
            out.infeasible = true;
            out.infeasible_system = k + 1;
            out.refuted = report.undecided.empty() && !report.budget_exhausted;
            return out;
        }
        out.candidates.push_back(std::move(bk));
    }

    // maps key -> index per layer for the prefix edges
    std::vector<std::map<std::vector<int>, int>> index_of(
        static_cast<size_t>(depth));
    out.graph.layers.resize(static_cast<size_t>(depth));
    out.graph.parents.resize(static_cast<size_t>(depth));

    for (int n = 1; n <= depth; ++n) {
        auto& layer = out.graph.layers[static_cast<size_t>(n - 1)];
        auto& pars = out.graph.parents[static_cast<size_t>(n - 1)];
        std::vector<int> key(static_cast<size_t>(n), 0);
        // odometer over B_1 x ... x B_n, last coordinate fastest
        for (;;) {
            IntervalBox tuple;
            tuple.reserve(static_cast<size_t>(n));
            for (int i = 0; i < n; ++i) {
                tuple.push_back(
                    out.candidates[static_cast<size_t>(i)]
                                  [static_cast<size_t>(key[static_cast<size_t>(i)])]);
            }
            // cumulative conjunction of the first n scheduled constraints;
            // only a refuted tuple is excluded
            Truth3 admitted = Truth3::True;
            for (int l = 0; l < n && l < static_cast<int>(inst.schedule.size());
                 ++l) {
                admitted = kleene_and(
                    admitted, eval_formula_partial(inst.schedule[static_cast<size_t>(l)],
                                                   tuple, cfg.precision, cfg.limits));
                if (admitted == Truth3::False) break;
            }
            if (admitted != Truth3::False) {
                LayerVertex v;
                v.key = key;
                v.payload = tuple;
                if (n >= 2) {
                    std::vector<int> prefix(key.begin(), key.end() - 1);
                    auto it = index_of[static_cast<size_t>(n - 2)].find(prefix);
                    std::vector<int> parent_list;
                    if (it != index_of[static_cast<size_t>(n - 2)].end()) {
                        parent_list.push_back(it->second);
                    }
                    pars.push_back(std::move(parent_list));
                } else {
                    pars.push_back({});
                }
                index_of[static_cast<size_t>(n - 1)][key] =
                    static_cast<int>(layer.size());
                layer.push_back(std::move(v));
            }
            // advance odometer
            int i = n - 1;
            for (; i >= 0; --i) {
                key[static_cast<size_t>(i)] += 1;
                if (static_cast<size_t>(key[static_cast<size_t>(i)]) <
                    out.candidates[static_cast<size_t>(i)].size()) {
                    break;
                }
                key[static_cast<size_t>(i)] = 0;
            }
            if (i < 0) break;
        }
    }
    return out;
}

std::vector<ConstraintFormula> atomic_schedule(
    const std::vector<Interval>& constants, Precision prec) {
    struct TermInfo {
        ExpTerm term;
        Interval value;
        int max_index;
        int order; // deterministic enumeration position
    };
    std::vector<TermInfo> terms;
    int pos = 0;
    for (size_t k = 0; k < constants.size(); ++k) {
        ExpTerm c = ExpTerm::variable(static_cast<int>(k) + 1);
        terms.push_back({c, constants[k], static_cast<int>(k) + 1, pos++});
        terms.push_back({ExpTerm::exp(c), exp_enclosure(constants[k], prec),
                         static_cast<int>(k) + 1, pos++});
    }
    struct Sentence {
        ConstraintFormula formula;
        int max_index;
        int order;
    };
    std::vector<Sentence> sentences;
    int order = 0;
    for (size_t i = 0; i < terms.size(); ++i) {
        for (size_t j = i + 1; j < terms.size(); ++j) {
            const TermInfo& s = terms[i];
            const TermInfo& t = terms[j];
            int mi = std::max(s.max_index, t.max_index);
            if (cmp(s.value.hi(), t.value.lo()) < 0) {
                sentences.push_back(
                    {ConstraintFormula::atom(s.term, Relation::Lt, t.term), mi,
                     order++});
            } else if (cmp(t.value.hi(), s.value.lo()) < 0) {
                sentences.push_back(
                    {ConstraintFormula::atom(t.term, Relation::Lt, s.term), mi,
                     order++});
            } else {
                // not separated at this precision: candidate equality,
                // admitted as unknown unless later refuted
                sentences.push_back(
                    {ConstraintFormula::atom(s.term, Relation::Eq, t.term), mi,
                     order++});
            }
        }
    }
    std::stable_sort(sentences.begin(), sentences.end(),
                     [](const Sentence& a, const Sentence& b) {
                         if (a.max_index != b.max_index) {
                             return a.max_index < b.max_index;
                         }
                         return a.order < b.order;
                     });
    std::vector<ConstraintFormula> out;
    out.reserve(sentences.size());
    for (auto& s : sentences) out.push_back(std::move(s.formula));
    return out;
}

EmbeddingInstance parse_instance(const std::string& text, Precision prec,
                                 const Limits& limits) {
    EmbeddingInstance inst;
    std::istringstream in(text);
    std::string line;
    std::string system_text;
    bool in_constraints = false;
    int line_no = 0;

    auto strip = [](const std::string& s) {
        std::string t = s;
        size_t h = t.find('#');
        if (h != std::string::npos) t = t.substr(0, h);
        size_t b = t.find_first_not_of(" \t\r");
        if (b == std::string::npos) return std::string();
        size_t e = t.find_last_not_of(" \t\r");
        return t.substr(b, e - b + 1);
    };

    while (std::getline(in, line)) {
        ++line_no;
        std::string t = strip(line);
        if (t.empty()) continue;
        if (!in_constraints && t == "constraints:") {
            if (!system_text.empty()) {
                throw ParseError(line_no, 1,
                                 "system block is missing its 'box:' line");
            }
            in_constraints = true;
            continue;
        }
        if (in_constraints) {
            inst.schedule.push_back(parse_formula(t));
            continue;
        }
        if (t.rfind("box:", 0) == 0) {
            if (system_text.empty()) {
                throw ParseError(line_no, 1, "'box:' line without a system");
            }
            inst.systems.push_back(std::make_shared<KhovanskiiSystem>(
                parse_system(system_text, nullptr, limits)));
            inst.boxes.push_back(parse_box(t.substr(4), prec));
            if (inst.boxes.back().size() !=
                static_cast<size_t>(inst.systems.back()->dimension())) {
                throw ParseError(line_no, 1,
                                 "box dimension does not match the system");
            }
            system_text.clear();
            continue;
        }
        system_text += t + "\n";
    }
    if (!system_text.empty()) {
        throw ParseError(line_no, 1, "system block is missing its 'box:' line");
    }
    if (inst.systems.empty()) {
        throw ParseError(1, 1, "instance has no generator systems");
    }
    return inst;
}

} // namespace eclkit
