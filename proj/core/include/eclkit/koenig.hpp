#pragma once

#include "eclkit/formula.hpp"
#include "eclkit/solver.hpp"

#include <memory>
#include <string>
#include <vector>

namespace eclkit {

/// Vertex of a layered graph: a deterministic integer key (for embedding
/// instances, the index tuple into the per-constant candidate sets) and the
/// tuple of candidate enclosures it denotes.
struct LayerVertex {
    std::vector<int> key;
    std::vector<Interval> payload;
};

/// Finite layered graph with an implicit root below layer 1. parents[l][v]
/// lists the neighbours of layers[l][v] in layer l-1 (ignored for l = 0:
/// every layer-1 vertex neighbours the root). Edges only connect adjacent
/// layers by construction.
struct LayeredGraph {
    std::vector<std::vector<LayerVertex>> layers;
    std::vector<std::vector<std::vector<int>>> parents;

    int depth() const { return static_cast<int>(layers.size()); }
};

struct Ray {
    std::vector<int> vertex_indices; // one per layer
    std::vector<LayerVertex> vertices;
};

struct RaySearch {
    bool found = false;
    Ray ray;
    /// When no ray exists: the first layer (1-based) at which every
    /// candidate path dies.
    int dead_layer = 0;
};

/// Depth-first search from the root, visiting children in ascending payload
/// order (deterministic tie-break), memoizing dead vertices. If every layer
/// is non-empty and every vertex has a neighbour in the previous layer, a
/// ray is guaranteed.
RaySearch find_ray(const LayeredGraph& g);

/// True iff for every i, dropping the last key element of each layer-(i+1)
/// vertex lands on a vertex present in layer i.
bool check_chain(const LayeredGraph& g);

/// One generator system per constant plus the cumulative constraint
/// schedule; a finite-depth instantiation of the atomic-diagram layering.
struct EmbeddingInstance {
    std::vector<std::shared_ptr<const KhovanskiiSystem>> systems;
    std::vector<IntervalBox> boxes; // per-system search boxes
    std::vector<ConstraintFormula> schedule;
};

struct BuildLayersResult {
    LayeredGraph graph;
    /// B_k: ascending first-coordinate enclosures of the k-th system's
    /// certified solutions.
    std::vector<std::vector<Interval>> candidates;
    std::vector<std::string> warnings; // undecided-residue notes per system
    bool infeasible = false;
    int infeasible_system = 0; // 1-based, when infeasible
    /// With infeasible: true when the bounded search proved there is no
    /// solution in the box; false when the budget ran out first.
    bool refuted = false;
};

/// Layer n holds every tuple (b_1..b_n) from B_1 x ... x B_n that the
/// cumulative conjunction of the first n scheduled constraints fails to
/// refute (three-valued admission: only FALSE excludes). Edges follow exact
/// key prefixes.
BuildLayersResult build_layers(const EmbeddingInstance& inst, int depth,
                               const SolveConfig& cfg);

/// All atomic order/equality sentences among c_1..c_m and their E-images
/// (terms up to E-depth 2), decided against the given enclosures: separated
/// pairs yield the true order atom, overlapping pairs yield a candidate
/// equality atom. Deterministically ordered by the highest constant index
/// mentioned.
std::vector<ConstraintFormula> atomic_schedule(
    const std::vector<Interval>& constants, Precision prec);

/// Instance file: one or more system blocks ("vars: n" header, equations,
/// then a "box:" line), then "constraints:" and one formula per line over
/// c1..cm. '#' comments allowed.
EmbeddingInstance parse_instance(const std::string& text, Precision prec,
                                 const Limits& limits = {});

} // namespace eclkit
