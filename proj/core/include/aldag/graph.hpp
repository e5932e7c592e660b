#ifndef ALDAG_GRAPH_HPP
#define ALDAG_GRAPH_HPP

#include <cstdint>
#include <set>
#include <utility>
#include <vector>

#include "aldag/errors.hpp"

namespace aldag {

/// A permutation of {0..p-1}; position i holds the variable placed i-th.
using VariableOrder = std::vector<int>;

/// Directed graph on vertices 0..p-1, stored as sorted parent lists.
/// Acyclicity is an invariant of every value produced by the public
/// algorithms; callers mutating edges use creates_cycle() to preserve it.
class Dag {
public:
    Dag() = default;
    explicit Dag(int p);

    int vertex_count() const { return p_; }
    int edge_count() const;
    bool has_edge(int from, int to) const;

    /// Inserts from->to; returns false if already present. Throws
    /// std::invalid_argument on self-loops or out-of-range vertices.
    bool add_edge(int from, int to);
    void remove_edge(int from, int to);

    const std::vector<int>& parents(int v) const { return parents_[static_cast<std::size_t>(v)]; }
    int in_degree(int v) const { return static_cast<int>(parents_[static_cast<std::size_t>(v)].size()); }
    std::vector<int> children(int v) const;

    /// Edges as (from, to) pairs, sorted.
    std::vector<std::pair<int, int>> edges() const;

    /// True if adding from->to would close a directed cycle.
    bool creates_cycle(int from, int to) const;
    bool is_acyclic() const;

    friend bool operator==(const Dag&, const Dag&) = default;

private:
    int p_ = 0;
    std::vector<std::vector<int>> parents_;
};

/// Partially directed graph: the directed part is acyclic and disjoint
/// from the undirected part (undirected pairs stored with first < second).
struct MixedGraph {
    int p = 0;
    std::set<std::pair<int, int>> directed;
    std::set<std::pair<int, int>> undirected;

    void add_directed(int from, int to) { directed.emplace(from, to); }
    void add_undirected(int a, int b) { undirected.emplace(std::min(a, b), std::max(a, b)); }
    bool adjacent(int a, int b) const;
};

/// Topological order of g with the smallest-index-first tie-break.
/// Throws CycleError if g is cyclic.
VariableOrder topological_order(const Dag& g);

/// All permutations of {0..p-1} consistent with every (before, after)
/// pair, in lexicographic order. Throws TooManyOrdersError as soon as
/// more than `cap` extensions exist and CycleError on cyclic constraints.
std::vector<VariableOrder> linear_extensions(const std::vector<std::pair<int, int>>& partial, int p,
                                             std::uint64_t cap);

/// Completed partially directed graph of g's Markov equivalence class:
/// compelled edges stay directed, reversible ones become undirected.
MixedGraph cpdag_of(const Dag& g);

/// The directed edges of a mixed graph, for use as a partial order.
std::vector<std::pair<int, int>> directed_core(const MixedGraph& m);

}  // namespace aldag

#endif  // ALDAG_GRAPH_HPP
