#include "aldag/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <queue>

namespace aldag {

Dag::Dag(int p) : p_(p), parents_(static_cast<std::size_t>(p)) {
    if (p < 0) throw std::invalid_argument("vertex count must be nonnegative");
}

int Dag::edge_count() const {
    int n = 0;
    for (const auto& ps : parents_) n += static_cast<int>(ps.size());
    return n;
}

bool Dag::has_edge(int from, int to) const {
    if (from < 0 || from >= p_ || to < 0 || to >= p_) return false;
    const auto& ps = parents_[static_cast<std::size_t>(to)];
    return std::binary_search(ps.begin(), ps.end(), from);
}

bool Dag::add_edge(int from, int to) {
    if (from < 0 || from >= p_ || to < 0 || to >= p_)
        throw std::invalid_argument("edge endpoint out of range");
    if (from == to) throw std::invalid_argument("self-loops are not allowed");
    auto& ps = parents_[static_cast<std::size_t>(to)];
    auto it = std::lower_bound(ps.begin(), ps.end(), from);
    if (it != ps.end() && *it == from) return false;
    ps.insert(it, from);
    return true;
}

void Dag::remove_edge(int from, int to) {
    auto& ps = parents_[static_cast<std::size_t>(to)];
    auto it = std::lower_bound(ps.begin(), ps.end(), from);
    if (it != ps.end() && *it == from) ps.erase(it);
}

std::vector<int> Dag::children(int v) const {
    std::vector<int> out;
    for (int u = 0; u < p_; ++u)
        if (has_edge(v, u)) out.push_back(u);
    return out;
}

std::vector<std::pair<int, int>> Dag::edges() const {
    std::vector<std::pair<int, int>> out;
    for (int v = 0; v < p_; ++v)
        for (int u : parents_[static_cast<std::size_t>(v)]) out.emplace_back(u, v);
    std::sort(out.begin(), out.end());
    return out;
}

bool Dag::creates_cycle(int from, int to) const {
    if (from == to) return true;
    // from->to closes a cycle iff from is reachable from to.
    std::vector<bool> seen(static_cast<std::size_t>(p_), false);
    std::vector<int> stack{to};
    seen[static_cast<std::size_t>(to)] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u = 0; u < p_; ++u) {
            if (!has_edge(v, u) || seen[static_cast<std::size_t>(u)]) continue;
            if (u == from) return true;
            seen[static_cast<std::size_t>(u)] = true;
            stack.push_back(u);
        }
    }
    return false;
}

bool Dag::is_acyclic() const {
    try {
        topological_order(*this);
        return true;
    } catch (const CycleError&) {
        return false;
    }
}

bool MixedGraph::adjacent(int a, int b) const {
    return directed.count({a, b}) > 0 || directed.count({b, a}) > 0 ||
           undirected.count({std::min(a, b), std::max(a, b)}) > 0;
}

VariableOrder topological_order(const Dag& g) {
    const int p = g.vertex_count();
    std::vector<int> remaining(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) remaining[static_cast<std::size_t>(v)] = g.in_degree(v);

    std::priority_queue<int, std::vector<int>, std::greater<>> ready;
    for (int v = 0; v < p; ++v)
        if (remaining[static_cast<std::size_t>(v)] == 0) ready.push(v);

    VariableOrder order;
    order.reserve(static_cast<std::size_t>(p));
    while (!ready.empty()) {
        const int v = ready.top();
        ready.pop();
        order.push_back(v);
        for (int u : g.children(v))
            if (--remaining[static_cast<std::size_t>(u)] == 0) ready.push(u);
    }
    if (static_cast<int>(order.size()) != p) throw CycleError("graph contains a directed cycle");
    return order;
}

std::vector<VariableOrder> linear_extensions(const std::vector<std::pair<int, int>>& partial, int p,
                                             std::uint64_t cap) {
    Dag constraint(p);
    for (const auto& [before, after] : partial) constraint.add_edge(before, after);
    topological_order(constraint);  // throws CycleError on cyclic input

    std::vector<int> blockers(static_cast<std::size_t>(p), 0);
    for (int v = 0; v < p; ++v) blockers[static_cast<std::size_t>(v)] = constraint.in_degree(v);

    std::vector<VariableOrder> out;
    VariableOrder current;
    current.reserve(static_cast<std::size_t>(p));
    std::vector<bool> used(static_cast<std::size_t>(p), false);

    // Choosing the smallest available vertex first yields lexicographic
    // enumeration order.
    std::function<void()> extend = [&]() {
        if (static_cast<int>(current.size()) == p) {
            if (static_cast<std::uint64_t>(out.size()) == cap)
                throw TooManyOrdersError("more than " + std::to_string(cap) + " compatible orders", cap);
            out.push_back(current);
            return;
        }
        for (int v = 0; v < p; ++v) {
            if (used[static_cast<std::size_t>(v)] || blockers[static_cast<std::size_t>(v)] != 0) continue;
            used[static_cast<std::size_t>(v)] = true;
            current.push_back(v);
            for (int u : constraint.children(v)) --blockers[static_cast<std::size_t>(u)];
            extend();
            for (int u : constraint.children(v)) ++blockers[static_cast<std::size_t>(u)];
            current.pop_back();
            used[static_cast<std::size_t>(v)] = false;
        }
    };
    extend();
    return out;
}

namespace {

// Total order on edges used by the compelled-edge labeling: heads ascend
// in topological position, tails descend.
std::vector<std::pair<int, int>> ordered_edges(const Dag& g, const std::vector<int>& pos) {
    auto edges = g.edges();
    std::sort(edges.begin(), edges.end(), [&](const auto& a, const auto& b) {
        if (pos[static_cast<std::size_t>(a.second)] != pos[static_cast<std::size_t>(b.second)])
            return pos[static_cast<std::size_t>(a.second)] < pos[static_cast<std::size_t>(b.second)];
        return pos[static_cast<std::size_t>(a.first)] > pos[static_cast<std::size_t>(b.first)];
    });
    return edges;
}

}  // namespace

MixedGraph cpdag_of(const Dag& g) {
    const int p = g.vertex_count();
    const VariableOrder topo = topological_order(g);
    std::vector<int> pos(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) pos[static_cast<std::size_t>(topo[static_cast<std::size_t>(i)])] = i;

    const auto edges = ordered_edges(g, pos);
    enum class Mark { Unknown, Compelled, Reversible };
    std::map<std::pair<int, int>, Mark> mark;
    for (const auto& e : edges) mark[e] = Mark::Unknown;

    for (const auto& edge : edges) {
        if (mark[edge] != Mark::Unknown) continue;
        const auto [x, y] = edge;
        bool forced = false;
        for (int w : g.parents(x)) {
            if (mark[{w, x}] != Mark::Compelled) continue;
            if (!g.has_edge(w, y)) {
                // w->x compelled but w is no parent of y: everything into y
                // is compelled.
                for (int z : g.parents(y)) mark[{z, y}] = Mark::Compelled;
                forced = true;
                break;
            }
            mark[{w, y}] = Mark::Compelled;
        }
        if (forced) continue;
        bool outside_parent = false;
        for (int z : g.parents(y)) {
            if (z != x && !g.has_edge(z, x)) {
                outside_parent = true;
                break;
            }
        }
        const Mark label = outside_parent ? Mark::Compelled : Mark::Reversible;
        for (int z : g.parents(y))
            if (mark[{z, y}] == Mark::Unknown) mark[{z, y}] = label;
    }

    MixedGraph out;
    out.p = p;
    for (const auto& [edge, m] : mark) {
        if (m == Mark::Compelled)
            out.add_directed(edge.first, edge.second);
        else
            out.add_undirected(edge.first, edge.second);
    }
    return out;
}

std::vector<std::pair<int, int>> directed_core(const MixedGraph& m) {
    return {m.directed.begin(), m.directed.end()};
}

}  // namespace aldag
