#include "aldag/bn_search.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

#include <boost/math/special_functions/gamma.hpp>

namespace aldag {

double family_bic(const CategoricalDataset& data, int child, std::span<const int> parents) {
    std::vector<int> vars(parents.begin(), parents.end());
    vars.push_back(child);
    const CountTable table = joint_counts(data, vars);

    const std::size_t card_child = static_cast<std::size_t>(data.card(child));
    const std::size_t n_configs = table.size() / card_child;

    double loglik = 0.0;
    for (std::size_t cfg = 0; cfg < n_configs; ++cfg) {
        const std::size_t base = cfg * card_child;
        std::int64_t n_cfg = 0;
        for (std::size_t x = 0; x < card_child; ++x) n_cfg += table[base + x];
        if (n_cfg == 0) continue;
        for (std::size_t x = 0; x < card_child; ++x) {
            const std::int64_t n = table[base + x];
            if (n == 0) continue;
            loglik += static_cast<double>(n) *
                      std::log(static_cast<double>(n) / static_cast<double>(n_cfg));
        }
    }

    const double d = static_cast<double>(card_child - 1) * static_cast<double>(n_configs);
    return -2.0 * loglik + d * std::log(static_cast<double>(data.n_rows()));
}

double dag_bic(const Dag& g, const CategoricalDataset& data) {
    double total = 0.0;
    for (int v = 0; v < g.vertex_count(); ++v) total += family_bic(data, v, g.parents(v));
    return total;
}

namespace {

enum class MoveKind { Add = 0, Delete = 1, Reverse = 2 };

struct Move {
    MoveKind kind;
    int from;
    int to;
    friend auto operator<=>(const Move&, const Move&) = default;
};

Move inverse_of(const Move& m) {
    switch (m.kind) {
        case MoveKind::Add: return {MoveKind::Delete, m.from, m.to};
        case MoveKind::Delete: return {MoveKind::Add, m.from, m.to};
        case MoveKind::Reverse: return {MoveKind::Reverse, m.to, m.from};
    }
    return m;
}

// Family scores are the bottleneck of the search; the state space of
// (child, parent set) pairs is small for bounded in-degree, so memoize.
class FamilyScoreCache {
public:
    explicit FamilyScoreCache(const CategoricalDataset& data) : data_(data) {}

    double score(int child, const std::vector<int>& parents) {
        const auto key = std::make_pair(child, parents);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        const double s = family_bic(data_, child, parents);
        cache_.emplace(key, s);
        return s;
    }

private:
    const CategoricalDataset& data_;
    std::map<std::pair<int, std::vector<int>>, double> cache_;
};

std::vector<int> with_parent(const std::vector<int>& parents, int extra) {
    std::vector<int> out = parents;
    out.insert(std::lower_bound(out.begin(), out.end(), extra), extra);
    return out;
}

std::vector<int> without_parent(const std::vector<int>& parents, int removed) {
    std::vector<int> out = parents;
    out.erase(std::find(out.begin(), out.end(), removed));
    return out;
}

}  // namespace

Dag tabu_learn_dag(const CategoricalDataset& data, const TabuOptions& options) {
    const int p = data.n_vars();
    const int k = options.max_in_degree;
    const int max_stall = options.max_stall > 0 ? options.max_stall : 100 * p;

    FamilyScoreCache cache(data);
    Dag current(p);
    std::vector<double> family_scores(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) family_scores[static_cast<std::size_t>(v)] = cache.score(v, {});

    // Summing the per-vertex scores afresh keeps revisited graphs at
    // bitwise-identical totals; an incrementally updated running score
    // drifts on plateau cycles and can stall the improvement counter.
    const auto total_score = [&]() {
        double sum = 0.0;
        for (double s : family_scores) sum += s;
        return sum;
    };
    double current_score = total_score();

    Dag best = current;
    double best_score = current_score;

    std::map<Move, std::int64_t> tabu_until;
    int stall = 0;

    for (std::int64_t iter = 0; stall < max_stall; ++iter) {
        bool have_candidate = false;
        Move chosen{};
        double chosen_score = std::numeric_limits<double>::infinity();

        auto consider = [&](const Move& m, double score) {
            auto it = tabu_until.find(m);
            const bool tabu = it != tabu_until.end() && it->second > iter;
            if (tabu && !(score < best_score)) return;  // aspiration: beat the incumbent
            if (!have_candidate || score < chosen_score ||
                (score == chosen_score && m < chosen)) {
                have_candidate = true;
                chosen = m;
                chosen_score = score;
            }
        };

        for (int from = 0; from < p; ++from) {
            for (int to = 0; to < p; ++to) {
                if (from == to) continue;
                if (!current.has_edge(from, to) && !current.has_edge(to, from)) {
                    if (current.in_degree(to) >= k || current.creates_cycle(from, to)) continue;
                    const double delta = cache.score(to, with_parent(current.parents(to), from)) -
                                         cache.score(to, current.parents(to));
                    consider({MoveKind::Add, from, to}, current_score + delta);
                } else if (current.has_edge(from, to)) {
                    const double del_delta =
                        cache.score(to, without_parent(current.parents(to), from)) -
                        cache.score(to, current.parents(to));
                    consider({MoveKind::Delete, from, to}, current_score + del_delta);

                    if (current.in_degree(from) < k) {
                        Dag probe = current;
                        probe.remove_edge(from, to);
                        if (!probe.creates_cycle(to, from)) {
                            const double delta =
                                del_delta +
                                cache.score(from, with_parent(current.parents(from), to)) -
                                cache.score(from, current.parents(from));
                            consider({MoveKind::Reverse, from, to}, current_score + delta);
                        }
                    }
                }
            }
        }

        if (!have_candidate) break;

        switch (chosen.kind) {
            case MoveKind::Add: current.add_edge(chosen.from, chosen.to); break;
            case MoveKind::Delete: current.remove_edge(chosen.from, chosen.to); break;
            case MoveKind::Reverse:
                current.remove_edge(chosen.from, chosen.to);
                current.add_edge(chosen.to, chosen.from);
                break;
        }
        family_scores[static_cast<std::size_t>(chosen.to)] =
            cache.score(chosen.to, current.parents(chosen.to));
        if (chosen.kind == MoveKind::Reverse)
            family_scores[static_cast<std::size_t>(chosen.from)] =
                cache.score(chosen.from, current.parents(chosen.from));
        current_score = total_score();
        tabu_until[inverse_of(chosen)] = iter + 1 + options.tenure;

        if (current_score < best_score) {
            best_score = current_score;
            best = current;
            stall = 0;
        } else {
            ++stall;
        }
    }
    return best;
}

Dag tabu_learn_dag(const CategoricalDataset& data, int max_in_degree) {
    TabuOptions options;
    options.max_in_degree = max_in_degree;
    return tabu_learn_dag(data, options);
}

CiTestResult g2_test(const CategoricalDataset& data, int a, int b, std::span<const int> cond,
                     double alpha) {
    if (a == b) throw std::invalid_argument("g2: a and b must differ");
    for (int v : cond)
        if (v == a || v == b) throw std::invalid_argument("g2: conditioning set overlaps a or b");

    std::vector<int> vars(cond.begin(), cond.end());
    vars.push_back(a);
    vars.push_back(b);
    const CountTable table = joint_counts(data, vars);

    const std::size_t card_a = static_cast<std::size_t>(data.card(a));
    const std::size_t card_b = static_cast<std::size_t>(data.card(b));
    const std::size_t cells = card_a * card_b;
    const std::size_t n_strata = table.size() / cells;

    double g2 = 0.0;
    std::int64_t dof = 0;
    std::vector<std::int64_t> row(card_a);
    std::vector<std::int64_t> col(card_b);
    for (std::size_t s = 0; s < n_strata; ++s) {
        const std::size_t base = s * cells;
        std::int64_t n = 0;
        std::fill(row.begin(), row.end(), 0);
        std::fill(col.begin(), col.end(), 0);
        for (std::size_t xa = 0; xa < card_a; ++xa)
            for (std::size_t xb = 0; xb < card_b; ++xb) {
                const std::int64_t o = table[base + xa * card_b + xb];
                n += o;
                row[xa] += o;
                col[xb] += o;
            }
        if (n == 0) continue;
        dof += static_cast<std::int64_t>(card_a - 1) * static_cast<std::int64_t>(card_b - 1);
        for (std::size_t xa = 0; xa < card_a; ++xa)
            for (std::size_t xb = 0; xb < card_b; ++xb) {
                const std::int64_t o = table[base + xa * card_b + xb];
                if (o == 0) continue;
                const double expected = static_cast<double>(row[xa]) * static_cast<double>(col[xb]) /
                                        static_cast<double>(n);
                g2 += 2.0 * static_cast<double>(o) * std::log(static_cast<double>(o) / expected);
            }
    }

    CiTestResult result;
    result.statistic = std::max(g2, 0.0);
    result.dof = dof;
    if (dof == 0) {
        result.p_value = 1.0;
        result.independent = true;
    } else {
        result.p_value =
            boost::math::gamma_q(static_cast<double>(dof) / 2.0, result.statistic / 2.0);
        result.independent = result.p_value > alpha;
    }
    return result;
}

namespace {

// Size-l subsets of a sorted pool, in lexicographic order.
void for_each_subset(const std::vector<int>& pool, int l,
                     const std::function<bool(const std::vector<int>&)>& visit) {
    std::vector<int> pick(static_cast<std::size_t>(l));
    std::function<bool(int, int)> rec = [&](int start, int depth) {
        if (depth == l) return visit(pick);
        for (int i = start; i <= static_cast<int>(pool.size()) - (l - depth); ++i) {
            pick[static_cast<std::size_t>(depth)] = pool[static_cast<std::size_t>(i)];
            if (rec(i + 1, depth + 1)) return true;
        }
        return false;
    };
    rec(0, 0);
}

bool directed_path(const std::set<std::pair<int, int>>& arcs, int from, int to, int p) {
    std::vector<bool> seen(static_cast<std::size_t>(p), false);
    std::vector<int> stack{from};
    seen[static_cast<std::size_t>(from)] = true;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        if (v == to) return true;
        for (int u = 0; u < p; ++u)
            if (!seen[static_cast<std::size_t>(u)] && arcs.count({v, u})) {
                seen[static_cast<std::size_t>(u)] = true;
                stack.push_back(u);
            }
    }
    return false;
}

}  // namespace

MixedGraph pc_stable(const CategoricalDataset& data, const PcOptions& options) {
    const int p = data.n_vars();
    std::vector<std::set<int>> adj(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i)
        for (int j = 0; j < p; ++j)
            if (i != j) adj[static_cast<std::size_t>(i)].insert(j);

    std::map<std::pair<int, int>, std::vector<int>> sepset;

    for (int l = 0; l <= options.max_sepset; ++l) {
        // Stable variant: conditioning candidates come from the adjacency
        // sets frozen at the start of the level, so the removal order
        // within the level cannot change the result.
        const auto frozen = adj;
        bool enough = false;
        for (int i = 0; i < p; ++i)
            if (static_cast<int>(frozen[static_cast<std::size_t>(i)].size()) - 1 >= l) enough = true;
        if (!enough) break;

        for (int i = 0; i < p; ++i) {
            for (int j = i + 1; j < p; ++j) {
                if (!adj[static_cast<std::size_t>(i)].count(j)) continue;
                bool removed = false;
                for (int side = 0; side < 2 && !removed; ++side) {
                    const int u = side == 0 ? i : j;
                    const int v = side == 0 ? j : i;
                    std::vector<int> pool(frozen[static_cast<std::size_t>(u)].begin(),
                                          frozen[static_cast<std::size_t>(u)].end());
                    pool.erase(std::remove(pool.begin(), pool.end(), v), pool.end());
                    if (static_cast<int>(pool.size()) < l) continue;
                    for_each_subset(pool, l, [&](const std::vector<int>& s) {
                        const CiTestResult r = g2_test(data, i, j, s, options.alpha);
                        if (r.independent) {
                            adj[static_cast<std::size_t>(i)].erase(j);
                            adj[static_cast<std::size_t>(j)].erase(i);
                            sepset[{i, j}] = s;
                            removed = true;
                        }
                        return removed;
                    });
                }
            }
        }
    }

    // V-structures: i - k - j with i, j nonadjacent and k outside their
    // separating set. Conflicting votes leave the edge undirected.
    std::set<std::pair<int, int>> votes;
    for (int k = 0; k < p; ++k) {
        for (int i = 0; i < p; ++i) {
            if (i == k || !adj[static_cast<std::size_t>(k)].count(i)) continue;
            for (int j = i + 1; j < p; ++j) {
                if (j == k || !adj[static_cast<std::size_t>(k)].count(j)) continue;
                if (adj[static_cast<std::size_t>(i)].count(j)) continue;
                const auto it = sepset.find({std::min(i, j), std::max(i, j)});
                const bool k_in_sepset =
                    it != sepset.end() &&
                    std::find(it->second.begin(), it->second.end(), k) != it->second.end();
                if (!k_in_sepset) {
                    votes.insert({i, k});
                    votes.insert({j, k});
                }
            }
        }
    }

    std::set<std::pair<int, int>> directed;
    std::set<std::pair<int, int>> undirected;
    for (int i = 0; i < p; ++i)
        for (int j = i + 1; j < p; ++j)
            if (adj[static_cast<std::size_t>(i)].count(j)) undirected.insert({i, j});

    for (const auto& [from, to] : votes) {
        if (votes.count({to, from})) continue;
        const auto key = std::make_pair(std::min(from, to), std::max(from, to));
        if (undirected.erase(key) > 0) directed.insert({from, to});
    }

    auto adjacent = [&](int a, int b) {
        return directed.count({a, b}) || directed.count({b, a}) ||
               undirected.count({std::min(a, b), std::max(a, b)});
    };
    auto try_orient = [&](int from, int to) {
        const auto key = std::make_pair(std::min(from, to), std::max(from, to));
        if (!undirected.count(key)) return false;
        if (directed_path(directed, to, from, p)) return false;  // keep the directed part acyclic
        undirected.erase(key);
        directed.insert({from, to});
        return true;
    };

    // Meek rules 1-3 to closure; rule 4 only fires with background
    // knowledge, which this search does not take.
    bool changed = true;
    while (changed) {
        changed = false;
        const auto frozen_undirected = undirected;
        for (const auto& [a, b] : frozen_undirected) {
            for (int side = 0; side < 2; ++side) {
                const int x = side == 0 ? a : b;
                const int y = side == 0 ? b : a;
                // R1: w -> x, w and y nonadjacent.
                bool orient = false;
                for (int w = 0; w < p && !orient; ++w)
                    if (directed.count({w, x}) && w != y && !adjacent(w, y)) orient = true;
                // R2: directed path x -> w -> y.
                for (int w = 0; w < p && !orient; ++w)
                    if (directed.count({x, w}) && directed.count({w, y})) orient = true;
                // R3: x - c, x - d, c -> y, d -> y, c and d nonadjacent.
                for (int c = 0; c < p && !orient; ++c) {
                    if (!undirected.count({std::min(x, c), std::max(x, c)}) || !directed.count({c, y}))
                        continue;
                    for (int d = c + 1; d < p && !orient; ++d)
                        if (undirected.count({std::min(x, d), std::max(x, d)}) &&
                            directed.count({d, y}) && !adjacent(c, d))
                            orient = true;
                }
                if (orient && try_orient(x, y)) {
                    changed = true;
                    break;
                }
            }
        }
    }

    MixedGraph out;
    out.p = p;
    out.directed = std::move(directed);
    out.undirected = std::move(undirected);
    return out;
}

}  // namespace aldag
