#include "aldag/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "aldag/infotheo.hpp"
#include "parallel.hpp"

namespace aldag {

std::vector<int> cmi_select_parents(const CategoricalDataset& data, const VariableOrder& order,
                                    int position, int k) {
    if (position < 0 || position >= static_cast<int>(order.size()))
        throw std::invalid_argument("position out of range");
    if (k < 1) throw std::invalid_argument("k must be >= 1");

    std::vector<int> predecessors(order.begin(), order.begin() + position);
    if (position <= k) return predecessors;

    const int target = order[static_cast<std::size_t>(position)];
    std::vector<int> candidates = predecessors;
    std::sort(candidates.begin(), candidates.end());

    std::vector<int> selected;
    for (int step = 0; step < k; ++step) {
        int best = -1;
        double best_cmi = 0.0;
        for (int j : candidates) {
            if (std::find(selected.begin(), selected.end(), j) != selected.end()) continue;
            const double v = conditional_mutual_information(data, target, j, selected).value;
            if (best < 0 || v > best_cmi) {
                best = j;
                best_cmi = v;
            }
        }
        selected.push_back(best);
    }

    // Report parents in tree order.
    std::vector<int> result;
    for (int v : predecessors)
        if (std::find(selected.begin(), selected.end(), v) != selected.end()) result.push_back(v);
    return result;
}

StagedTree init_tree(const CategoricalDataset& data, const VariableOrder& order, int k) {
    const int p = data.n_vars();
    Dag g(p);
    for (int pos = 0; pos < p; ++pos)
        for (int parent : cmi_select_parents(data, order, pos, k))
            g.add_edge(parent, order[static_cast<std::size_t>(pos)]);
    return tree_from_dag(g, order, data.cards());
}

namespace {

double stage_log_likelihood(const std::vector<std::int64_t>& counts) {
    const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
    if (total == 0) return 0.0;
    double ll = 0.0;
    for (const std::int64_t n : counts)
        if (n > 0)
            ll += static_cast<double>(n) * std::log(static_cast<double>(n) / static_cast<double>(total));
    return ll;
}

// BIC change of pooling two stages at a level with the given outcome
// cardinality: twice the likelihood loss minus one stage's penalty.
double merge_delta(const std::vector<std::int64_t>& a, const std::vector<std::int64_t>& b, int card,
                   double log_n) {
    std::vector<std::int64_t> pooled(a.size());
    for (std::size_t x = 0; x < a.size(); ++x) pooled[x] = a[x] + b[x];
    const double delta_ll = stage_log_likelihood(pooled) - stage_log_likelihood(a) - stage_log_likelihood(b);
    return -2.0 * delta_ll - static_cast<double>(card - 1) * log_n;
}

}  // namespace

LearnResult backward_hill_climb(const StagedTree& tree, const CategoricalDataset& data,
                                std::vector<MergeStep>* log) {
    const auto start = std::chrono::steady_clock::now();
    const int p = tree.n_vars();
    const double log_n = std::log(static_cast<double>(data.n_rows()));

    StagedTree current = tree;
    FittedStages fitted = fit(current, data);

    for (int i = 0; i < p; ++i) {
        const int card = current.cards[static_cast<std::size_t>(current.order[static_cast<std::size_t>(i)])];
        auto counts = fitted.counts[static_cast<std::size_t>(i)];

        while (true) {
            const int n_stages = current.levels[static_cast<std::size_t>(i)].n_stages;
            int best_s1 = -1;
            int best_s2 = -1;
            double best_delta = 0.0;
            for (int s1 = 0; s1 < n_stages; ++s1) {
                for (int s2 = s1 + 1; s2 < n_stages; ++s2) {
                    const double delta = merge_delta(counts[static_cast<std::size_t>(s1)],
                                                     counts[static_cast<std::size_t>(s2)], card, log_n);
                    if (delta < 0.0 && (best_s1 < 0 || delta < best_delta)) {
                        best_s1 = s1;
                        best_s2 = s2;
                        best_delta = delta;
                    }
                }
            }
            if (best_s1 < 0) break;
            if (log) log->push_back({i, best_s1, best_s2, best_delta});

            // Pool the counts, then renumber them the same way
            // merge_stages renumbers the staging.
            StagedTree merged = merge_stages(current, i, best_s1, best_s2);
            for (std::size_t x = 0; x < counts[static_cast<std::size_t>(best_s1)].size(); ++x)
                counts[static_cast<std::size_t>(best_s1)][x] += counts[static_cast<std::size_t>(best_s2)][x];

            const auto& old_map = current.levels[static_cast<std::size_t>(i)].stage_of;
            const auto& new_map = merged.levels[static_cast<std::size_t>(i)].stage_of;
            std::vector<std::vector<std::int64_t>> renumbered(
                static_cast<std::size_t>(merged.levels[static_cast<std::size_t>(i)].n_stages));
            for (std::size_t cell = 0; cell < old_map.size(); ++cell) {
                const int before = old_map[cell] == best_s2 ? best_s1 : old_map[cell];
                renumbered[static_cast<std::size_t>(new_map[cell])] =
                    counts[static_cast<std::size_t>(before)];
            }
            counts = std::move(renumbered);
            current = std::move(merged);
        }
    }

    LearnResult result;
    result.tree = std::move(current);
    result.fitted = fit(result.tree, data);
    result.bic = bic(result.tree, result.fitted, data.n_rows());
    result.order_used = result.tree.order;
    result.orders_evaluated = 1;
    result.wall_time = std::chrono::steady_clock::now() - start;
    return result;
}

namespace {

VariableOrder identity_order(int p) {
    VariableOrder order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    return order;
}

std::vector<VariableOrder> all_orders(int p) {
    VariableOrder order = identity_order(p);
    std::vector<VariableOrder> out;
    do {
        out.push_back(order);
    } while (std::next_permutation(order.begin(), order.end()));
    return out;
}

LearnResult best_over_orders(const CategoricalDataset& data, const std::vector<VariableOrder>& orders,
                             int k, int jobs) {
    std::vector<LearnResult> results(orders.size());
    detail::parallel_for(orders.size(), jobs, [&](std::size_t i) {
        results[i] = backward_hill_climb(init_tree(data, orders[i], k), data);
    });
    // Deterministic reduction: smallest BIC, ties to the smallest order.
    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i) {
        if (results[i].bic < results[best].bic ||
            (results[i].bic == results[best].bic && results[i].order_used < results[best].order_used))
            best = i;
    }
    LearnResult out = std::move(results[best]);
    out.orders_evaluated = static_cast<std::int64_t>(orders.size());
    return out;
}

}  // namespace

LearnResult learn(const CategoricalDataset& data, const Strategy& strategy,
                  const LearnOptions& options) {
    if (strategy.k < 1) throw std::invalid_argument("strategy.k must be >= 1");
    const auto start = std::chrono::steady_clock::now();
    const int p = data.n_vars();

    std::vector<VariableOrder> orders;
    switch (strategy.kind) {
        case StrategyKind::FixedCmi: {
            VariableOrder order = strategy.fixed_order ? *strategy.fixed_order : identity_order(p);
            if (static_cast<int>(order.size()) != p)
                throw std::invalid_argument("fixed order must cover all variables");
            orders.push_back(std::move(order));
            break;
        }
        case StrategyKind::Ord1: {
            const Dag g = tabu_learn_dag(data, strategy.k);
            orders = linear_extensions(g.edges(), p, options.order_cap);
            break;
        }
        case StrategyKind::Ord2: {
            const Dag g = tabu_learn_dag(data, strategy.k);
            orders = linear_extensions(directed_core(cpdag_of(g)), p, options.order_cap);
            break;
        }
        case StrategyKind::Ord3: {
            const MixedGraph m = pc_stable(data, {options.alpha, options.max_sepset});
            orders = linear_extensions(directed_core(m), p, options.order_cap);
            break;
        }
        case StrategyKind::AllOrders: {
            if (p > options.all_orders_limit)
                throw TooManyOrdersError(
                    "all-orders search over " + std::to_string(p) +
                        " variables is infeasible (p! orders); raise the limit or use a "
                        "compatible-orders strategy",
                    static_cast<std::uint64_t>(options.all_orders_limit));
            orders = all_orders(p);
            break;
        }
    }

    LearnResult result = best_over_orders(data, orders, strategy.k, options.jobs);
    result.wall_time = std::chrono::steady_clock::now() - start;
    return result;
}

LearnResult lv_pipeline(const CategoricalDataset& data, int k, const LearnOptions& options) {
    (void)options;
    const auto start = std::chrono::steady_clock::now();
    const Dag g = tabu_learn_dag(data, k);
    const VariableOrder order = topological_order(g);
    LearnResult result = backward_hill_climb(tree_from_dag(g, order, data.cards()), data);
    result.wall_time = std::chrono::steady_clock::now() - start;
    return result;
}

}  // namespace aldag
