#ifndef ALDAG_LEARNER_HPP
#define ALDAG_LEARNER_HPP

#include <chrono>
#include <optional>

#include "aldag/bn_search.hpp"
#include "aldag/dataset.hpp"
#include "aldag/staged_tree.hpp"

namespace aldag {

enum class StrategyKind {
    FixedCmi,   ///< one fixed order (user-supplied or identity)
    Ord1,       ///< orders compatible with a tabu-learned DAG
    Ord2,       ///< orders compatible with the directed core of its CPDAG
    Ord3,       ///< orders compatible with the directed core of PC-stable
    AllOrders,  ///< every permutation (small p only)
};

struct Strategy {
    StrategyKind kind = StrategyKind::FixedCmi;
    int k = 1;  ///< maximum number of parents per variable
    std::optional<VariableOrder> fixed_order;  ///< FixedCmi only
};

struct LearnOptions {
    double alpha = 0.05;     ///< PC-stable test level (Ord3)
    int max_sepset = 3;      ///< PC-stable conditioning-set bound
    std::uint64_t order_cap = 100000;  ///< linear-extension enumeration cap
    int all_orders_limit = 7;          ///< AllOrders refuses above this p
    int jobs = 1;            ///< parallel order evaluation; results are
                             ///< identical for any value
};

struct LearnResult {
    StagedTree tree;
    FittedStages fitted;
    double bic = 0.0;
    VariableOrder order_used;
    std::int64_t orders_evaluated = 0;
    std::chrono::duration<double> wall_time{0.0};
};

/// One accepted merge of the backward search, in the canonical stage
/// numbering in effect just before it was applied, so a trace can be
/// replayed through merge_stages.
struct MergeStep {
    int level;
    int s1;
    int s2;
    double delta_bic;
};

/// Greedy parent choice for the variable at `position` of `order`: all
/// predecessors when there are at most k of them, otherwise the k
/// predecessors chosen by iteratively maximizing conditional mutual
/// information with the target given the already selected ones
/// (lowest-index tie-break). Returned in tree order.
std::vector<int> cmi_select_parents(const CategoricalDataset& data, const VariableOrder& order,
                                    int position, int k);

/// Saturated k-parents staged tree over `order` with CMI-selected
/// contexts.
StagedTree init_tree(const CategoricalDataset& data, const VariableOrder& order, int k);

/// Backward search over stage merges: per level, repeatedly applies the
/// pair merge with the largest BIC decrease until none improves. Every
/// accepted step strictly decreases BIC. Levels are score-independent,
/// so they are optimized one at a time.
LearnResult backward_hill_climb(const StagedTree& tree, const CategoricalDataset& data,
                                std::vector<MergeStep>* log = nullptr);

/// Strategy dispatch: builds the candidate order set, runs the
/// fixed-order pipeline per order, and returns the minimum-BIC result
/// (ties to the lexicographically smallest order). Parents always come
/// from CMI selection, never from the auxiliary graph.
LearnResult learn(const CategoricalDataset& data, const Strategy& strategy,
                  const LearnOptions& options = {});

/// Baseline pipeline: tabu DAG with in-degree <= k, one topological
/// order, the DAG's own parent sets, then the backward search.
LearnResult lv_pipeline(const CategoricalDataset& data, int k, const LearnOptions& options = {});

}  // namespace aldag

#endif  // ALDAG_LEARNER_HPP
