#ifndef ALDAG_STAGED_TREE_HPP
#define ALDAG_STAGED_TREE_HPP

#include <string>
#include <vector>

#include "aldag/dataset.hpp"
#include "aldag/graph.hpp"

namespace aldag {

/// Stage assignment of one tree level, stored over the reduced context
/// space (the product of context_vars) rather than the full prefix space.
/// Variables outside the context never affect the stage, so the full-tree
/// semantics are unchanged while the table stays exponentially smaller.
struct LevelStaging {
    /// Context variable ids, ordered by their position in the tree order.
    std::vector<int> context_vars;
    /// Stage id per context configuration, row-major with the last
    /// context variable fastest; ids form the contiguous range
    /// [0, n_stages) and each id appears at least once.
    std::vector<int> stage_of;
    int n_stages = 1;

    friend bool operator==(const LevelStaging&, const LevelStaging&) = default;
};

/// Staged event tree over a fixed variable order. Level i (0-based)
/// models the variable at position i given a staging of its context.
struct StagedTree {
    VariableOrder order;          ///< order[i] = variable id placed i-th
    std::vector<int> cards;       ///< cardinality per variable id
    std::vector<LevelStaging> levels;

    int n_vars() const { return static_cast<int>(order.size()); }
    friend bool operator==(const StagedTree&, const StagedTree&) = default;
};

/// Per-stage outcome counts and maximum-likelihood conditionals.
/// probs[level][stage] is empty when the stage received no rows; such
/// stages contribute 0 to the log-likelihood and full parameter count to
/// the BIC penalty.
struct FittedStages {
    std::vector<std::vector<std::vector<std::int64_t>>> counts;
    std::vector<std::vector<std::vector<double>>> probs;
    std::int64_t n_rows = 0;
};

/// Throws std::invalid_argument when the staging structure violates its
/// invariants (context outside the prefix, non-contiguous stage ids, ...).
void validate(const StagedTree& tree);

/// Number of free parameters: sum over levels of n_stages * (card - 1).
std::int64_t parameter_count(const StagedTree& tree);

/// Product of the context cardinalities of one level.
std::size_t context_cell_count(const StagedTree& tree, int level);

/// Flat row-major index of a row's context configuration at one level.
std::size_t context_cell_of_row(const StagedTree& tree, int level, const CategoricalDataset& data,
                                std::int64_t row);

/// Saturated staged tree equivalent to the DAG: level i's context is the
/// parent set of the i-th ordered variable with one stage per parent
/// configuration. Throws OrderMismatchError if the order is not
/// topological for g.
StagedTree tree_from_dag(const Dag& g, const VariableOrder& order, const std::vector<int>& cards);

/// Routes every row through its level contexts and tallies per-stage
/// outcome counts; probabilities are the in-stage relative frequencies.
FittedStages fit(const StagedTree& tree, const CategoricalDataset& data);

/// Maximized log-likelihood sum n(s,x) ln p(x|s) with 0 ln 0 := 0.
double log_likelihood(const FittedStages& fitted);

/// BIC = -2 log-likelihood + parameter_count * ln n; lower is better.
double bic(const StagedTree& tree, const FittedStages& fitted, std::int64_t n);

/// New tree in which stage s2 of `level` is absorbed into s1 and the
/// level's stage ids are renumbered contiguously by first appearance.
/// Throws InvalidMergeError when s1 == s2 or either id is out of range.
StagedTree merge_stages(const StagedTree& tree, int level, int s1, int s2);

/// A staged tree together with its stage distributions (fitted or
/// generative). Empty prob vectors mark undefined stages.
struct StagedTreeModel {
    std::vector<std::string> var_names;
    StagedTree tree;
    std::vector<std::vector<std::vector<double>>> probs;
};

/// JSON round-trip of the model: structure bit-exact, probabilities at
/// full precision (shortest round-trip decimal form).
std::string model_to_json(const StagedTreeModel& model);
StagedTreeModel model_from_json(const std::string& text);

}  // namespace aldag

#endif  // ALDAG_STAGED_TREE_HPP
