#ifndef ALDAG_SIM_HPP
#define ALDAG_SIM_HPP

#include <random>
#include <string>
#include <vector>

#include "aldag/learner.hpp"
#include "aldag/staged_tree.hpp"

namespace aldag {

/// One cell of the generation grid.
struct SimConfig {
    int p = 4;            ///< number of variables
    int k = 1;            ///< parents per variable in the true model
    int t = 2;            ///< stages per level (capped by the cell count)
    std::int64_t n = 1000;  ///< sample size
    std::vector<int> cards; ///< per-variable cardinality; empty means all 2
};

/// Estimators the grid can run: the five order strategies plus the two
/// DAG-based baselines.
enum class SimEstimator { Dag, Lv, Cmi, Ord1, Ord2, Ord3, All };

std::string_view to_string(SimEstimator est);

/// One output row of the grid: (config, repetition, estimator).
struct SimRow {
    int p = 0;
    int k = 0;
    int t = 0;
    std::int64_t n = 0;
    int rep = 0;
    SimEstimator estimator = SimEstimator::Cmi;
    bool failed = false;
    std::string error;
    double bic = 0.0;
    int kendall_tau = 0;
    double kendall_tau_norm = 0.0;
    int edges_total = 0;
    int edges_nontotal = 0;
    double wall_time_s = 0.0;
};

/// Random staged tree with identity order: each level's context is a
/// uniform subset of min(k, i) predecessors, the staging a uniform
/// surjection of the context cells onto min(t, cells) stages, and the
/// stage distributions flat-Dirichlet draws. Deterministic given the
/// generator state.
StagedTreeModel random_staged_tree(const SimConfig& config, std::mt19937_64& rng);

/// n i.i.d. rows by ancestral sampling along the tree order. n == 0
/// yields a valid empty dataset.
CategoricalDataset sample_dataset(const StagedTreeModel& model, std::int64_t n,
                                  std::mt19937_64& rng);

/// Number of discordant pairs between two permutations of the same
/// length. Throws std::invalid_argument on a length mismatch.
int kendall_tau(const VariableOrder& a, const VariableOrder& b);

struct GridOptions {
    int reps = 20;
    std::uint64_t seed = 0;
    int jobs = 1;
    LearnOptions learn;
};

/// Runs every estimator on every (config, repetition) cell. Each cell
/// draws a model, shuffles the variable columns to remove order bias,
/// samples a dataset, and scores every estimator on it. Per-cell RNG
/// streams derive from (seed, config index, rep), so results are
/// bit-identical for any job count. Estimator failures mark the row
/// failed and the run continues.
std::vector<SimRow> run_grid(const std::vector<SimConfig>& grid,
                             const std::vector<SimEstimator>& estimators,
                             const GridOptions& options);

/// CSV rendering with a versioned header comment; wall-time is opt-in
/// because it is the one non-reproducible column.
std::string results_csv(const std::vector<SimRow>& rows, bool include_timing = false);

}  // namespace aldag

#endif  // ALDAG_SIM_HPP
