#ifndef ALDAG_BN_SEARCH_HPP
#define ALDAG_BN_SEARCH_HPP

#include <span>

#include "aldag/dataset.hpp"
#include "aldag/graph.hpp"

namespace aldag {

/// Outcome of one conditional-independence G-squared test.
struct CiTestResult {
    double statistic = 0.0;
    std::int64_t dof = 0;
    double p_value = 1.0;
    bool independent = true;
};

/// BIC contribution of one family: -2 * max log-likelihood of
/// child | parents plus (card_child - 1) * prod(parent cards) * ln N.
double family_bic(const CategoricalDataset& data, int child, std::span<const int> parents);

/// BIC of the multinomial Markov factorization of g; lower is better.
/// Decomposes as the sum of family_bic over all vertices.
double dag_bic(const Dag& g, const CategoricalDataset& data);

struct TabuOptions {
    int max_in_degree = 1;
    int tenure = 10;
    /// Stop after this many consecutive iterations without improving the
    /// incumbent; 0 means the default of 100 * p.
    int max_stall = 0;
};

/// Score-based DAG search over add/delete/reverse moves, never creating
/// cycles or exceeding the in-degree bound. The move applied each
/// iteration is the BIC argmin over legal non-tabu moves with a
/// lexicographic tie-break, so results are deterministic.
Dag tabu_learn_dag(const CategoricalDataset& data, const TabuOptions& options);
Dag tabu_learn_dag(const CategoricalDataset& data, int max_in_degree);

/// G-squared conditional-independence test of a vs b stratified by the
/// configurations of cond. Strata with zero count contribute neither to
/// the statistic nor to the degrees of freedom; dof == 0 declares
/// independence with p-value 1.
CiTestResult g2_test(const CategoricalDataset& data, int a, int b, std::span<const int> cond,
                     double alpha);

struct PcOptions {
    double alpha = 0.05;
    int max_sepset = 3;
};

/// Order-independent (stable) PC skeleton search with v-structure
/// orientation and Meek propagation; returns the estimated equivalence
/// class as a mixed graph.
MixedGraph pc_stable(const CategoricalDataset& data, const PcOptions& options = {});

}  // namespace aldag

#endif  // ALDAG_BN_SEARCH_HPP
