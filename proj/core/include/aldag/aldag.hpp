#ifndef ALDAG_ALDAG_HPP
#define ALDAG_ALDAG_HPP

#include <map>
#include <string>
#include <string_view>

#include "aldag/staged_tree.hpp"

namespace aldag {

/// Dependence class of one labeled edge, from the most structured
/// (context) to the least (total).
enum class EdgeLabel {
    Context,
    Partial,
    ContextPartial,
    Local,
    Total,
};

/// Display name: "context", "partial", "context/partial", "local",
/// "total".
std::string_view to_string(EdgeLabel label);

/// A DAG whose every edge carries a dependence class, plus the tree
/// order that produced it.
struct Aldag {
    Dag dag;
    std::map<std::pair<int, int>, EdgeLabel> labels;
    VariableOrder order;

    /// (total, non-total) edge counts.
    std::pair<int, int> label_census() const;
};

/// Staged subtree over one variable's parents: every full parent
/// configuration carries its reduced stage id as a color class.
struct DependenceSubtree {
    int variable = 0;
    std::vector<int> parents;  ///< variable ids in tree order
    std::vector<int> parent_cards;
    std::vector<int> cell_stage;  ///< row-major over parent_cards
    int n_stages = 1;
};

/// Tree with every level's context cut down to the variables its staging
/// actually depends on: a coordinate is dropped iff every pair of context
/// cells differing only in it shares a stage.
StagedTree reduce_contexts(const StagedTree& tree);

/// Minimal parent set per level (the context of reduce_contexts).
std::vector<std::vector<int>> extract_parents(const StagedTree& tree);

/// Dependence class of the edge parent -> child read off the reduced
/// staging of the child's level. The parent must survive context
/// reduction.
EdgeLabel label_edge(const StagedTree& tree, int parent, int child);

/// Minimal DAG of the staged tree with one dependence label per edge.
Aldag tree_to_aldag(const StagedTree& tree);

DependenceSubtree dependence_subtree(const StagedTree& tree, int variable);

/// Deterministic DOT text. Edge colors follow the fixed legend:
/// red - context; blue - partial; violet - context/partial;
/// green - local; black - total.
std::string to_dot(const Aldag& a, const std::vector<std::string>& names);

/// Deterministic DOT text of a dependence subtree; nodes at the last
/// parent level are filled by stage color class.
std::string to_dot(const DependenceSubtree& subtree, const std::vector<VariableMeta>& variables);

}  // namespace aldag

#endif  // ALDAG_ALDAG_HPP
