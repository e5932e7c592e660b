#include "aldag/aldag.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace aldag {

std::string_view to_string(EdgeLabel label) {
    switch (label) {
        case EdgeLabel::Context: return "context";
        case EdgeLabel::Partial: return "partial";
        case EdgeLabel::ContextPartial: return "context/partial";
        case EdgeLabel::Local: return "local";
        case EdgeLabel::Total: return "total";
    }
    return "total";
}

std::pair<int, int> Aldag::label_census() const {
    int total = 0;
    int other = 0;
    for (const auto& [edge, label] : labels)
        (label == EdgeLabel::Total ? total : other) += 1;
    return {total, other};
}

namespace {

std::vector<std::size_t> strides_for(const std::vector<int>& cards) {
    std::vector<std::size_t> strides(cards.size());
    std::size_t s = 1;
    for (std::size_t j = cards.size(); j-- > 0;) {
        strides[j] = s;
        s *= static_cast<std::size_t>(cards[j]);
    }
    return strides;
}

std::vector<int> context_cards(const StagedTree& tree, const std::vector<int>& context_vars) {
    std::vector<int> cards(context_vars.size());
    for (std::size_t q = 0; q < context_vars.size(); ++q)
        cards[q] = tree.cards[static_cast<std::size_t>(context_vars[q])];
    return cards;
}

// True when every pair of cells differing only in coordinate q maps to
// the same stage; comparing row-major neighbors along q suffices.
bool invariant_in(const LevelStaging& level, const std::vector<int>& cards,
                  const std::vector<std::size_t>& strides, std::size_t q) {
    const std::size_t stride = strides[q];
    const std::size_t card = static_cast<std::size_t>(cards[q]);
    for (std::size_t cell = 0; cell < level.stage_of.size(); ++cell) {
        const std::size_t xq = (cell / stride) % card;
        if (xq == 0) continue;
        if (level.stage_of[cell] != level.stage_of[cell - stride]) return false;
    }
    return true;
}

LevelStaging reduce_level(const StagedTree& tree, const LevelStaging& level) {
    const std::vector<int> cards = context_cards(tree, level.context_vars);
    const std::vector<std::size_t> strides = strides_for(cards);

    std::vector<std::size_t> kept;
    for (std::size_t q = 0; q < level.context_vars.size(); ++q)
        if (!invariant_in(level, cards, strides, q)) kept.push_back(q);
    if (kept.size() == level.context_vars.size()) return level;

    LevelStaging reduced;
    reduced.n_stages = level.n_stages;
    for (std::size_t q : kept) reduced.context_vars.push_back(level.context_vars[q]);

    const std::vector<int> kept_cards = context_cards(tree, reduced.context_vars);
    std::size_t cells = 1;
    for (int c : kept_cards) cells *= static_cast<std::size_t>(c);
    const std::vector<std::size_t> kept_strides = strides_for(kept_cards);

    reduced.stage_of.resize(cells);
    for (std::size_t cell = 0; cell < cells; ++cell) {
        // Extend with dropped coordinates at 0; invariance makes the
        // choice immaterial.
        std::size_t full = 0;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            const std::size_t value = (cell / kept_strides[j]) % static_cast<std::size_t>(kept_cards[j]);
            full += value * strides[kept[j]];
        }
        reduced.stage_of[cell] = level.stage_of[full];
    }
    return reduced;
}

EdgeLabel label_from_reduced(const StagedTree& tree, const LevelStaging& reduced, int parent) {
    const auto it = std::find(reduced.context_vars.begin(), reduced.context_vars.end(), parent);
    if (it == reduced.context_vars.end())
        throw std::invalid_argument("variable is not a parent after context reduction");
    const std::size_t q = static_cast<std::size_t>(it - reduced.context_vars.begin());

    const std::vector<int> cards = context_cards(tree, reduced.context_vars);
    const std::vector<std::size_t> strides = strides_for(cards);
    const std::size_t card_j = static_cast<std::size_t>(cards[q]);
    const std::size_t stride_j = strides[q];
    const std::size_t n_contexts = reduced.stage_of.size() / card_j;

    bool context_flag = false;
    bool partial_flag = false;
    std::vector<int> stages(card_j);
    for (std::size_t ctx = 0; ctx < n_contexts; ++ctx) {
        // Cell of (x_C = ctx, x_j = 0): re-expand ctx around coordinate q.
        const std::size_t outer = ctx / stride_j;
        const std::size_t inner = ctx % stride_j;
        const std::size_t base = outer * stride_j * card_j + inner;
        for (std::size_t xj = 0; xj < card_j; ++xj)
            stages[xj] = reduced.stage_of[base + xj * stride_j];

        const bool all_equal = std::all_of(stages.begin(), stages.end(),
                                           [&](int s) { return s == stages.front(); });
        if (all_equal) {
            context_flag = true;
            continue;
        }
        // A repeated stage within a non-constant slice is a collapse on a
        // strict subset of the parent's values; it needs card_j > 2 and
        // card_j == 2 can never produce one here.
        std::vector<int> sorted = stages;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) partial_flag = true;
    }

    if (context_flag && partial_flag) return EdgeLabel::ContextPartial;
    if (context_flag) return EdgeLabel::Context;
    if (partial_flag) return EdgeLabel::Partial;

    // Local: some stage spans two cells with different parent values.
    std::vector<std::set<int>> values_by_stage(static_cast<std::size_t>(reduced.n_stages));
    for (std::size_t cell = 0; cell < reduced.stage_of.size(); ++cell) {
        const std::size_t xj = (cell / stride_j) % card_j;
        values_by_stage[static_cast<std::size_t>(reduced.stage_of[cell])].insert(static_cast<int>(xj));
    }
    for (const auto& values : values_by_stage)
        if (values.size() >= 2) return EdgeLabel::Local;
    return EdgeLabel::Total;
}

}  // namespace

StagedTree reduce_contexts(const StagedTree& tree) {
    StagedTree out = tree;
    for (auto& level : out.levels) level = reduce_level(tree, level);
    return out;
}

std::vector<std::vector<int>> extract_parents(const StagedTree& tree) {
    std::vector<std::vector<int>> parents;
    parents.reserve(tree.levels.size());
    for (const auto& level : tree.levels) parents.push_back(reduce_level(tree, level).context_vars);
    return parents;
}

EdgeLabel label_edge(const StagedTree& tree, int parent, int child) {
    const auto pos = std::find(tree.order.begin(), tree.order.end(), child);
    if (pos == tree.order.end()) throw std::invalid_argument("unknown child variable");
    const std::size_t level = static_cast<std::size_t>(pos - tree.order.begin());
    return label_from_reduced(tree, reduce_level(tree, tree.levels[level]), parent);
}

Aldag tree_to_aldag(const StagedTree& tree) {
    Aldag out;
    out.order = tree.order;
    out.dag = Dag(tree.n_vars());
    for (int i = 0; i < tree.n_vars(); ++i) {
        const LevelStaging reduced = reduce_level(tree, tree.levels[static_cast<std::size_t>(i)]);
        const int child = tree.order[static_cast<std::size_t>(i)];
        for (int parent : reduced.context_vars) {
            out.dag.add_edge(parent, child);
            out.labels[{parent, child}] = label_from_reduced(tree, reduced, parent);
        }
    }
    return out;
}

DependenceSubtree dependence_subtree(const StagedTree& tree, int variable) {
    const auto pos = std::find(tree.order.begin(), tree.order.end(), variable);
    if (pos == tree.order.end()) throw std::invalid_argument("unknown variable");
    const std::size_t level = static_cast<std::size_t>(pos - tree.order.begin());
    const LevelStaging reduced = reduce_level(tree, tree.levels[level]);

    DependenceSubtree subtree;
    subtree.variable = variable;
    subtree.parents = reduced.context_vars;
    subtree.parent_cards = context_cards(tree, reduced.context_vars);
    subtree.cell_stage = reduced.stage_of;
    subtree.n_stages = reduced.n_stages;
    return subtree;
}

namespace {

std::string quoted(const std::string& name) {
    std::string out = "\"";
    for (char ch : name) {
        if (ch == '"' || ch == '\\') out.push_back('\\');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

// Fixed edge-color legend.
std::string_view color_of(EdgeLabel label) {
    switch (label) {
        case EdgeLabel::Context: return "red";
        case EdgeLabel::Partial: return "blue";
        case EdgeLabel::ContextPartial: return "violet";
        case EdgeLabel::Local: return "green";
        case EdgeLabel::Total: return "black";
    }
    return "black";
}

constexpr const char* kStagePalette[] = {"cyan",   "orange",    "green",  "magenta",
                                         "brown",  "blue",      "red",    "gold",
                                         "purple", "turquoise", "salmon", "gray"};
constexpr std::size_t kPaletteSize = sizeof(kStagePalette) / sizeof(kStagePalette[0]);

}  // namespace

std::string to_dot(const Aldag& a, const std::vector<std::string>& names) {
    if (static_cast<int>(names.size()) != a.dag.vertex_count())
        throw std::invalid_argument("one name per vertex required");
    std::ostringstream out;
    out << "digraph model {\n";
    for (int v = 0; v < a.dag.vertex_count(); ++v)
        out << "  " << quoted(names[static_cast<std::size_t>(v)]) << ";\n";
    for (const auto& [from, to] : a.dag.edges()) {
        const EdgeLabel label = a.labels.at({from, to});
        out << "  " << quoted(names[static_cast<std::size_t>(from)]) << " -> "
            << quoted(names[static_cast<std::size_t>(to)]) << " [color=" << color_of(label)
            << ", label=" << quoted(std::string(to_string(label))) << "];\n";
    }
    out << "}\n";
    return out.str();
}

std::string to_dot(const DependenceSubtree& subtree, const std::vector<VariableMeta>& variables) {
    std::ostringstream out;
    out << "digraph subtree {\n  rankdir=LR;\n  node [shape=circle, label=\"\"];\n";

    // One node per parent-configuration prefix, depth-major; nodes at the
    // last parent depth are filled by stage class.
    const std::size_t depth = subtree.parents.size();
    std::vector<std::size_t> level_size(depth + 1, 1);
    for (std::size_t d = 0; d < depth; ++d)
        level_size[d + 1] = level_size[d] * static_cast<std::size_t>(subtree.parent_cards[d]);

    std::vector<std::size_t> level_base(depth + 1, 0);
    for (std::size_t d = 1; d <= depth; ++d) level_base[d] = level_base[d - 1] + level_size[d - 1];

    out << "  v0;\n";
    for (std::size_t d = 1; d <= depth; ++d) {
        for (std::size_t i = 0; i < level_size[d]; ++i) {
            const std::size_t id = level_base[d] + i;
            if (d == depth) {
                const int stage = subtree.cell_stage[i];
                out << "  v" << id << " [style=filled, fillcolor=\""
                    << kStagePalette[static_cast<std::size_t>(stage) % kPaletteSize] << "\"];\n";
            } else {
                out << "  v" << id << ";\n";
            }
        }
    }

    for (std::size_t d = 0; d < depth; ++d) {
        const auto& meta = variables[static_cast<std::size_t>(subtree.parents[d])];
        const std::size_t card = static_cast<std::size_t>(subtree.parent_cards[d]);
        for (std::size_t i = 0; i < level_size[d]; ++i) {
            for (std::size_t x = 0; x < card; ++x) {
                out << "  v" << level_base[d] + i << " -> v" << level_base[d + 1] + i * card + x
                    << " [label=" << quoted(meta.levels[x]) << "];\n";
            }
        }
    }

    // Terminal fan-out over the variable's own levels.
    const auto& child = variables[static_cast<std::size_t>(subtree.variable)];
    const std::size_t leaf_base = level_base[depth] + level_size[depth];
    for (std::size_t i = 0; i < level_size[depth]; ++i) {
        for (std::size_t x = 0; x < child.levels.size(); ++x) {
            const std::size_t id = leaf_base + i * child.levels.size() + x;
            out << "  v" << id << " [shape=point];\n";
            out << "  v" << level_base[depth] + i << " -> v" << id
                << " [label=" << quoted(child.levels[x]) << "];\n";
        }
    }
    out << "}\n";
    return out.str();
}

}  // namespace aldag
