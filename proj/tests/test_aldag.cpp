#include <doctest.h>

#include <random>

#include "aldag/aldag.hpp"
#include "oracles.hpp"

using namespace aldag;

namespace {

// Hand-built staging over two ternary and two binary variables whose
// reduced graph exercises every label class at once: a partial edge, a
// total edge, a context/partial edge, a local edge and a context edge,
// plus one conditional independence (no 0 -> 3 edge).
StagedTree demo_tree() {
    StagedTree tree;
    tree.order = {0, 1, 2, 3};
    tree.cards = {3, 3, 2, 2};
    tree.levels.resize(4);

    tree.levels[0] = {{}, {0}, 1};
    tree.levels[1] = {{0}, {0, 0, 1}, 2};
    tree.levels[2] = {{0, 1}, {0, 0, 0, 1, 1, 2, 3, 4, 5}, 6};
    tree.levels[3] = {{0, 1, 2},
                      {0, 0, 1, 2, 3, 1,  //
                       0, 0, 1, 2, 3, 1,  //
                       0, 0, 1, 2, 3, 1},
                      4};
    validate(tree);
    return tree;
}

VariableOrder identity(int p) {
    VariableOrder order(static_cast<std::size_t>(p));
    std::iota(order.begin(), order.end(), 0);
    return order;
}

}  // namespace

TEST_SUITE_BEGIN("aldag");

TEST_CASE("context reduction drops the repeated first coordinate") {
    const StagedTree tree = demo_tree();
    const auto parents = extract_parents(tree);
    CHECK(parents[0].empty());
    CHECK(parents[1] == std::vector<int>{0});
    CHECK(parents[2] == std::vector<int>{0, 1});
    CHECK(parents[3] == std::vector<int>{1, 2});  // coordinate 0 is repeated across blocks

    const StagedTree reduced = reduce_contexts(tree);
    CHECK(reduced.levels[3].context_vars == std::vector<int>{1, 2});
    CHECK(reduced.levels[3].stage_of == std::vector<int>{0, 0, 1, 2, 3, 1});
    CHECK(reduced.levels[3].n_stages == 4);
}

TEST_CASE("a single-stage level has no parents") {
    StagedTree tree;
    tree.order = {0, 1};
    tree.cards = {2, 2};
    tree.levels = {{{}, {0}, 1}, {{0}, {0, 0}, 1}};
    CHECK(extract_parents(tree)[1].empty());
}

TEST_CASE("saturated stagings keep every context variable") {
    Dag g(3);
    g.add_edge(0, 2);
    g.add_edge(1, 2);
    const StagedTree tree = tree_from_dag(g, identity(3), {2, 2, 2});
    CHECK(extract_parents(tree)[2] == std::vector<int>{0, 1});
}

TEST_CASE("each demo edge gets its own dependence class") {
    const StagedTree tree = demo_tree();
    CHECK(label_edge(tree, 0, 1) == EdgeLabel::Partial);
    CHECK(label_edge(tree, 0, 2) == EdgeLabel::Total);
    CHECK(label_edge(tree, 1, 2) == EdgeLabel::ContextPartial);
    CHECK(label_edge(tree, 1, 3) == EdgeLabel::Local);
    CHECK(label_edge(tree, 2, 3) == EdgeLabel::Context);
    CHECK_THROWS_AS(label_edge(tree, 0, 3), std::invalid_argument);
}

TEST_CASE("the demo tree compresses to its expected labeled graph") {
    const Aldag a = tree_to_aldag(demo_tree());
    CHECK(a.dag.edge_count() == 5);
    CHECK_FALSE(a.dag.has_edge(0, 3));
    CHECK(a.labels.at({0, 1}) == EdgeLabel::Partial);
    CHECK(a.labels.at({0, 2}) == EdgeLabel::Total);
    CHECK(a.labels.at({1, 2}) == EdgeLabel::ContextPartial);
    CHECK(a.labels.at({1, 3}) == EdgeLabel::Local);
    CHECK(a.labels.at({2, 3}) == EdgeLabel::Context);
    CHECK(a.label_census() == std::pair<int, int>{1, 4});
}

TEST_CASE("a fully merged tree gives the empty graph") {
    StagedTree tree;
    tree.order = {0, 1, 2};
    tree.cards = {2, 2, 2};
    tree.levels = {{{}, {0}, 1}, {{0}, {0, 0}, 1}, {{0, 1}, {0, 0, 0, 0}, 1}};
    const Aldag a = tree_to_aldag(tree);
    CHECK(a.dag.edge_count() == 0);
    CHECK(a.labels.empty());
}

TEST_CASE("unmerged dag trees keep every edge with the total label") {
    std::mt19937_64 rng(193);
    for (int trial = 0; trial < 10; ++trial) {
        const int p = std::uniform_int_distribution<int>(2, 5)(rng);
        const Dag g = oracles::random_dag(rng, p, 0.5);
        std::vector<int> cards(static_cast<std::size_t>(p));
        for (auto& c : cards) c = std::uniform_int_distribution<int>(2, 3)(rng);
        const Aldag a = tree_to_aldag(tree_from_dag(g, topological_order(g), cards));
        CHECK(a.dag.edges() == g.edges());
        for (const auto& [edge, label] : a.labels) CHECK(label == EdgeLabel::Total);
    }
}

TEST_CASE("binary parents never take partial classes") {
    std::mt19937_64 rng(197);
    for (int trial = 0; trial < 30; ++trial) {
        const int p = 4;
        const Dag g = oracles::random_dag(rng, p, 0.7);
        const VariableOrder order = topological_order(g);
        StagedTree tree = tree_from_dag(g, order, std::vector<int>(4, 2));
        // Random merges create nontrivial stagings.
        for (int step = 0; step < 4; ++step) {
            std::vector<int> mergeable;
            for (int i = 0; i < p; ++i)
                if (tree.levels[static_cast<std::size_t>(i)].n_stages >= 2) mergeable.push_back(i);
            if (mergeable.empty()) break;
            const int level =
                mergeable[std::uniform_int_distribution<std::size_t>(0, mergeable.size() - 1)(rng)];
            const int n = tree.levels[static_cast<std::size_t>(level)].n_stages;
            const int s1 = std::uniform_int_distribution<int>(0, n - 2)(rng);
            const int s2 = std::uniform_int_distribution<int>(s1 + 1, n - 1)(rng);
            tree = merge_stages(tree, level, s1, s2);
        }
        for (const auto& [edge, label] : tree_to_aldag(tree).labels) {
            CHECK(label != EdgeLabel::Partial);
            CHECK(label != EdgeLabel::ContextPartial);
        }
    }
}

TEST_CASE("permuting a dropped column never moves a fitted stage tally") {
    // Level 2 staging depends on variable 1 only; variable 0 is dropped.
    StagedTree tree;
    tree.order = {0, 1, 2};
    tree.cards = {2, 2, 2};
    tree.levels = {{{}, {0}, 1}, {{0}, {0, 1}, 2}, {{0, 1}, {0, 1, 0, 1}, 2}};
    CHECK(extract_parents(tree)[2] == std::vector<int>{1});

    std::mt19937_64 rng(199);
    std::vector<int> codes;
    std::bernoulli_distribution coin(0.5);
    for (int r = 0; r < 60; ++r)
        codes.insert(codes.end(),
                     {coin(rng) ? 1 : 0, coin(rng) ? 1 : 0, coin(rng) ? 1 : 0});
    std::vector<VariableMeta> vars(3);
    for (int j = 0; j < 3; ++j) vars[static_cast<std::size_t>(j)] = {"V" + std::to_string(j), {"0", "1"}};
    const CategoricalDataset data(std::move(vars), std::move(codes));
    const FittedStages before = fit(tree, data);

    // Swap the dropped column's values between two rows that agree on the
    // retained variable; repeat a few times.
    std::vector<int> permuted_codes;
    for (std::int64_t r = 0; r < data.n_rows(); ++r)
        permuted_codes.insert(permuted_codes.end(),
                              {data.code(r, 0), data.code(r, 1), data.code(r, 2)});
    int swaps = 0;
    for (std::int64_t a = 0; a < data.n_rows() && swaps < 10; ++a)
        for (std::int64_t b = a + 1; b < data.n_rows() && swaps < 10; ++b)
            if (data.code(a, 1) == data.code(b, 1) && data.code(a, 0) != data.code(b, 0)) {
                std::swap(permuted_codes[static_cast<std::size_t>(a) * 3],
                          permuted_codes[static_cast<std::size_t>(b) * 3]);
                ++swaps;
            }
    REQUIRE(swaps > 0);
    std::vector<VariableMeta> vars2(3);
    for (int j = 0; j < 3; ++j) vars2[static_cast<std::size_t>(j)] = {"V" + std::to_string(j), {"0", "1"}};
    const CategoricalDataset permuted(std::move(vars2), std::move(permuted_codes));
    const FittedStages after = fit(tree, permuted);
    CHECK(after.counts[2] == before.counts[2]);
}

TEST_CASE("dependence subtrees read off the reduced staging") {
    const StagedTree tree = demo_tree();
    SUBCASE("the last variable") {
        const DependenceSubtree subtree = dependence_subtree(tree, 3);
        CHECK(subtree.parents == std::vector<int>{1, 2});
        CHECK(subtree.parent_cards == std::vector<int>{3, 2});
        CHECK(subtree.cell_stage == std::vector<int>{0, 0, 1, 2, 3, 1});
        CHECK(subtree.n_stages == 4);
    }
    SUBCASE("a parentless variable") {
        const DependenceSubtree subtree = dependence_subtree(tree, 0);
        CHECK(subtree.parents.empty());
        CHECK(subtree.cell_stage == std::vector<int>{0});
        CHECK(subtree.n_stages == 1);
    }
    SUBCASE("two binary parents give a 2 + 4 node subtree") {
        Dag g(3);
        g.add_edge(0, 2);
        g.add_edge(1, 2);
        const StagedTree saturated = tree_from_dag(g, identity(3), {2, 2, 2});
        const DependenceSubtree subtree = dependence_subtree(saturated, 2);
        CHECK(subtree.parents == std::vector<int>{0, 1});
        CHECK(subtree.cell_stage.size() == 4);  // leaf-level nodes
        CHECK(subtree.parent_cards == std::vector<int>{2, 2});
    }
}

TEST_CASE("dot export of an edgeless graph lists only nodes") {
    StagedTree tree;
    tree.order = {0, 1};
    tree.cards = {2, 2};
    tree.levels = {{{}, {0}, 1}, {{0}, {0, 0}, 1}};
    const std::string dot = to_dot(tree_to_aldag(tree), {"A", "B"});
    CHECK(dot == "digraph model {\n  \"A\";\n  \"B\";\n}\n");
}

TEST_CASE("dot export colors edges by their class, in edge order") {
    const Aldag a = tree_to_aldag(demo_tree());
    const std::string dot = to_dot(a, {"X1", "X2", "X3", "X4"});
    const std::vector<std::string> expected_colors{"blue", "black", "violet", "green", "red"};
    std::size_t pos = 0;
    for (const std::string& color : expected_colors) {
        pos = dot.find("color=" + color, pos);
        REQUIRE(pos != std::string::npos);
    }
    CHECK(dot.find("\"X1\" -> \"X2\" [color=blue, label=\"partial\"]") != std::string::npos);
    CHECK(dot.find("\"X3\" -> \"X4\" [color=red, label=\"context\"]") != std::string::npos);
    CHECK(dot.find("context/partial") != std::string::npos);
    CHECK(to_dot(a, {"X1", "X2", "X3", "X4"}) == dot);  // repeat calls are byte-identical
}

TEST_CASE("subtree dot paints leaf-level nodes by stage") {
    const StagedTree tree = demo_tree();
    std::vector<VariableMeta> vars{{"X1", {"low", "medium", "high"}},
                                   {"X2", {"low", "medium", "high"}},
                                   {"X3", {"low", "high"}},
                                   {"X4", {"low", "high"}}};
    const std::string dot = to_dot(dependence_subtree(tree, 3), vars);
    CHECK(dot.find("fillcolor=\"cyan\"") != std::string::npos);
    CHECK(dot.find("label=\"medium\"") != std::string::npos);
    // Four distinct stage classes over six leaf-level cells.
    for (const char* color : {"cyan", "orange", "green", "magenta"})
        CHECK(dot.find(std::string("fillcolor=\"") + color + "\"") != std::string::npos);
    CHECK(to_dot(dependence_subtree(tree, 3), vars) == dot);
}

TEST_SUITE_END();
