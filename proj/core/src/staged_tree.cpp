#include "aldag/staged_tree.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

namespace aldag {

void validate(const StagedTree& tree) {
    const int p = tree.n_vars();
    if (static_cast<int>(tree.levels.size()) != p)
        throw std::invalid_argument("one staging per level required");
    std::vector<int> position(tree.cards.size(), -1);
    for (int i = 0; i < p; ++i) position[static_cast<std::size_t>(tree.order[static_cast<std::size_t>(i)])] = i;

    for (int i = 0; i < p; ++i) {
        const LevelStaging& level = tree.levels[static_cast<std::size_t>(i)];
        int prev_pos = -1;
        for (int v : level.context_vars) {
            const int pos = position[static_cast<std::size_t>(v)];
            if (pos < 0 || pos >= i)
                throw std::invalid_argument("context variable does not precede level " + std::to_string(i));
            if (pos <= prev_pos)
                throw std::invalid_argument("context variables must follow the tree order");
            prev_pos = pos;
        }
        if (i == 0 && !level.context_vars.empty())
            throw std::invalid_argument("the first level has an empty context");
        if (level.stage_of.size() != context_cell_count(tree, i))
            throw std::invalid_argument("stage map does not cover the context space of level " +
                                        std::to_string(i));
        std::vector<bool> seen(static_cast<std::size_t>(level.n_stages), false);
        for (int s : level.stage_of) {
            if (s < 0 || s >= level.n_stages)
                throw std::invalid_argument("stage id out of range at level " + std::to_string(i));
            seen[static_cast<std::size_t>(s)] = true;
        }
        for (bool b : seen)
            if (!b) throw std::invalid_argument("unused stage id at level " + std::to_string(i));
    }
}

std::int64_t parameter_count(const StagedTree& tree) {
    std::int64_t d = 0;
    for (int i = 0; i < tree.n_vars(); ++i) {
        const int card = tree.cards[static_cast<std::size_t>(tree.order[static_cast<std::size_t>(i)])];
        d += static_cast<std::int64_t>(tree.levels[static_cast<std::size_t>(i)].n_stages) * (card - 1);
    }
    return d;
}

std::size_t context_cell_count(const StagedTree& tree, int level) {
    std::size_t cells = 1;
    for (int v : tree.levels[static_cast<std::size_t>(level)].context_vars)
        cells *= static_cast<std::size_t>(tree.cards[static_cast<std::size_t>(v)]);
    return cells;
}

std::size_t context_cell_of_row(const StagedTree& tree, int level, const CategoricalDataset& data,
                                std::int64_t row) {
    std::size_t idx = 0;
    for (int v : tree.levels[static_cast<std::size_t>(level)].context_vars)
        idx = idx * static_cast<std::size_t>(tree.cards[static_cast<std::size_t>(v)]) +
              static_cast<std::size_t>(data.code(row, v));
    return idx;
}

StagedTree tree_from_dag(const Dag& g, const VariableOrder& order, const std::vector<int>& cards) {
    const int p = g.vertex_count();
    if (static_cast<int>(order.size()) != p || static_cast<int>(cards.size()) != p)
        throw std::invalid_argument("order/cards must cover all vertices");

    std::vector<int> position(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) position[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;
    for (const auto& [from, to] : g.edges())
        if (position[static_cast<std::size_t>(from)] >= position[static_cast<std::size_t>(to)])
            throw OrderMismatchError("order is not topological for the graph");

    StagedTree tree;
    tree.order = order;
    tree.cards = cards;
    tree.levels.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        LevelStaging& level = tree.levels[static_cast<std::size_t>(i)];
        level.context_vars = g.parents(order[static_cast<std::size_t>(i)]);
        std::sort(level.context_vars.begin(), level.context_vars.end(),
                  [&](int a, int b) { return position[static_cast<std::size_t>(a)] < position[static_cast<std::size_t>(b)]; });
        const std::size_t cells = context_cell_count(tree, i);
        level.stage_of.resize(cells);
        for (std::size_t c = 0; c < cells; ++c) level.stage_of[c] = static_cast<int>(c);
        level.n_stages = static_cast<int>(cells);
    }
    return tree;
}

FittedStages fit(const StagedTree& tree, const CategoricalDataset& data) {
    const int p = tree.n_vars();
    FittedStages fitted;
    fitted.n_rows = data.n_rows();
    fitted.counts.resize(static_cast<std::size_t>(p));
    fitted.probs.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        const int var = tree.order[static_cast<std::size_t>(i)];
        const int card = tree.cards[static_cast<std::size_t>(var)];
        fitted.counts[static_cast<std::size_t>(i)].assign(
            static_cast<std::size_t>(tree.levels[static_cast<std::size_t>(i)].n_stages),
            std::vector<std::int64_t>(static_cast<std::size_t>(card), 0));
    }
    for (std::int64_t r = 0; r < data.n_rows(); ++r) {
        for (int i = 0; i < p; ++i) {
            const int var = tree.order[static_cast<std::size_t>(i)];
            const std::size_t cell = context_cell_of_row(tree, i, data, r);
            const int stage = tree.levels[static_cast<std::size_t>(i)].stage_of[cell];
            ++fitted.counts[static_cast<std::size_t>(i)][static_cast<std::size_t>(stage)]
                           [static_cast<std::size_t>(data.code(r, var))];
        }
    }
    for (int i = 0; i < p; ++i) {
        auto& level_probs = fitted.probs[static_cast<std::size_t>(i)];
        level_probs.resize(fitted.counts[static_cast<std::size_t>(i)].size());
        for (std::size_t s = 0; s < level_probs.size(); ++s) {
            const auto& counts = fitted.counts[static_cast<std::size_t>(i)][s];
            const std::int64_t total = std::accumulate(counts.begin(), counts.end(), std::int64_t{0});
            if (total == 0) continue;  // unseen stage: probabilities stay undefined
            level_probs[s].resize(counts.size());
            for (std::size_t x = 0; x < counts.size(); ++x)
                level_probs[s][x] = static_cast<double>(counts[x]) / static_cast<double>(total);
        }
    }
    return fitted;
}

double log_likelihood(const FittedStages& fitted) {
    double loglik = 0.0;
    for (const auto& level : fitted.counts) {
        for (const auto& stage : level) {
            const std::int64_t total = std::accumulate(stage.begin(), stage.end(), std::int64_t{0});
            if (total == 0) continue;
            for (const std::int64_t n : stage) {
                if (n == 0) continue;
                loglik += static_cast<double>(n) *
                          std::log(static_cast<double>(n) / static_cast<double>(total));
            }
        }
    }
    return loglik;
}

double bic(const StagedTree& tree, const FittedStages& fitted, std::int64_t n) {
    if (n < 1) throw std::invalid_argument("bic needs n >= 1");
    return -2.0 * log_likelihood(fitted) +
           static_cast<double>(parameter_count(tree)) * std::log(static_cast<double>(n));
}

StagedTree merge_stages(const StagedTree& tree, int level, int s1, int s2) {
    if (level < 0 || level >= tree.n_vars()) throw InvalidMergeError("level out of range");
    const LevelStaging& old = tree.levels[static_cast<std::size_t>(level)];
    if (s1 == s2) throw InvalidMergeError("cannot merge a stage with itself");
    if (s1 < 0 || s1 >= old.n_stages || s2 < 0 || s2 >= old.n_stages)
        throw InvalidMergeError("stage id out of range");

    StagedTree out = tree;
    LevelStaging& staging = out.levels[static_cast<std::size_t>(level)];
    for (int& s : staging.stage_of)
        if (s == s2) s = s1;

    // Canonical form: renumber by first appearance in row-major order.
    std::vector<int> relabel(static_cast<std::size_t>(old.n_stages), -1);
    int next = 0;
    for (int& s : staging.stage_of) {
        if (relabel[static_cast<std::size_t>(s)] < 0) relabel[static_cast<std::size_t>(s)] = next++;
        s = relabel[static_cast<std::size_t>(s)];
    }
    staging.n_stages = next;
    return out;
}

namespace {

nlohmann::json probs_to_json(const std::vector<std::vector<std::vector<double>>>& probs) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& level : probs) {
        nlohmann::json jl = nlohmann::json::array();
        for (const auto& stage : level) {
            if (stage.empty())
                jl.push_back(nullptr);
            else
                jl.push_back(stage);
        }
        out.push_back(std::move(jl));
    }
    return out;
}

}  // namespace

std::string model_to_json(const StagedTreeModel& model) {
    nlohmann::json j;
    j["format"] = "staged-tree/1";
    j["variables"] = model.var_names;
    j["order"] = model.tree.order;
    j["cards"] = model.tree.cards;
    j["levels"] = nlohmann::json::array();
    for (const auto& level : model.tree.levels) {
        j["levels"].push_back({{"context_vars", level.context_vars},
                               {"stage_of", level.stage_of},
                               {"n_stages", level.n_stages}});
    }
    j["stage_probs"] = probs_to_json(model.probs);
    return j.dump(2) + "\n";
}

StagedTreeModel model_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("format").get<std::string>() != "staged-tree/1")
        throw ParseError("unsupported model format");

    StagedTreeModel model;
    model.var_names = j.at("variables").get<std::vector<std::string>>();
    model.tree.order = j.at("order").get<std::vector<int>>();
    model.tree.cards = j.at("cards").get<std::vector<int>>();
    for (const auto& jl : j.at("levels")) {
        LevelStaging level;
        level.context_vars = jl.at("context_vars").get<std::vector<int>>();
        level.stage_of = jl.at("stage_of").get<std::vector<int>>();
        level.n_stages = jl.at("n_stages").get<int>();
        model.tree.levels.push_back(std::move(level));
    }
    for (const auto& jl : j.at("stage_probs")) {
        std::vector<std::vector<double>> level;
        for (const auto& js : jl) {
            if (js.is_null())
                level.emplace_back();
            else
                level.push_back(js.get<std::vector<double>>());
        }
        model.probs.push_back(std::move(level));
    }
    validate(model.tree);
    return model;
}

}  // namespace aldag
