#include <doctest.h>

#include <cmath>
#include <random>

#include "aldag/sim.hpp"
#include "oracles.hpp"

using namespace aldag;

namespace {

// Exact joint distribution of a generated model by chaining the stage
// distributions over every configuration.
std::map<std::vector<int>, double> exact_joint(const StagedTreeModel& model) {
    const int p = model.tree.n_vars();
    std::map<std::vector<int>, double> joint;
    std::size_t cells = 1;
    for (int c : model.tree.cards) cells *= static_cast<std::size_t>(c);
    for (std::size_t flat = 0; flat < cells; ++flat) {
        std::vector<int> config(static_cast<std::size_t>(p));
        std::size_t rem = flat;
        for (int j = p - 1; j >= 0; --j) {
            config[static_cast<std::size_t>(j)] =
                static_cast<int>(rem % static_cast<std::size_t>(model.tree.cards[static_cast<std::size_t>(j)]));
            rem /= static_cast<std::size_t>(model.tree.cards[static_cast<std::size_t>(j)]);
        }
        double prob = 1.0;
        for (int i = 0; i < p; ++i) {
            const LevelStaging& level = model.tree.levels[static_cast<std::size_t>(i)];
            std::size_t cell = 0;
            for (int v : level.context_vars)
                cell = cell * static_cast<std::size_t>(model.tree.cards[static_cast<std::size_t>(v)]) +
                       static_cast<std::size_t>(config[static_cast<std::size_t>(v)]);
            const int var = model.tree.order[static_cast<std::size_t>(i)];
            prob *= model.probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(
                level.stage_of[cell])][static_cast<std::size_t>(config[static_cast<std::size_t>(var)])];
        }
        joint[config] = prob;
    }
    return joint;
}

}  // namespace

TEST_SUITE_BEGIN("sim");

TEST_CASE("t = 1 collapses every level to a single stage") {
    std::mt19937_64 rng(211);
    SimConfig config;
    config.p = 5;
    config.k = 2;
    config.t = 1;
    const StagedTreeModel model = random_staged_tree(config, rng);
    for (const auto& level : model.tree.levels) CHECK(level.n_stages == 1);
}

TEST_CASE("stage counts follow min(t, cells)") {
    std::mt19937_64 rng(223);
    SimConfig config;
    config.p = 4;
    config.k = 2;
    config.t = 3;
    const StagedTreeModel model = random_staged_tree(config, rng);
    CHECK(model.tree.levels[0].n_stages == 1);         // one empty-context cell
    CHECK(model.tree.levels[1].n_stages == 2);         // two cells, min(3, 2)
    CHECK(model.tree.levels[3].context_vars.size() == 2);
    CHECK(model.tree.levels[3].stage_of.size() == 4);  // two binary parents
    CHECK(model.tree.levels[3].n_stages == 3);         // min(3, 4)
}

TEST_CASE("generation is deterministic in the seed") {
    SimConfig config;
    config.p = 5;
    config.k = 2;
    config.t = 3;
    std::mt19937_64 rng_a(227);
    std::mt19937_64 rng_b(227);
    const StagedTreeModel a = random_staged_tree(config, rng_a);
    const StagedTreeModel b = random_staged_tree(config, rng_b);
    CHECK(a.tree == b.tree);
    CHECK(a.probs == b.probs);
}

TEST_CASE("generated stagings are always surjective and valid") {
    std::mt19937_64 rng(229);
    for (int trial = 0; trial < 30; ++trial) {
        SimConfig config;
        config.p = std::uniform_int_distribution<int>(1, 6)(rng);
        config.k = std::uniform_int_distribution<int>(1, 3)(rng);
        config.t = std::uniform_int_distribution<int>(1, 4)(rng);
        const StagedTreeModel model = random_staged_tree(config, rng);
        validate(model.tree);  // throws on unused stage ids
        for (const auto& level_probs : model.probs)
            for (const auto& stage : level_probs) {
                double sum = 0.0;
                for (double v : stage) sum += v;
                CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            }
    }
}

TEST_CASE("point-mass parameters give identical rows") {
    SimConfig config;
    config.p = 3;
    config.k = 1;
    config.t = 1;
    std::mt19937_64 rng(233);
    StagedTreeModel model = random_staged_tree(config, rng);
    for (auto& level : model.probs)
        for (auto& stage : level) {
            stage.assign(stage.size(), 0.0);
            stage[0] = 1.0;
        }
    const CategoricalDataset data = sample_dataset(model, 25, rng);
    for (std::int64_t r = 0; r < data.n_rows(); ++r)
        for (int v = 0; v < data.n_vars(); ++v) CHECK(data.code(r, v) == 0);
}

TEST_CASE("sampling zero rows is valid") {
    SimConfig config;
    std::mt19937_64 rng(239);
    const StagedTreeModel model = random_staged_tree(config, rng);
    const CategoricalDataset data = sample_dataset(model, 0, rng);
    CHECK(data.n_rows() == 0);
    CHECK(data.n_vars() == config.p);
}

TEST_CASE("empirical marginals stay within 0.05 total variation of truth") {
    SimConfig config;
    config.p = 4;
    config.k = 2;
    config.t = 3;
    std::mt19937_64 rng(241);
    const StagedTreeModel model = random_staged_tree(config, rng);
    const auto joint = exact_joint(model);
    const CategoricalDataset data = sample_dataset(model, 10000, rng);

    for (int v = 0; v < config.p; ++v) {
        std::vector<double> truth(static_cast<std::size_t>(model.tree.cards[static_cast<std::size_t>(v)]), 0.0);
        for (const auto& [config_vals, prob] : joint)
            truth[static_cast<std::size_t>(config_vals[static_cast<std::size_t>(v)])] += prob;
        std::vector<double> freq(truth.size(), 0.0);
        for (std::int64_t r = 0; r < data.n_rows(); ++r)
            freq[static_cast<std::size_t>(data.code(r, v))] += 1.0 / 10000.0;
        double tv = 0.0;
        for (std::size_t x = 0; x < truth.size(); ++x) tv += std::abs(truth[x] - freq[x]);
        CHECK(tv / 2.0 <= 0.05);
    }
}

TEST_CASE("refitting the true structure lands in the 3-sigma likelihood band") {
    SimConfig config;
    config.p = 4;
    config.k = 2;
    config.t = 2;
    std::mt19937_64 rng(251);
    const StagedTreeModel model = random_staged_tree(config, rng);
    const auto joint = exact_joint(model);

    double mean = 0.0;
    double second = 0.0;
    for (const auto& [config_vals, prob] : joint) {
        if (prob <= 0.0) continue;
        const double l = std::log(prob);
        mean += prob * l;
        second += prob * l * l;
    }
    const double var = second - mean * mean;

    const std::int64_t n = 10000;
    const CategoricalDataset data = sample_dataset(model, n, rng);
    const double loglik = log_likelihood(fit(model.tree, data));
    const double band = 3.0 * std::sqrt(var * static_cast<double>(n));
    // The fitted value sits above the plug-in value by at most the
    // parameter dimension, well inside the band.
    CHECK(loglik >= static_cast<double>(n) * mean - band);
    CHECK(loglik <= static_cast<double>(n) * mean + band + static_cast<double>(parameter_count(model.tree)));
}

TEST_CASE("kendall tau counts discordant pairs") {
    CHECK(kendall_tau({0, 1, 2}, {0, 1, 2}) == 0);
    CHECK(kendall_tau({0, 1, 2}, {2, 1, 0}) == 3);
    CHECK(kendall_tau({1, 0, 3, 2}, {0, 1, 2, 3}) == 2);
    CHECK_THROWS_AS(kendall_tau({0, 1}, {0, 1, 2}), std::invalid_argument);
}

TEST_CASE("kendall tau is a metric on permutations") {
    std::mt19937_64 rng(257);
    for (int trial = 0; trial < 20; ++trial) {
        const int p = 5;
        VariableOrder a(p), b(p), c(p);
        std::iota(a.begin(), a.end(), 0);
        b = a;
        c = a;
        std::shuffle(a.begin(), a.end(), rng);
        std::shuffle(b.begin(), b.end(), rng);
        std::shuffle(c.begin(), c.end(), rng);
        CHECK(kendall_tau(a, a) == 0);
        CHECK(kendall_tau(a, b) == kendall_tau(b, a));
        CHECK(kendall_tau(a, c) <= kendall_tau(a, b) + kendall_tau(b, c));
        CHECK(kendall_tau(a, b) <= p * (p - 1) / 2);
    }
}

TEST_CASE("the grid emits one row per config, rep and estimator") {
    GridOptions options;
    options.reps = 2;
    options.seed = 5;
    SimConfig config;
    config.p = 3;
    config.n = 200;
    const auto rows = run_grid({config}, {SimEstimator::Cmi, SimEstimator::Lv, SimEstimator::Dag},
                               options);
    CHECK(rows.size() == 6);
    for (const auto& row : rows) CHECK_FALSE(row.failed);
}

TEST_CASE("grid results are bit-identical across runs and worker counts") {
    SimConfig config;
    config.p = 4;
    config.n = 300;
    GridOptions serial;
    serial.reps = 3;
    serial.seed = 17;
    serial.jobs = 1;
    GridOptions parallel = serial;
    parallel.jobs = 6;
    const std::vector<SimEstimator> estimators{SimEstimator::Cmi, SimEstimator::All};
    const std::string a = results_csv(run_grid({config}, estimators, serial));
    const std::string b = results_csv(run_grid({config}, estimators, parallel));
    CHECK(a == b);
}

TEST_CASE("independence-generating configs yield empty models at scale") {
    SimConfig config;
    config.p = 4;
    config.k = 1;
    config.t = 1;  // one stage per level: mutual independence
    config.n = 5000;
    GridOptions options;
    options.reps = 3;
    options.seed = 23;
    const auto rows =
        run_grid({config}, {SimEstimator::Cmi, SimEstimator::All, SimEstimator::Dag}, options);
    // A sporadic chance association can survive the penalty, so require
    // near-empty rather than exactly empty graphs.
    int empty = 0;
    for (const auto& row : rows) {
        REQUIRE_FALSE(row.failed);
        CHECK(row.edges_total + row.edges_nontotal <= 1);
        empty += (row.edges_total + row.edges_nontotal == 0) ? 1 : 0;
    }
    CHECK(empty * 3 >= static_cast<int>(rows.size()) * 2);
}

TEST_SUITE_END();
