#include <benchmark/benchmark.h>

#include <random>

#include "aldag/bn_search.hpp"
#include "aldag/infotheo.hpp"
#include "aldag/learner.hpp"
#include "aldag/sim.hpp"

using namespace aldag;

namespace {

CategoricalDataset synth(int p, int k, int t, std::int64_t n, std::uint64_t seed) {
    SimConfig config;
    config.p = p;
    config.k = k;
    config.t = t;
    std::mt19937_64 rng(seed);
    const StagedTreeModel model = random_staged_tree(config, rng);
    return sample_dataset(model, n, rng);
}

void BM_JointCounts(benchmark::State& state) {
    const auto data = synth(6, 2, 3, state.range(0), 1);
    const std::vector<int> vars{0, 2, 4};
    for (auto _ : state) benchmark::DoNotOptimize(joint_counts(data, vars));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_JointCounts)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_Cmi(benchmark::State& state) {
    const auto data = synth(6, 2, 3, state.range(0), 2);
    const std::vector<int> cond{2, 3};
    for (auto _ : state)
        benchmark::DoNotOptimize(conditional_mutual_information(data, 0, 1, cond));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Cmi)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_TabuDag(benchmark::State& state) {
    const auto data = synth(static_cast<int>(state.range(0)), 2, 3, 5000, 3);
    for (auto _ : state) benchmark::DoNotOptimize(tabu_learn_dag(data, 2));
}
BENCHMARK(BM_TabuDag)->Arg(4)->Arg(6)->Arg(8);

void BM_HillClimb(benchmark::State& state) {
    const auto data = synth(5, static_cast<int>(state.range(0)), 2, 5000, 4);
    const StagedTree start = init_tree(
        data, [] { VariableOrder o(5); std::iota(o.begin(), o.end(), 0); return o; }(),
        static_cast<int>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(backward_hill_climb(start, data));
}
BENCHMARK(BM_HillClimb)->Arg(1)->Arg(2)->Arg(3);

void BM_LearnAllOrders(benchmark::State& state) {
    const auto data = synth(static_cast<int>(state.range(0)), 2, 2, 2000, 5);
    const Strategy strategy{StrategyKind::AllOrders, 2, {}};
    for (auto _ : state) benchmark::DoNotOptimize(learn(data, strategy));
}
BENCHMARK(BM_LearnAllOrders)->Arg(4)->Arg(5)->Arg(6)->Unit(benchmark::kMillisecond);

void BM_PcStable(benchmark::State& state) {
    const auto data = synth(static_cast<int>(state.range(0)), 2, 3, 3000, 6);
    for (auto _ : state) benchmark::DoNotOptimize(pc_stable(data));
}
BENCHMARK(BM_PcStable)->Arg(4)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
