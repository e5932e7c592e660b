#include "aldag/sim.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "aldag/aldag.hpp"
#include "parallel.hpp"

namespace aldag {

std::string_view to_string(SimEstimator est) {
    switch (est) {
        case SimEstimator::Dag: return "dag";
        case SimEstimator::Lv: return "lv";
        case SimEstimator::Cmi: return "cmi";
        case SimEstimator::Ord1: return "ord1";
        case SimEstimator::Ord2: return "ord2";
        case SimEstimator::Ord3: return "ord3";
        case SimEstimator::All: return "all";
    }
    return "cmi";
}

namespace {

// Samplers built on the raw (bit-specified) mt19937_64 stream, so that
// generated models do not depend on library-specific distribution
// implementations.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t below(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % n;
}

std::vector<int> sample_subset(std::mt19937_64& rng, int pool_size, int m) {
    std::vector<int> pool(static_cast<std::size_t>(pool_size));
    std::iota(pool.begin(), pool.end(), 0);
    for (int j = 0; j < m; ++j) {
        const std::uint64_t pick = below(rng, static_cast<std::uint64_t>(pool_size - j));
        std::swap(pool[static_cast<std::size_t>(j)], pool[static_cast<std::size_t>(j) + pick]);
    }
    std::vector<int> out(pool.begin(), pool.begin() + m);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> flat_dirichlet(std::mt19937_64& rng, int dim) {
    std::vector<double> out(static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (double& v : out) {
        v = -std::log1p(-uniform01(rng));  // Exp(1)
        sum += v;
    }
    for (double& v : out) v /= sum;
    return out;
}

}  // namespace

StagedTreeModel random_staged_tree(const SimConfig& config, std::mt19937_64& rng) {
    if (config.p < 1 || config.k < 1 || config.t < 1)
        throw std::invalid_argument("p, k and t must all be >= 1");
    const int p = config.p;
    std::vector<int> cards = config.cards;
    if (cards.empty()) cards.assign(static_cast<std::size_t>(p), 2);
    if (static_cast<int>(cards.size()) != p)
        throw std::invalid_argument("cards must list one cardinality per variable");

    StagedTreeModel model;
    model.tree.cards = cards;
    model.tree.order.resize(static_cast<std::size_t>(p));
    std::iota(model.tree.order.begin(), model.tree.order.end(), 0);
    model.var_names.resize(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) model.var_names[static_cast<std::size_t>(v)] = "X" + std::to_string(v + 1);

    model.tree.levels.resize(static_cast<std::size_t>(p));
    model.probs.resize(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        LevelStaging& level = model.tree.levels[static_cast<std::size_t>(i)];
        level.context_vars = sample_subset(rng, i, std::min(config.k, i));

        std::size_t cells = 1;
        for (int v : level.context_vars) cells *= static_cast<std::size_t>(cards[static_cast<std::size_t>(v)]);
        const int n_stages = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(config.t), cells));

        level.n_stages = n_stages;
        level.stage_of.resize(cells);
        while (true) {  // resample until surjective
            std::vector<bool> hit(static_cast<std::size_t>(n_stages), false);
            for (std::size_t c = 0; c < cells; ++c) {
                const int s = static_cast<int>(below(rng, static_cast<std::uint64_t>(n_stages)));
                level.stage_of[c] = s;
                hit[static_cast<std::size_t>(s)] = true;
            }
            if (std::all_of(hit.begin(), hit.end(), [](bool b) { return b; })) break;
        }

        auto& level_probs = model.probs[static_cast<std::size_t>(i)];
        level_probs.resize(static_cast<std::size_t>(n_stages));
        for (auto& stage : level_probs) stage = flat_dirichlet(rng, cards[static_cast<std::size_t>(i)]);
    }
    return model;
}

CategoricalDataset sample_dataset(const StagedTreeModel& model, std::int64_t n,
                                  std::mt19937_64& rng) {
    const int p = model.tree.n_vars();
    std::vector<VariableMeta> vars(static_cast<std::size_t>(p));
    for (int v = 0; v < p; ++v) {
        vars[static_cast<std::size_t>(v)].name = model.var_names[static_cast<std::size_t>(v)];
        for (int x = 0; x < model.tree.cards[static_cast<std::size_t>(v)]; ++x)
            vars[static_cast<std::size_t>(v)].levels.push_back(std::to_string(x));
    }

    std::vector<int> codes(static_cast<std::size_t>(n) * static_cast<std::size_t>(p));
    std::vector<int> row(static_cast<std::size_t>(p));
    for (std::int64_t r = 0; r < n; ++r) {
        for (int i = 0; i < p; ++i) {
            const LevelStaging& level = model.tree.levels[static_cast<std::size_t>(i)];
            std::size_t cell = 0;
            for (int v : level.context_vars)
                cell = cell * static_cast<std::size_t>(model.tree.cards[static_cast<std::size_t>(v)]) +
                       static_cast<std::size_t>(row[static_cast<std::size_t>(v)]);
            const int stage = level.stage_of[cell];
            const auto& probs = model.probs[static_cast<std::size_t>(i)][static_cast<std::size_t>(stage)];
            const double u = uniform01(rng);
            double acc = 0.0;
            int x = static_cast<int>(probs.size()) - 1;
            for (std::size_t c = 0; c < probs.size(); ++c) {
                acc += probs[c];
                if (u < acc) {
                    x = static_cast<int>(c);
                    break;
                }
            }
            const int var = model.tree.order[static_cast<std::size_t>(i)];
            row[static_cast<std::size_t>(var)] = x;
            codes[static_cast<std::size_t>(r) * static_cast<std::size_t>(p) + static_cast<std::size_t>(var)] = x;
        }
    }
    return CategoricalDataset(std::move(vars), std::move(codes));
}

int kendall_tau(const VariableOrder& a, const VariableOrder& b) {
    if (a.size() != b.size()) throw std::invalid_argument("orders must have the same length");
    const int p = static_cast<int>(a.size());
    std::vector<int> pos_a(static_cast<std::size_t>(p));
    std::vector<int> pos_b(static_cast<std::size_t>(p));
    for (int i = 0; i < p; ++i) {
        pos_a[static_cast<std::size_t>(a[static_cast<std::size_t>(i)])] = i;
        pos_b[static_cast<std::size_t>(b[static_cast<std::size_t>(i)])] = i;
    }
    int discordant = 0;
    for (int u = 0; u < p; ++u)
        for (int v = u + 1; v < p; ++v) {
            const int da = pos_a[static_cast<std::size_t>(u)] - pos_a[static_cast<std::size_t>(v)];
            const int db = pos_b[static_cast<std::size_t>(u)] - pos_b[static_cast<std::size_t>(v)];
            if ((da < 0) != (db < 0)) ++discordant;
        }
    return discordant;
}

namespace {

struct EstimateSummary {
    double bic;
    VariableOrder order;
    int edges_total;
    int edges_nontotal;
};

EstimateSummary run_estimator(SimEstimator est, const CategoricalDataset& data, int k,
                              const LearnOptions& learn_options) {
    if (est == SimEstimator::Dag) {
        const Dag g = tabu_learn_dag(data, k);
        return {dag_bic(g, data), topological_order(g), g.edge_count(), 0};
    }
    LearnResult result;
    if (est == SimEstimator::Lv) {
        result = lv_pipeline(data, k, learn_options);
    } else {
        Strategy strategy;
        strategy.k = k;
        switch (est) {
            case SimEstimator::Cmi: strategy.kind = StrategyKind::FixedCmi; break;
            case SimEstimator::Ord1: strategy.kind = StrategyKind::Ord1; break;
            case SimEstimator::Ord2: strategy.kind = StrategyKind::Ord2; break;
            case SimEstimator::Ord3: strategy.kind = StrategyKind::Ord3; break;
            default: strategy.kind = StrategyKind::AllOrders; break;
        }
        result = learn(data, strategy, learn_options);
    }
    const auto [total, nontotal] = tree_to_aldag(result.tree).label_census();
    return {result.bic, result.order_used, total, nontotal};
}

std::mt19937_64 cell_rng(std::uint64_t seed, std::size_t config_index, int rep) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(config_index), static_cast<std::uint32_t>(rep)};
    return std::mt19937_64(seq);
}

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

}  // namespace

std::vector<SimRow> run_grid(const std::vector<SimConfig>& grid,
                             const std::vector<SimEstimator>& estimators,
                             const GridOptions& options) {
    if (grid.empty()) throw std::invalid_argument("empty generation grid");
    if (options.reps < 1) throw std::invalid_argument("reps must be >= 1");

    const std::size_t n_cells = grid.size() * static_cast<std::size_t>(options.reps);
    std::vector<SimRow> rows(n_cells * estimators.size());

    detail::parallel_for(n_cells, options.jobs, [&](std::size_t cell) {
        const std::size_t config_index = cell / static_cast<std::size_t>(options.reps);
        const int rep = static_cast<int>(cell % static_cast<std::size_t>(options.reps));
        const SimConfig& config = grid[config_index];

        auto rng = cell_rng(options.seed, config_index, rep);
        const StagedTreeModel model = random_staged_tree(config, rng);

        // Column shuffle: new column j holds original variable cols[j].
        std::vector<int> cols(static_cast<std::size_t>(config.p));
        std::iota(cols.begin(), cols.end(), 0);
        for (int j = config.p - 1; j > 0; --j) {
            const std::uint64_t pick = below(rng, static_cast<std::uint64_t>(j) + 1);
            std::swap(cols[static_cast<std::size_t>(j)], cols[pick]);
        }
        std::vector<int> new_index(static_cast<std::size_t>(config.p));
        for (int j = 0; j < config.p; ++j) new_index[static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])] = j;
        VariableOrder true_order(static_cast<std::size_t>(config.p));
        for (int i = 0; i < config.p; ++i) true_order[static_cast<std::size_t>(i)] = new_index[static_cast<std::size_t>(i)];

        const CategoricalDataset data = sample_dataset(model, config.n, rng).reordered(cols);

        for (std::size_t e = 0; e < estimators.size(); ++e) {
            SimRow& row = rows[cell * estimators.size() + e];
            row.p = config.p;
            row.k = config.k;
            row.t = config.t;
            row.n = config.n;
            row.rep = rep;
            row.estimator = estimators[e];
            const auto start = std::chrono::steady_clock::now();
            try {
                const EstimateSummary s = run_estimator(estimators[e], data, config.k, options.learn);
                row.bic = s.bic;
                row.kendall_tau = kendall_tau(s.order, true_order);
                row.kendall_tau_norm = config.p > 1
                                           ? static_cast<double>(row.kendall_tau) /
                                                 (static_cast<double>(config.p) * (config.p - 1) / 2.0)
                                           : 0.0;
                row.edges_total = s.edges_total;
                row.edges_nontotal = s.edges_nontotal;
            } catch (const std::exception& ex) {
                row.failed = true;
                row.error = ex.what();
            }
            row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        }
    });
    return rows;
}

std::string results_csv(const std::vector<SimRow>& rows, bool include_timing) {
    std::ostringstream out;
    out << "# aldag-results/1\n";
    out << "p,k,t,n,rep,estimator,failed,bic,kendall_tau,kendall_tau_norm,edges_total,edges_nontotal";
    if (include_timing) out << ",wall_time_s";
    out << "\n";
    for (const SimRow& row : rows) {
        out << row.p << ',' << row.k << ',' << row.t << ',' << row.n << ',' << row.rep << ','
            << to_string(row.estimator) << ',' << (row.failed ? 1 : 0) << ',';
        if (row.failed) {
            out << ",,,,";
        } else {
            out << format_double(row.bic) << ',' << row.kendall_tau << ','
                << format_double(row.kendall_tau_norm) << ',' << row.edges_total << ','
                << row.edges_nontotal;
        }
        if (include_timing) out << ',' << format_double(row.wall_time_s);
        out << "\n";
    }
    return out.str();
}

}  // namespace aldag
