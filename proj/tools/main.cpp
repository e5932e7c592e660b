#include <charconv>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "aldag/aldag.hpp"
#include "aldag/dataset.hpp"
#include "aldag/learner.hpp"
#include "aldag/sim.hpp"
#include "aldag/version.hpp"

namespace fs = std::filesystem;

namespace {

std::string format_double(double value) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string fnv1a64_of_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "unavailable";
    std::uint64_t hash = 1469598103934665603ULL;
    char chunk[4096];
    while (in.read(chunk, sizeof(chunk)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(chunk[i]);
            hash *= 1099511628211ULL;
        }
        if (!in) break;
    }
    std::ostringstream out;
    out << "fnv1a64:" << std::hex << hash;
    return out.str();
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
}

// Reproduction record written next to every output: exact argv, full
// configuration and input/output digests. The wall-time entry is
// informational and the one field that varies between identical runs.
void write_manifest(const fs::path& out_path, const std::string& command,
                    const std::vector<std::string>& argv, const nlohmann::json& config,
                    std::uint64_t seed, const std::vector<fs::path>& inputs,
                    const std::vector<fs::path>& outputs, double wall_time_s) {
    nlohmann::json j;
    j["command"] = command;
    j["argv"] = argv;
    j["config"] = config;
    j["seed"] = seed;
    j["tool_version"] = aldag::kVersion;
    j["wall_time_s"] = wall_time_s;
    j["inputs"] = nlohmann::json::object();
    j["outputs"] = nlohmann::json::object();
    for (const auto& path : inputs) j["inputs"][path.string()] = fnv1a64_of_file(path);
    for (const auto& path : outputs) j["outputs"][path.string()] = fnv1a64_of_file(path);
    write_file(out_path, j.dump(2) + "\n");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) out.push_back(item);
    return out;
}

int variable_index(const aldag::CategoricalDataset& data, const std::string& name) {
    for (int v = 0; v < data.n_vars(); ++v)
        if (data.variable(v).name == name) return v;
    throw std::invalid_argument("unknown variable '" + name + "'");
}

bool parse_double(const std::string& text, double& out) {
    const char* begin = text.data();
    const char* end = begin + text.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

// Equal-frequency binning for every column whose levels all parse as
// numbers and exceed `bins` distinct values; other columns pass through.
aldag::CategoricalDataset discretize_numeric_columns(const aldag::CategoricalDataset& data,
                                                     int bins) {
    const std::size_t p = static_cast<std::size_t>(data.n_vars());
    std::vector<aldag::VariableMeta> vars = data.variables();
    std::vector<int> codes(static_cast<std::size_t>(data.n_rows()) * p);
    for (int v = 0; v < data.n_vars(); ++v) {
        std::vector<double> numeric(vars[static_cast<std::size_t>(v)].levels.size());
        bool eligible = data.card(v) > bins;
        for (std::size_t l = 0; eligible && l < numeric.size(); ++l)
            eligible = parse_double(vars[static_cast<std::size_t>(v)].levels[l], numeric[l]);
        if (!eligible) {
            for (std::int64_t r = 0; r < data.n_rows(); ++r)
                codes[static_cast<std::size_t>(r) * p + static_cast<std::size_t>(v)] = data.code(r, v);
            continue;
        }
        std::vector<double> values(static_cast<std::size_t>(data.n_rows()));
        for (std::int64_t r = 0; r < data.n_rows(); ++r)
            values[static_cast<std::size_t>(r)] = numeric[static_cast<std::size_t>(data.code(r, v))];
        const std::vector<int> binned = aldag::equal_frequency_discretize(values, bins);
        for (std::int64_t r = 0; r < data.n_rows(); ++r)
            codes[static_cast<std::size_t>(r) * p + static_cast<std::size_t>(v)] =
                binned[static_cast<std::size_t>(r)];
        vars[static_cast<std::size_t>(v)].levels.clear();
        for (int b = 0; b < bins; ++b)
            vars[static_cast<std::size_t>(v)].levels.push_back("q" + std::to_string(b + 1));
    }
    return aldag::CategoricalDataset(std::move(vars), std::move(codes));
}

struct LearnArgs {
    std::string data_path;
    int k = 1;
    std::string strategy;
    std::string order;
    int bins = 0;
    double alpha = 0.05;
    std::uint64_t order_cap = 100000;
    std::uint64_t seed = 0;
    std::string out;
    std::string dot;
    std::string subtree;
    std::string delimiter = ",";
    bool no_header = false;
    int jobs = 1;
};

int run_learn(const LearnArgs& args, const std::vector<std::string>& argv) {
    const auto start = std::chrono::steady_clock::now();

    // Flag validation precedes any data access so usage errors exit 2.
    const bool is_lv = args.strategy == "lv";
    aldag::Strategy strategy;
    strategy.k = args.k;
    if (args.strategy == "cmi") strategy.kind = aldag::StrategyKind::FixedCmi;
    else if (args.strategy == "ord1") strategy.kind = aldag::StrategyKind::Ord1;
    else if (args.strategy == "ord2") strategy.kind = aldag::StrategyKind::Ord2;
    else if (args.strategy == "ord3") strategy.kind = aldag::StrategyKind::Ord3;
    else if (args.strategy == "all") strategy.kind = aldag::StrategyKind::AllOrders;
    else if (!is_lv) throw std::invalid_argument("unknown strategy '" + args.strategy + "'");
    if (!args.order.empty() && args.strategy != "cmi")
        throw std::invalid_argument("--order applies to --strategy cmi only");
    if (args.delimiter.size() != 1) throw std::invalid_argument("delimiter must be one character");

    aldag::CsvOptions csv;
    csv.delimiter = args.delimiter[0];
    csv.has_header = !args.no_header;
    aldag::CategoricalDataset data = aldag::load_csv(args.data_path, csv);
    if (args.bins > 0) data = discretize_numeric_columns(data, args.bins);

    aldag::LearnOptions options;
    options.alpha = args.alpha;
    options.order_cap = args.order_cap;
    options.jobs = args.jobs;

    aldag::LearnResult result;
    if (is_lv) {
        result = aldag::lv_pipeline(data, args.k, options);
    } else {
        if (!args.order.empty()) {
            aldag::VariableOrder order;
            for (const std::string& name : split_list(args.order))
                order.push_back(variable_index(data, name));
            strategy.fixed_order = std::move(order);
        }
        result = aldag::learn(data, strategy, options);
    }

    std::vector<std::string> names;
    for (const auto& meta : data.variables()) names.push_back(meta.name);

    aldag::StagedTreeModel model{names, result.tree, result.fitted.probs};
    write_file(args.out, aldag::model_to_json(model));
    std::vector<fs::path> outputs{args.out};

    const aldag::Aldag graph = aldag::tree_to_aldag(result.tree);
    if (!args.dot.empty()) {
        write_file(args.dot, aldag::to_dot(graph, names));
        outputs.push_back(args.dot);
    }
    if (!args.subtree.empty()) {
        const int var = variable_index(data, args.subtree);
        fs::path path(args.out);
        path.replace_extension();
        path += ".subtree-" + args.subtree + ".dot";
        write_file(path, aldag::to_dot(aldag::dependence_subtree(result.tree, var), data.variables()));
        outputs.push_back(path);
    }

    std::map<aldag::EdgeLabel, int> census;
    for (const auto& [edge, label] : graph.labels) ++census[label];
    const auto [n_total, n_other] = graph.label_census();

    std::ostringstream order_text;
    for (std::size_t i = 0; i < result.order_used.size(); ++i) {
        if (i > 0) order_text << ",";
        order_text << names[static_cast<std::size_t>(result.order_used[i])];
    }

    std::cout << "strategy: " << args.strategy << "\n"
              << "k: " << args.k << "\n"
              << "order: " << order_text.str() << "\n"
              << "orders_evaluated: " << result.orders_evaluated << "\n"
              << "bic: " << format_double(result.bic) << "\n"
              << "edges: (" << n_total << ", " << n_other << ")\n";
    for (const auto label : {aldag::EdgeLabel::Context, aldag::EdgeLabel::Partial,
                             aldag::EdgeLabel::ContextPartial, aldag::EdgeLabel::Local,
                             aldag::EdgeLabel::Total}) {
        std::string key(aldag::to_string(label));
        if (label == aldag::EdgeLabel::ContextPartial) key = "context_partial";
        std::cout << "edges_" << key << ": " << census[label] << "\n";
    }

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "wall_time_s: " << format_double(wall) << "\n";

    nlohmann::json config{{"data", args.data_path},    {"k", args.k},
                          {"strategy", args.strategy}, {"order", args.order},
                          {"bins", args.bins},         {"alpha", args.alpha},
                          {"order_cap", args.order_cap}, {"delimiter", args.delimiter},
                          {"no_header", args.no_header}, {"jobs", args.jobs},
                          {"out", args.out},           {"dot", args.dot},
                          {"subtree", args.subtree}};
    write_manifest(args.out + ".manifest.json", "learn", argv, config, args.seed,
                   {args.data_path}, outputs, wall);
    return 0;
}

struct SimulateArgs {
    std::vector<int> p{4};
    std::vector<int> k{1};
    std::vector<int> t{2};
    std::vector<std::int64_t> n{1000};
    int reps = 20;
    std::uint64_t seed = 0;
    std::string estimators = "cmi";
    int cards = 2;
    double alpha = 0.05;
    std::uint64_t order_cap = 100000;
    int jobs = 1;
    bool timing = false;
    std::string out;
};

aldag::SimEstimator parse_estimator(const std::string& name) {
    if (name == "dag") return aldag::SimEstimator::Dag;
    if (name == "lv") return aldag::SimEstimator::Lv;
    if (name == "cmi") return aldag::SimEstimator::Cmi;
    if (name == "ord1") return aldag::SimEstimator::Ord1;
    if (name == "ord2") return aldag::SimEstimator::Ord2;
    if (name == "ord3") return aldag::SimEstimator::Ord3;
    if (name == "all") return aldag::SimEstimator::All;
    throw std::invalid_argument("unknown estimator '" + name + "'");
}

int run_simulate(const SimulateArgs& args, const std::vector<std::string>& argv) {
    const auto start = std::chrono::steady_clock::now();

    std::vector<aldag::SimConfig> grid;
    for (int p : args.p)
        for (int k : args.k)
            for (int t : args.t)
                for (std::int64_t n : args.n) {
                    aldag::SimConfig config;
                    config.p = p;
                    config.k = k;
                    config.t = t;
                    config.n = n;
                    config.cards.assign(static_cast<std::size_t>(p), args.cards);
                    grid.push_back(std::move(config));
                }

    std::vector<aldag::SimEstimator> estimators;
    for (const std::string& name : split_list(args.estimators))
        estimators.push_back(parse_estimator(name));
    if (estimators.empty()) throw std::invalid_argument("no estimators given");

    aldag::GridOptions options;
    options.reps = args.reps;
    options.seed = args.seed;
    options.jobs = args.jobs;
    options.learn.alpha = args.alpha;
    options.learn.order_cap = args.order_cap;

    const std::vector<aldag::SimRow> rows = aldag::run_grid(grid, estimators, options);
    write_file(args.out, aldag::results_csv(rows, args.timing));

    int failed = 0;
    for (const auto& row : rows) failed += row.failed ? 1 : 0;
    std::cout << "configs: " << grid.size() << "\n"
              << "rows: " << rows.size() << "\n"
              << "failed: " << failed << "\n";

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    nlohmann::json config{{"p", args.p},         {"k", args.k},
                          {"t", args.t},         {"n", args.n},
                          {"reps", args.reps},   {"estimators", args.estimators},
                          {"cards", args.cards}, {"alpha", args.alpha},
                          {"order_cap", args.order_cap}, {"jobs", args.jobs},
                          {"timing", args.timing}, {"out", args.out}};
    write_manifest(args.out + ".manifest.json", "simulate", argv, config, args.seed, {},
                   {args.out}, wall);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"staged-tree and labeled-DAG structure learning"};
    app.set_version_flag("--version", std::string(aldag::kVersion));
    app.require_subcommand(1);

    LearnArgs learn_args;
    CLI::App* learn = app.add_subcommand("learn", "learn a model from a CSV file");
    learn->add_option("--data", learn_args.data_path, "input CSV file")->required();
    learn->add_option("--k", learn_args.k, "maximum parents per variable")->check(CLI::PositiveNumber);
    learn->add_option("--strategy", learn_args.strategy, "cmi|ord1|ord2|ord3|all|lv")->required();
    learn->add_option("--order", learn_args.order, "comma-separated variable names (cmi only)");
    learn->add_option("--bins", learn_args.bins, "equal-frequency bins for numeric columns");
    learn->add_option("--alpha", learn_args.alpha, "PC-stable test level (ord3)");
    learn->add_option("--order-cap", learn_args.order_cap, "max candidate orders");
    learn->add_option("--seed", learn_args.seed, "seed recorded in the manifest");
    learn->add_option("--out", learn_args.out, "model JSON output path")->required();
    learn->add_option("--dot", learn_args.dot, "labeled-DAG DOT output path");
    learn->add_option("--subtree", learn_args.subtree, "variable whose dependence subtree to export");
    learn->add_option("--delimiter", learn_args.delimiter, "CSV delimiter (default ,)");
    learn->add_flag("--no-header", learn_args.no_header, "CSV has no header row");
    learn->add_option("--jobs", learn_args.jobs, "parallel order evaluation")->check(CLI::PositiveNumber);

    SimulateArgs sim_args;
    CLI::App* simulate = app.add_subcommand("simulate", "run the generation/recovery grid");
    simulate->add_option("--p", sim_args.p, "variable counts")->delimiter(',');
    simulate->add_option("--k", sim_args.k, "parents per variable")->delimiter(',');
    simulate->add_option("--t", sim_args.t, "stages per level")->delimiter(',');
    simulate->add_option("--n", sim_args.n, "sample sizes")->delimiter(',');
    simulate->add_option("--reps", sim_args.reps, "repetitions per config")->check(CLI::PositiveNumber);
    simulate->add_option("--seed", sim_args.seed, "RNG seed");
    simulate->add_option("--estimators", sim_args.estimators,
                         "comma list of dag|lv|cmi|ord1|ord2|ord3|all");
    simulate->add_option("--cards", sim_args.cards, "cardinality of every simulated variable")
        ->check(CLI::Range(2, 1000));
    simulate->add_option("--alpha", sim_args.alpha, "PC-stable test level (ord3)");
    simulate->add_option("--order-cap", sim_args.order_cap, "max candidate orders");
    simulate->add_option("--jobs", sim_args.jobs, "parallel grid cells")->check(CLI::PositiveNumber);
    simulate->add_flag("--timing", sim_args.timing,
                       "include the wall_time_s column (not reproducible)");
    simulate->add_option("--out", sim_args.out, "results CSV path")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const std::vector<std::string> argv_copy(argv, argv + argc);
    try {
        if (app.got_subcommand(learn)) return run_learn(learn_args, argv_copy);
        return run_simulate(sim_args, argv_copy);
    } catch (const aldag::TooManyOrdersError& e) {
        std::cerr << "error: " << e.what() << " (cap: " << e.cap() << ")\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
