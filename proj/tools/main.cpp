#include "tts/analysis.hpp"
#include "tts/bayes.hpp"
#include "tts/dora.hpp"
#include "tts/io.hpp"
#include "tts/rng.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitVerifyFailed = 3;

std::vector<double> parse_csv_doubles(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stod(item));
    return out;
}

int run_simulate(const std::string& config_path, const std::string& output_path,
                 std::optional<std::uint64_t> seed_override,
                 std::optional<int> trials_override) {
    tts::io::SimulationConfig config;
    try {
        config = tts::io::parse_config_file(config_path);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitUsage;
    }
    if (seed_override)
        config.base.seed = *seed_override;
    if (trials_override)
        config.trials = *trials_override;

    const auto table = tts::analysis::compare_strategies(
        config.env, config.strategies, config.trials, config.budgets, config.base);

    if (output_path.empty()) {
        tts::io::write_results_csv(std::cout, table);
    } else {
        std::ofstream csv(output_path);
        if (!csv) {
            std::cerr << "cannot open output: " << output_path << '\n';
            return kExitRuntime;
        }
        tts::io::write_results_csv(csv, table);
        std::ofstream report(output_path + ".report.json");
        tts::io::write_report_json(report, table, config);
    }

    if (!config.trace_output.empty()) {
        // Trace of trial 0 under the first strategy and budget.
        tts::engine::SearchConfig sc = config.base;
        sc.strategy = config.strategies.front();
        sc.budget = config.budgets.front();
        auto instance = tts::simenv::generate_instance(
            config.env, tts::rng::derive(sc.seed, 0));
        const auto result = tts::engine::run_search(sc, *instance.env);
        std::ofstream trace(config.trace_output);
        if (!trace) {
            std::cerr << "cannot open trace output: " << config.trace_output << '\n';
            return kExitRuntime;
        }
        tts::io::write_trace(trace, tts::io::trace_from_result(result));
    }
    return kExitOk;
}

int run_verify(const std::vector<std::string>& claims, std::uint64_t seed) {
    using tts::analysis::VerificationReport;
    std::vector<VerificationReport> reports;
    for (const auto& claim : claims) {
        if (claim == "prop1")
            reports.push_back(tts::analysis::verify_prop1(100, tts::rng::derive(seed, 1)));
        else if (claim == "prop2")
            reports.push_back(tts::analysis::verify_prop2(1000, tts::rng::derive(seed, 2)));
        else if (claim == "theorem1")
            reports.push_back(tts::analysis::verify_theorem1(1e-3, 1e-3, 0.9, 100,
                                                             tts::rng::derive(seed, 3)));
        else if (claim == "greedy_oracle")
            reports.push_back(
                tts::analysis::verify_greedy_oracle(200, tts::rng::derive(seed, 4)));
        else if (claim == "beta_mc")
            reports.push_back(
                tts::analysis::verify_beta_monte_carlo(50, tts::rng::derive(seed, 5)));
        else {
            std::cerr << "unknown claim: " << claim << '\n';
            return kExitUsage;
        }
    }
    bool all_pass = true;
    for (const auto& r : reports) {
        std::cout << r.claim << ' ' << (r.pass ? "pass" : "FAIL")
                  << " max_deviation=" << tts::io::format_double(r.max_deviation)
                  << " instances=" << r.instances << " (" << r.parameters << ")\n";
        all_pass = all_pass && r.pass;
    }
    return all_pass ? kExitOk : kExitVerifyFailed;
}

int run_allocate(const std::string& strategy, const std::string& scores_text,
                 const std::string& scores_file, int budget,
                 const tts::alloc::StrategySpec& proto,
                 const std::string& embeddings_file) {
    tts::alloc::StrategySpec spec = proto;
    spec.kind = tts::alloc::strategy_from_name(strategy);

    std::vector<double> scores;
    if (!scores_file.empty()) {
        std::ifstream in(scores_file);
        if (!in) {
            std::cerr << "cannot open scores file: " << scores_file << '\n';
            return kExitUsage;
        }
        double v;
        while (in >> v)
            scores.push_back(v);
    } else {
        scores = parse_csv_doubles(scores_text);
    }
    if (scores.empty()) {
        std::cerr << "no scores given\n";
        return kExitUsage;
    }

    std::vector<tts::Embedding> embeddings;
    if (!embeddings_file.empty()) {
        std::ifstream in(embeddings_file);
        if (!in) {
            std::cerr << "cannot open embeddings file: " << embeddings_file << '\n';
            return kExitUsage;
        }
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty())
                embeddings.push_back(parse_csv_doubles(line));
        }
    }
    if (spec.kind == tts::alloc::StrategyKind::Dora && embeddings.size() != scores.size()) {
        std::cerr << "dora needs one embedding per score\n";
        return kExitUsage;
    }

    tts::CandidateSet set;
    set.budget = budget;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        tts::Trajectory t;
        t.id = i;
        t.score = scores[i];
        if (i < embeddings.size())
            t.embedding = embeddings[i];
        if (spec.kind == tts::alloc::StrategyKind::Dvts)
            t.group_id = static_cast<int>(i) %
                         std::max(1, budget / std::max(1, spec.beam_width));
        set.candidates.push_back(std::move(t));
    }

    const auto allocation = tts::alloc::allocate(set, spec);
    for (std::size_t i = 0; i < allocation.size(); ++i)
        std::cout << (i ? "," : "") << allocation[i];
    std::cout << '\n';
    return kExitOk;
}

int run_replay(const std::string& trace_path, const std::vector<std::string>& strategy_names,
               int budget, const tts::alloc::StrategySpec& proto,
               const std::string& output_path) {
    std::ifstream in(trace_path);
    if (!in) {
        std::cerr << "cannot open trace: " << trace_path << '\n';
        return kExitUsage;
    }
    std::vector<tts::io::TraceRecord> records;
    try {
        records = tts::io::read_trace(in);
    } catch (const std::exception& e) {
        std::cerr << "trace error: " << e.what() << '\n';
        return kExitRuntime;
    }
    if (records.empty()) {
        std::cerr << "empty trace\n";
        return kExitUsage;
    }

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!output_path.empty()) {
        file.open(output_path);
        if (!file) {
            std::cerr << "cannot open output: " << output_path << '\n';
            return kExitRuntime;
        }
        out = &file;
    }

    const auto rounds = tts::io::replay_rounds(records, budget);
    for (const auto& round : rounds) {
        nlohmann::json j;
        j["round"] = round.round;
        j["candidates"] = round.set.candidates.size();
        for (const auto& name : strategy_names) {
            tts::alloc::StrategySpec spec = proto;
            spec.kind = tts::alloc::strategy_from_name(name);
            j["allocations"][name] = tts::io::replay_allocation(round, spec);
        }
        if (round.grouping) {
            j["induced_direction_allocation"] =
                tts::dora::induced_direction_allocation(*round.grouping, budget);
            j["optimal_direction_allocation"] =
                tts::dora::optimal_direction_allocation(*round.grouping, budget);
            j["kl_gap"] = tts::dora::kl_gap(*round.grouping);
        }
        *out << j.dump() << '\n';
    }
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rollout-budget allocation engine and search simulator"};
    app.require_subcommand(1);

    std::uint64_t seed = 0;
    app.add_option("--seed", seed, "Master seed")->capture_default_str();

    tts::alloc::StrategySpec proto;

    auto* simulate = app.add_subcommand("simulate", "Run a strategy comparison experiment");
    std::string config_path, output_path;
    std::optional<int> sim_trials;
    simulate->add_option("--config", config_path, "Experiment config file")->required();
    simulate->add_option("--output", output_path, "Results CSV path (stdout if omitted)");
    simulate->add_option("--trials", sim_trials, "Override trial count");

    auto* verify = app.add_subcommand("verify", "Run claim verification suites");
    std::vector<std::string> claims = {"prop1", "prop2", "theorem1", "greedy_oracle",
                                       "beta_mc"};
    verify->add_option("--claims", claims, "Subset of claims to check")->delimiter(',');

    auto* allocate = app.add_subcommand("allocate", "One-shot allocation from scores");
    std::string strategy = "rebase", scores_text, scores_file, embeddings_file;
    int budget = 16;
    allocate->add_option("--strategy", strategy, "Allocation strategy")
        ->capture_default_str();
    allocate->add_option("--scores", scores_text, "Comma-separated PRM scores");
    allocate->add_option("--scores-file", scores_file, "Whitespace-separated scores file");
    allocate->add_option("--embeddings-file", embeddings_file,
                         "One comma-separated embedding per line");
    allocate->add_option("--budget", budget, "Rollout budget")->capture_default_str();
    allocate->add_option("--beam-width", proto.beam_width, "M")->capture_default_str();
    allocate->add_option("--reward-temperature", proto.reward_temperature, "T_b")
        ->capture_default_str();
    allocate->add_option("--similarity-temperature", proto.similarity_temperature, "T_s")
        ->capture_default_str();
    allocate->add_option("--concentration", proto.concentration, "kappa")
        ->capture_default_str();

    auto* replay = app.add_subcommand("replay", "Replay a trace through strategies");
    std::string trace_path, replay_output;
    std::vector<std::string> replay_strategies = {"rebase"};
    replay->add_option("--trace", trace_path, "Trace file (one record per line)")->required();
    replay->add_option("--strategy", replay_strategies, "Strategies to replay")
        ->delimiter(',');
    replay->add_option("--budget", budget, "Round budget")->capture_default_str();
    replay->add_option("--output", replay_output, "Output path (stdout if omitted)");
    replay->add_option("--beam-width", proto.beam_width, "M");
    replay->add_option("--reward-temperature", proto.reward_temperature, "T_b");
    replay->add_option("--similarity-temperature", proto.similarity_temperature, "T_s");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    const bool seed_given = app.count("--seed") > 0;
    try {
        if (simulate->parsed())
            return run_simulate(config_path, output_path,
                                seed_given ? std::optional<std::uint64_t>(seed)
                                           : std::nullopt,
                                sim_trials);
        if (verify->parsed())
            return run_verify(claims, seed);
        if (allocate->parsed())
            return run_allocate(strategy, scores_text, scores_file, budget, proto,
                                embeddings_file);
        if (replay->parsed())
            return run_replay(trace_path, replay_strategies, budget, proto, replay_output);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
