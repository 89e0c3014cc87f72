#include "tts/io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace tts::io {

using nlohmann::json;

std::string format_double(double value) {
    std::ostringstream os;
    os.precision(17);
    os << value;
    return os.str();
}

std::string to_json_line(const TraceRecord& record) {
    json j;
    j["round"] = record.round;
    j["candidate_id"] = record.candidate_id;
    j["prm_score"] = record.prm_score;
    if (record.embedding)
        j["embedding"] = *record.embedding;
    if (record.direction_id)
        j["direction_id"] = *record.direction_id;
    if (record.answer)
        j["answer"] = *record.answer;
    j["complete"] = record.complete;
    return j.dump();
}

TraceRecord trace_record_from_json(const std::string& line) {
    json j = json::parse(line);
    TraceRecord r;
    r.round = j.at("round").get<int>();
    r.candidate_id = j.at("candidate_id").get<std::uint64_t>();
    r.prm_score = j.at("prm_score").get<double>();
    if (j.contains("embedding"))
        r.embedding = j["embedding"].get<Embedding>();
    if (j.contains("direction_id"))
        r.direction_id = j["direction_id"].get<int>();
    if (j.contains("answer"))
        r.answer = j["answer"].get<Token>();
    r.complete = j.at("complete").get<bool>();
    if (!(r.prm_score >= 0.0 && r.prm_score <= 1.0))
        throw std::runtime_error("trace: prm_score out of [0,1]");
    return r;
}

std::vector<TraceRecord> read_trace(std::istream& in) {
    std::vector<TraceRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        records.push_back(trace_record_from_json(line));
    }
    std::optional<std::size_t> dim;
    for (const auto& r : records) {
        if (!r.embedding)
            continue;
        if (dim && r.embedding->size() != *dim)
            throw std::runtime_error("trace: inconsistent embedding dimensions");
        dim = r.embedding->size();
    }
    return records;
}

void write_trace(std::ostream& out, const std::vector<TraceRecord>& records) {
    for (const auto& r : records)
        out << to_json_line(r) << '\n';
}

std::vector<TraceRecord> trace_from_result(const SearchResult& result) {
    std::vector<TraceRecord> records;
    for (const auto& round : result.rounds) {
        for (std::size_t i = 0; i < round.candidate_ids.size(); ++i) {
            TraceRecord r;
            r.round = round.round;
            r.candidate_id = round.candidate_ids[i];
            r.prm_score = round.scores[i];
            if (i < round.directions.size() && round.directions[i] >= 0)
                r.direction_id = round.directions[i];
            if (i < round.embeddings.size())
                r.embedding = round.embeddings[i];
            records.push_back(std::move(r));
        }
    }
    for (const auto& t : result.completed) {
        TraceRecord r;
        r.round = t.step_count - 1;
        r.candidate_id = t.id;
        r.prm_score = t.score;
        if (t.direction_id)
            r.direction_id = *t.direction_id;
        r.answer = t.answer;
        r.complete = true;
        records.push_back(std::move(r));
    }
    return records;
}

namespace {

std::vector<double> parse_double_list(const std::string& value) {
    std::vector<double> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stod(item));
    return out;
}

std::vector<int> parse_int_list(const std::string& value) {
    std::vector<int> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(std::stoi(item));
    return out;
}

std::vector<std::string> parse_string_list(const std::string& value) {
    std::vector<std::string> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ','))
        out.push_back(item);
    return out;
}

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos)
        return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

} // namespace

SimulationConfig parse_config(std::istream& in) {
    SimulationConfig config;
    config.strategies = {alloc::StrategySpec{}};
    config.budgets = {config.base.budget};
    alloc::StrategySpec proto;  // parameter template shared by all strategies
    std::vector<std::string> strategy_names = {"rebase"};

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        try {
            if (key == "budget" || key == "budgets")
                config.budgets = parse_int_list(value);
            else if (key == "trials")
                config.trials = std::stoi(value);
            else if (key == "max_steps")
                config.base.max_steps = std::stoi(value);
            else if (key == "seed")
                config.base.seed = std::stoull(value);
            else if (key == "strategies" || key == "strategy")
                strategy_names = parse_string_list(value);
            else if (key == "vote")
                config.base.vote.kind = vote::vote_from_name(value);
            else if (key == "budget_mode") {
                if (value == "remaining")
                    config.base.budget_mode = engine::BudgetMode::Remaining;
                else if (value == "full")
                    config.base.budget_mode = engine::BudgetMode::Full;
                else
                    throw std::runtime_error("unknown budget_mode: " + value);
            } else if (key == "beam_width")
                proto.beam_width = std::stoi(value);
            else if (key == "reward_temperature")
                proto.reward_temperature = std::stod(value);
            else if (key == "similarity_temperature")
                proto.similarity_temperature = std::stod(value);
            else if (key == "concentration")
                proto.concentration = std::stod(value);
            else if (key == "trace_output")
                config.trace_output = value;
            else if (key == "env.num_directions")
                config.env.num_directions = std::stoi(value);
            else if (key == "env.direction_success")
                config.env.direction_success = parse_double_list(value);
            else if (key == "env.initial_direction_weights")
                config.env.initial_direction_weights = parse_double_list(value);
            else if (key == "env.stay_probability")
                config.env.stay_probability = std::stod(value);
            else if (key == "env.completion_probability")
                config.env.completion_probability = std::stod(value);
            else if (key == "env.max_depth")
                config.env.max_depth = std::stoi(value);
            else if (key == "env.score_noise")
                config.env.score_noise = std::stod(value);
            else if (key == "env.embedding_dim")
                config.env.embedding_dim = std::stoi(value);
            else if (key == "env.max_cross_cosine")
                config.env.max_cross_cosine = std::stod(value);
            else if (key == "env.embedding_noise")
                config.env.embedding_noise = std::stod(value);
            else
                throw std::runtime_error("unknown key: " + key);
        } catch (const std::invalid_argument&) {
            throw std::runtime_error("config line " + std::to_string(line_no) +
                                     ": bad value for " + key);
        }
    }

    config.strategies.clear();
    for (const auto& name : strategy_names) {
        alloc::StrategySpec spec = proto;
        spec.kind = alloc::strategy_from_name(name);
        config.strategies.push_back(spec);
    }
    config.env.validate();
    return config;
}

SimulationConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open config file: " + path);
    return parse_config(in);
}

std::vector<ReplayRound> replay_rounds(const std::vector<TraceRecord>& records, int budget) {
    std::map<int, ReplayRound> rounds;
    for (const auto& r : records) {
        if (r.complete)
            continue;
        auto& round = rounds[r.round];
        round.round = r.round;
        round.set.budget = budget;
        Trajectory t;
        t.id = r.candidate_id;
        t.score = r.prm_score;
        t.embedding = r.embedding;
        if (r.direction_id)
            t.direction_id = *r.direction_id;
        round.set.candidates.push_back(std::move(t));
    }

    std::vector<ReplayRound> out;
    for (auto& [_, round] : rounds) {
        const bool all_directed =
            std::all_of(round.set.candidates.begin(), round.set.candidates.end(),
                        [](const Trajectory& t) { return t.direction_id.has_value(); });
        if (all_directed && !round.set.candidates.empty()) {
            std::map<int, std::pair<int, double>> per_direction;  // count, score sum
            for (const auto& t : round.set.candidates) {
                auto& [count, sum] = per_direction[*t.direction_id];
                ++count;
                sum += t.score;
            }
            DirectionGrouping g;
            g.num_directions = static_cast<int>(per_direction.size());
            std::map<int, int> dense;
            for (const auto& [direction, acc] : per_direction) {
                dense[direction] = static_cast<int>(g.counts.size());
                g.counts.push_back(acc.first);
                g.direction_scores.push_back(acc.second / acc.first);
            }
            for (const auto& t : round.set.candidates)
                g.membership.push_back(dense[*t.direction_id]);
            round.grouping = std::move(g);
        }
        out.push_back(std::move(round));
    }
    return out;
}

AllocationVector replay_allocation(const ReplayRound& round, const alloc::StrategySpec& spec) {
    if (spec.kind == alloc::StrategyKind::Dvts)
        throw std::invalid_argument("replay: dvts requires group structure absent from traces");
    return alloc::allocate(round.set, spec);
}

void write_results_csv(std::ostream& out, const analysis::ComparisonTable& table) {
    out << "strategy,budget,accuracy,ci_low,ci_high,pass_rate,coverage\n";
    for (const auto& cell : table.cells) {
        out << cell.strategy << ',' << cell.budget << ','
            << format_double(cell.report.mean_accuracy) << ','
            << format_double(cell.report.accuracy_ci_low) << ','
            << format_double(cell.report.accuracy_ci_high) << ','
            << format_double(cell.report.mean_pass_rate) << ','
            << format_double(cell.report.mean_coverage) << '\n';
    }
}

void write_report_json(std::ostream& out, const analysis::ComparisonTable& table,
                       const SimulationConfig& config) {
    json cells = json::array();
    for (const auto& cell : table.cells) {
        json c;
        c["strategy"] = cell.strategy;
        c["budget"] = cell.budget;
        c["trials"] = cell.report.trials;
        c["accuracy"] = cell.report.mean_accuracy;
        c["accuracy_ci"] = {cell.report.accuracy_ci_low, cell.report.accuracy_ci_high};
        c["pass_rate"] = cell.report.mean_pass_rate;
        c["pass_rate_ci"] = {cell.report.pass_rate_ci_low, cell.report.pass_rate_ci_high};
        c["coverage"] = cell.report.mean_coverage;
        c["per_trial_accuracy"] = cell.report.per_trial_accuracy;
        cells.push_back(std::move(c));
    }
    json j;
    j["seed"] = config.base.seed;
    j["trials"] = config.trials;
    j["cells"] = std::move(cells);
    out << j.dump(2) << '\n';
}

} // namespace tts::io
