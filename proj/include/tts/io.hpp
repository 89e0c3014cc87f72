#pragma once

#include "tts/analysis.hpp"
#include "tts/engine.hpp"
#include "tts/simenv.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace tts::io {

/// One line of the line-delimited trace format.
struct TraceRecord {
    int round = 0;
    std::uint64_t candidate_id = 0;
    double prm_score = 0.0;
    std::optional<Embedding> embedding;
    std::optional<int> direction_id;
    std::optional<Token> answer;
    bool complete = false;
};

std::string to_json_line(const TraceRecord& record);
TraceRecord trace_record_from_json(const std::string& line);

std::vector<TraceRecord> read_trace(std::istream& in);
void write_trace(std::ostream& out, const std::vector<TraceRecord>& records);

/// Trace of one search run: per-round candidate records plus completed
/// solutions (tagged complete, carrying their answers).
std::vector<TraceRecord> trace_from_result(const SearchResult& result);

/// Full experiment description parsed from the flat key = value config.
struct SimulationConfig {
    engine::SearchConfig base;
    simenv::EnvSpec env;
    std::vector<alloc::StrategySpec> strategies;
    std::vector<int> budgets;
    int trials = 100;
    std::string trace_output;  // empty = no trace
};

SimulationConfig parse_config(std::istream& in);
SimulationConfig parse_config_file(const std::string& path);

/// Numbers rendered with 17 significant digits so byte-identity is exact.
std::string format_double(double value);

struct ReplayRound {
    int round = 0;
    CandidateSet set;                         // incomplete records of the round
    AllocationVector allocation;              // per requested strategy, by caller
    std::optional<DirectionGrouping> grouping; // present when directions known
};

/// Groups trace records into per-round candidate sets (incomplete records
/// only), attaching a DirectionGrouping when every candidate carries a
/// direction_id. Record order within a round is preserved.
std::vector<ReplayRound> replay_rounds(const std::vector<TraceRecord>& records, int budget);

/// Allocation a strategy would produce for one replayed round.
AllocationVector replay_allocation(const ReplayRound& round, const alloc::StrategySpec& spec);

void write_results_csv(std::ostream& out, const analysis::ComparisonTable& table);
void write_report_json(std::ostream& out, const analysis::ComparisonTable& table,
                       const SimulationConfig& config);

} // namespace tts::io
