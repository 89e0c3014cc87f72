#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace tts {

using Token = std::int64_t;
using Embedding = std::vector<double>;

/**
 * One partial or complete candidate solution.
 *
 * score holds the latest PRM value R_i in [0,1]; embedding, when present,
 * is a unit vector. direction_id is ground truth and only set by the
 * simulator; group_id tags the DVTS subtree a candidate belongs to.
 */
struct Trajectory {
    std::uint64_t id = 0;
    std::optional<std::uint64_t> parent_id;
    int step_count = 0;
    std::optional<int> direction_id;
    std::optional<int> group_id;
    double score = 0.0;
    std::optional<Embedding> embedding;
    bool complete = false;
    std::optional<Token> answer;
};

/// Active frontier at one allocation round.
struct CandidateSet {
    std::vector<Trajectory> candidates;
    int budget = 0;
};

/// Integer rollouts per candidate, aligned with a CandidateSet; sums to the
/// round budget.
using AllocationVector = std::vector<int>;

/// Partition of candidates into g reasoning directions.
struct DirectionGrouping {
    int num_directions = 1;                 // g
    std::vector<int> membership;            // per-candidate direction index
    std::vector<int> counts;                // k_j
    std::vector<double> direction_scores;   // R_j
};

struct RoundRecord {
    int round = 0;
    std::vector<std::uint64_t> candidate_ids;
    std::vector<double> scores;
    std::vector<int> directions;          // -1 where unknown
    std::vector<Embedding> embeddings;    // empty unless the strategy used them
    AllocationVector allocation;
    int completions = 0;
};

struct SearchMetrics {
    bool accurate = false;
    double pass_rate = 0.0;
    bool coverage = false;
};

struct SearchResult {
    std::vector<Trajectory> completed;
    std::optional<Token> voted_answer;
    std::vector<RoundRecord> rounds;
    std::int64_t rollouts_used = 0;
    SearchMetrics metrics;
    bool abstained = false;
};

/**
 * Softmax weights over scores at the given temperature:
 * w_i = exp(R_i/T) / sum_j exp(R_j/T), computed with max-subtraction.
 *
 * Throws std::invalid_argument on empty input or T <= 0, std::domain_error
 * on non-finite scores.
 */
std::vector<double> softmax_weights(std::span<const double> scores, double temperature);

/**
 * Largest-remainder apportionment of an integer budget over proportional
 * weights: counts_i = floor(N*w_i), then one extra to the largest fractional
 * remainders until the total is exactly N. Remainder ties go to the larger
 * weight, then the lower index.
 */
AllocationVector apportion(std::span<const double> weights, int budget);

} // namespace tts
