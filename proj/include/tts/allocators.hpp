#pragma once

#include "tts/core.hpp"

#include <string>

namespace tts::alloc {

enum class StrategyKind {
    Temperature,
    Beam,
    Dvts,
    Rebase,
    Dora,
    OptimalBayes,
};

struct StrategySpec {
    StrategyKind kind = StrategyKind::Rebase;
    int beam_width = 4;                  // M (beam, dvts)
    double reward_temperature = 0.1;     // T_b (rebase, dora, optimal_bayes)
    double similarity_temperature = 0.01; // T_s (dora)
    double concentration = 1.0;          // kappa (optimal_bayes)
};

const char* strategy_name(StrategyKind kind);
StrategyKind strategy_from_name(const std::string& name);

/// Every active candidate gets exactly one rollout. Requires budget >= k;
/// the engine only presents k == N sets for this strategy.
AllocationVector allocate_temperature(const CandidateSet& set);

/**
 * Top-K by score each receive M rollouts, K = floor(N/M) capped at k; any
 * leftover budget is handed one-per-candidate down the score ranking from
 * rank 1. Score ties rank the lower index first.
 */
AllocationVector allocate_beam(const CandidateSet& set, int beam_width);

/**
 * Per-group argmax gets that group's budget. Groups are the K = floor(N/M)
 * subtrees created at round 0; a group with no surviving member has its
 * budget redistributed uniformly over live groups (remainder to the lowest
 * group ids).
 */
AllocationVector allocate_dvts(const CandidateSet& set, int beam_width);

/// Softmax-proportional allocation: apportion(softmax(R, T_b), N).
AllocationVector allocate_rebase(const CandidateSet& set, double reward_temperature);

/// Dispatch on spec.kind; dora and optimal_bayes route through their modules.
AllocationVector allocate(const CandidateSet& set, const StrategySpec& spec);

} // namespace tts::alloc
