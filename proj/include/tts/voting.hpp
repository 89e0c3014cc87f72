#pragma once

#include "tts/core.hpp"

#include <string>

namespace tts::vote {

enum class VoteKind {
    Majority,
    BestOfN,
    WeightedBestOfN,
    WeightedMajority,
};

struct VoteSpec {
    VoteKind kind = VoteKind::WeightedMajority;
};

const char* vote_name(VoteKind kind);
VoteKind vote_from_name(const std::string& name);

/**
 * Aggregates complete trajectories into a final answer.
 *  - majority: modal answer token
 *  - best_of_n / weighted_best_of_n: answer of the max-score trajectory
 *  - weighted_majority: answer with the largest total score mass
 * All ties break toward the lower trajectory id.
 */
Token vote(std::span<const Trajectory> completed, const VoteSpec& spec);

} // namespace tts::vote
