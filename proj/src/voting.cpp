#include "tts/voting.hpp"

#include <limits>
#include <map>
#include <stdexcept>

namespace tts::vote {

const char* vote_name(VoteKind kind) {
    switch (kind) {
    case VoteKind::Majority: return "majority";
    case VoteKind::BestOfN: return "best_of_n";
    case VoteKind::WeightedBestOfN: return "weighted_best_of_n";
    case VoteKind::WeightedMajority: return "weighted_majority";
    }
    throw std::invalid_argument("vote_name: unknown kind");
}

VoteKind vote_from_name(const std::string& name) {
    if (name == "majority") return VoteKind::Majority;
    if (name == "best_of_n") return VoteKind::BestOfN;
    if (name == "weighted_best_of_n") return VoteKind::WeightedBestOfN;
    if (name == "weighted_majority") return VoteKind::WeightedMajority;
    throw std::invalid_argument("unknown vote method: " + name);
}

namespace {

struct Tally {
    double mass = 0.0;
    int count = 0;
    std::uint64_t first_id = std::numeric_limits<std::uint64_t>::max();
};

} // namespace

Token vote(std::span<const Trajectory> completed, const VoteSpec& spec) {
    if (completed.empty())
        throw std::invalid_argument("vote: no complete solutions");
    for (const auto& t : completed)
        if (!t.complete || !t.answer)
            throw std::invalid_argument("vote: trajectory without a final answer");

    if (spec.kind == VoteKind::BestOfN || spec.kind == VoteKind::WeightedBestOfN) {
        const Trajectory* best = &completed[0];
        for (const auto& t : completed)
            if (t.score > best->score || (t.score == best->score && t.id < best->id))
                best = &t;
        return *best->answer;
    }

    std::map<Token, Tally> tallies;
    for (const auto& t : completed) {
        auto& tally = tallies[*t.answer];
        tally.mass += t.score;
        tally.count += 1;
        tally.first_id = std::min(tally.first_id, t.id);
    }

    const bool weighted = spec.kind == VoteKind::WeightedMajority;
    Token best_token = tallies.begin()->first;
    const Tally* best = &tallies.begin()->second;
    for (const auto& [token, tally] : tallies) {
        const double a = weighted ? tally.mass : static_cast<double>(tally.count);
        const double b = weighted ? best->mass : static_cast<double>(best->count);
        if (a > b || (a == b && tally.first_id < best->first_id)) {
            best_token = token;
            best = &tally;
        }
    }
    return best_token;
}

} // namespace tts::vote
