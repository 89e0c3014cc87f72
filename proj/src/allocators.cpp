#include "tts/allocators.hpp"

#include "tts/bayes.hpp"
#include "tts/dora.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

namespace tts::alloc {

const char* strategy_name(StrategyKind kind) {
    switch (kind) {
    case StrategyKind::Temperature: return "temperature";
    case StrategyKind::Beam: return "beam";
    case StrategyKind::Dvts: return "dvts";
    case StrategyKind::Rebase: return "rebase";
    case StrategyKind::Dora: return "dora";
    case StrategyKind::OptimalBayes: return "optimal_bayes";
    }
    throw std::invalid_argument("strategy_name: unknown kind");
}

StrategyKind strategy_from_name(const std::string& name) {
    if (name == "temperature") return StrategyKind::Temperature;
    if (name == "beam") return StrategyKind::Beam;
    if (name == "dvts") return StrategyKind::Dvts;
    if (name == "rebase") return StrategyKind::Rebase;
    if (name == "dora") return StrategyKind::Dora;
    if (name == "optimal_bayes") return StrategyKind::OptimalBayes;
    throw std::invalid_argument("unknown strategy: " + name);
}

namespace {

// Candidate indices sorted by score descending, score ties by lower index.
std::vector<std::size_t> score_ranking(const CandidateSet& set) {
    std::vector<std::size_t> order(set.candidates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return set.candidates[a].score > set.candidates[b].score;
    });
    return order;
}

} // namespace

AllocationVector allocate_temperature(const CandidateSet& set) {
    const int k = static_cast<int>(set.candidates.size());
    if (set.budget < k)
        throw std::invalid_argument("allocate_temperature: budget below candidate count");
    return AllocationVector(k, 1);
}

AllocationVector allocate_beam(const CandidateSet& set, int beam_width) {
    if (beam_width < 1)
        throw std::invalid_argument("allocate_beam: beam width must be >= 1");
    const std::size_t k = set.candidates.size();
    const int n = set.budget;
    AllocationVector counts(k, 0);
    if (n == 0)
        return counts;

    const auto order = score_ranking(set);
    const std::size_t keep = std::min<std::size_t>(k, n / beam_width);
    int assigned = 0;
    for (std::size_t r = 0; r < keep; ++r) {
        counts[order[r]] = beam_width;
        assigned += beam_width;
    }
    // Leftover budget walks down the ranking one rollout at a time.
    for (std::size_t r = 0; assigned < n; r = (r + 1) % std::max<std::size_t>(keep, 1)) {
        ++counts[order[r]];
        ++assigned;
    }
    return counts;
}

AllocationVector allocate_dvts(const CandidateSet& set, int beam_width) {
    if (beam_width < 1)
        throw std::invalid_argument("allocate_dvts: beam width must be >= 1");
    const std::size_t k = set.candidates.size();
    const int n = set.budget;
    AllocationVector counts(k, 0);
    if (n == 0 || k == 0)
        return counts;

    std::map<int, std::vector<std::size_t>> members;
    for (std::size_t i = 0; i < k; ++i) {
        const auto& c = set.candidates[i];
        if (!c.group_id)
            throw std::invalid_argument("allocate_dvts: candidate without group_id");
        members[*c.group_id].push_back(i);
    }

    // Nominal groups 0..K-1 from the round-0 construction; base budget M
    // each, leftover to the lowest group ids.
    const int num_groups = std::max(1, n / beam_width);
    std::map<int, int> budgets;
    for (int g = 0; g < num_groups; ++g)
        budgets[g] = std::min(beam_width, n);
    int leftover = n - num_groups * std::min(beam_width, n);
    for (int g = 0; leftover > 0; g = (g + 1) % num_groups, --leftover)
        ++budgets[g];
    for (const auto& [gid, idx] : members)
        budgets.try_emplace(gid, 0);

    // Budget of extinct groups spreads uniformly over surviving ones.
    int dead_budget = 0;
    std::vector<int> live;
    for (const auto& [gid, b] : budgets) {
        if (members.count(gid))
            live.push_back(gid);
        else
            dead_budget += b;
    }
    const int share = dead_budget / static_cast<int>(live.size());
    int extra = dead_budget % static_cast<int>(live.size());
    for (int gid : live) {
        budgets[gid] += share;
        if (extra > 0) {
            ++budgets[gid];
            --extra;
        }
    }

    // Within each group the highest-score survivor takes the whole budget.
    for (int gid : live) {
        const auto& idx = members[gid];
        std::size_t best = idx[0];
        for (std::size_t i : idx)
            if (set.candidates[i].score > set.candidates[best].score)
                best = i;
        counts[best] = budgets[gid];
    }
    return counts;
}

AllocationVector allocate_rebase(const CandidateSet& set, double reward_temperature) {
    std::vector<double> scores;
    scores.reserve(set.candidates.size());
    for (const auto& c : set.candidates)
        scores.push_back(c.score);
    return apportion(softmax_weights(scores, reward_temperature), set.budget);
}

AllocationVector allocate(const CandidateSet& set, const StrategySpec& spec) {
    if (set.candidates.empty())
        throw std::invalid_argument("allocate: empty candidate set");
    switch (spec.kind) {
    case StrategyKind::Temperature:
        return allocate_temperature(set);
    case StrategyKind::Beam:
        return allocate_beam(set, spec.beam_width);
    case StrategyKind::Dvts:
        return allocate_dvts(set, spec.beam_width);
    case StrategyKind::Rebase:
        return allocate_rebase(set, spec.reward_temperature);
    case StrategyKind::Dora:
        return dora::allocate_dora(set, spec.reward_temperature, spec.similarity_temperature);
    case StrategyKind::OptimalBayes: {
        if (set.candidates.size() == 1)
            return AllocationVector{set.budget};
        std::vector<double> scores;
        for (const auto& c : set.candidates)
            scores.push_back(c.score);
        const auto w = softmax_weights(scores, spec.reward_temperature);
        std::vector<bayes::BetaPrior> priors;
        priors.reserve(w.size());
        for (double wi : w)
            priors.emplace_back(std::clamp(wi, 1e-12, 1.0 - 1e-12), spec.concentration);
        return bayes::optimal_allocate(priors, set.budget);
    }
    }
    throw std::invalid_argument("allocate: unknown strategy kind");
}

} // namespace tts::alloc
