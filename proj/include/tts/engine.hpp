#pragma once

#include "tts/allocators.hpp"
#include "tts/core.hpp"
#include "tts/voting.hpp"

#include <cstdint>
#include <functional>
#include <memory>

namespace tts::engine {

enum class BudgetMode { Remaining, Full };

struct SearchConfig {
    int budget = 16;        // N
    int max_steps = 40;     // T_max
    alloc::StrategySpec strategy;
    vote::VoteSpec vote;
    BudgetMode budget_mode = BudgetMode::Remaining;
    std::uint64_t seed = 0;
};

/**
 * Behavioral contract for the policy/scorer pair driving the search.
 *
 * make_root and step take the new node's id; implementations must derive all
 * randomness from (their own seed, that id), so results are independent of
 * call order. score and embed are pure and repeatable per node.
 */
class PolicyInterface {
public:
    virtual ~PolicyInterface() = default;
    virtual Trajectory make_root(std::uint64_t id) = 0;
    virtual Trajectory step(const Trajectory& parent, std::uint64_t child_id) = 0;
    virtual double score(const Trajectory& trajectory) const = 0;
    virtual Embedding embed(const Trajectory& trajectory) const = 0;
};

/**
 * The parallel search loop: N root chains, one policy step per active copy
 * per round, completed solutions pooled, per-round reallocation through the
 * configured strategy, final answer by voting. Incomplete trajectories at
 * the step limit are discarded; an empty pool yields an abstention rather
 * than an error.
 */
SearchResult run_search(const SearchConfig& config, PolicyInterface& env);

struct TrialEnvironment {
    std::unique_ptr<PolicyInterface> env;
    Token gold = 0;
};

using EnvFactory = std::function<TrialEnvironment(std::uint64_t trial_seed)>;

struct TrialReport {
    int trials = 0;
    double mean_accuracy = 0.0;
    double accuracy_ci_low = 0.0;
    double accuracy_ci_high = 0.0;
    double mean_pass_rate = 0.0;
    double pass_rate_ci_low = 0.0;
    double pass_rate_ci_high = 0.0;
    double mean_coverage = 0.0;
    std::vector<double> per_trial_accuracy;
    std::vector<double> per_trial_pass_rate;
};

/**
 * Independent seeded trials; trial t uses the substream derived from
 * (config.seed, t), so results do not depend on execution order. Confidence
 * intervals are percentile bootstrap with 10^4 resamples.
 */
TrialReport run_trials(const SearchConfig& config, const EnvFactory& factory, int trials);

/// Percentile bootstrap CI of the mean (2.5%/97.5%, 10^4 resamples).
std::pair<double, double> bootstrap_mean_ci(std::span<const double> samples, std::uint64_t seed,
                                            int resamples = 10000);

} // namespace tts::engine
