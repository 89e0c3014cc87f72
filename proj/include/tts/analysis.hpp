#pragma once

#include "tts/engine.hpp"
#include "tts/simenv.hpp"

#include <string>
#include <vector>

namespace tts::analysis {

struct VerificationReport {
    std::string claim;
    int instances = 0;
    double max_deviation = 0.0;
    bool pass = false;
    std::string parameters;
};

/**
 * Limit regimes of the optimal Bayesian allocator plus the finite-kappa
 * shifted-linear closeness check. The 0.02 relative-L1 tolerance was
 * measured once against the oracle-validated greedy and is frozen here.
 */
VerificationReport verify_prop1(int instances, std::uint64_t seed);

/// kl_gap nonnegativity, the equal-counts equality condition, and the
/// log-utility difference identity on random groupings.
VerificationReport verify_prop2(int instances, std::uint64_t seed);

/**
 * Ideal hard-cluster recovery: identical within-direction embeddings and
 * scores, cross-direction cosine <= c_max, tiny T_s; DORA's per-direction
 * weight sums must match the optimal direction-level allocation.
 */
VerificationReport verify_theorem1(double tolerance, double similarity_temperature,
                                   double max_cross_cosine, int instances, std::uint64_t seed);

/// Greedy allocator against exhaustive composition enumeration.
VerificationReport verify_greedy_oracle(int instances, std::uint64_t seed);

/// Beta product identity against a large Monte-Carlo estimate.
VerificationReport verify_beta_monte_carlo(int instances, std::uint64_t seed);

struct StrategyCell {
    std::string strategy;
    int budget = 0;
    engine::TrialReport report;
};

struct ComparisonTable {
    std::vector<StrategyCell> cells;
};

/**
 * Paired-seed strategy comparison on one environment spec: trial t of every
 * strategy consumes the identical environment instance and root draws.
 */
ComparisonTable compare_strategies(const simenv::EnvSpec& env_spec,
                                   const std::vector<alloc::StrategySpec>& strategies,
                                   int trials, const std::vector<int>& budgets,
                                   const engine::SearchConfig& base_config);

} // namespace tts::analysis
