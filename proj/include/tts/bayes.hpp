#pragma once

#include "tts/core.hpp"

#include <span>
#include <vector>

namespace tts::bayes {

/**
 * Beta(kappa*w, kappa*(1-w)) prior over a candidate's unknown success
 * probability. Mean is w; kappa controls concentration around it.
 */
struct BetaPrior {
    double mean_weight;    // w in (0,1)
    double concentration;  // kappa > 0

    BetaPrior(double w, double kappa);
};

/**
 * E[(1-p)^B] for p ~ Beta(kw, k(1-w)), via the exact product identity
 * prod_{r=0}^{B-1} (k(1-w)+r)/(k+r), accumulated in log space.
 * B = 0 gives 1.
 */
double failure_expectation(const BetaPrior& prior, int rollouts);

/// Product over candidates of failure_expectation(prior_i, B_i).
double joint_failure(std::span<const BetaPrior> priors, const AllocationVector& allocation);

/**
 * Reduction in -log(expected joint failure) from granting one more rollout
 * at a current count of B: -log(1 - kw/(k+B)). Strictly decreasing in B.
 */
double marginal_log_gain(const BetaPrior& prior, int current_rollouts);

/**
 * Exact minimizer of joint_failure over nonnegative integer allocations
 * summing to the budget. Greedy on marginal_log_gain via a max-heap; greedy
 * is exact because the objective is separable with decreasing marginal
 * gains. Ties go to the lower index.
 */
AllocationVector optimal_allocate(std::span<const BetaPrior> priors, int budget);

/**
 * Exhaustive minimizer over all integer compositions of the budget,
 * lexicographically smallest among ties. Oracle for optimal_allocate;
 * requires k <= 6 and budget <= 16.
 */
AllocationVector brute_force_allocate(std::span<const BetaPrior> priors, int budget);

/**
 * The analytic shifted-linear approximation B_i = (N + k*kappa)*w_i - kappa.
 * Real-valued and possibly negative; comparison-only, never used to allocate.
 */
std::vector<double> shifted_linear_allocation(std::span<const double> weights, double kappa,
                                              int budget);

} // namespace tts::bayes
