#pragma once

#include "tts/core.hpp"

#include <span>
#include <vector>

namespace tts::dora {

/// Row-softmaxed similarity with the diagonal extracted as uniqueness.
struct AffinityMatrix {
    std::size_t size = 0;
    std::vector<double> entries;     // row-major k x k, row-stochastic
    std::vector<double> uniqueness;  // gamma_i = P_ii

    double at(std::size_t i, std::size_t j) const { return entries[i * size + j]; }
};

/**
 * Pairwise cosine similarity S_ij = e_i.e_j / (|e_i||e_j|), row-major.
 * Symmetric with unit diagonal.
 */
std::vector<double> similarity_matrix(std::span<const Embedding> embeddings);

/// Row-wise softmax of S at temperature T_s; gamma_i is the diagonal of P.
AffinityMatrix soft_assignment(std::span<const double> similarity, std::size_t size,
                               double similarity_temperature);

/**
 * Direction-oriented allocation: REBASE weights w = softmax(R, T_b)
 * reweighted by uniqueness, w'_i = w_i*gamma_i / sum_j w_j*gamma_j, then
 * apportioned over the budget.
 */
AllocationVector allocate_dora(const CandidateSet& set, double reward_temperature,
                               double similarity_temperature);

/// The real-valued reweighted weights w' (before apportionment).
std::vector<double> dora_weights(const CandidateSet& set, double reward_temperature,
                                 double similarity_temperature);

/**
 * Direction-level budget implicitly induced by solution-level softmax
 * allocation: B_j = N * k_j e^{R_j} / sum_l k_l e^{R_l}.
 */
std::vector<double> induced_direction_allocation(const DirectionGrouping& grouping, int budget);

/// Optimal direction-level budget B_j = N * e^{R_j} / sum_l e^{R_l}.
std::vector<double> optimal_direction_allocation(const DirectionGrouping& grouping, int budget);

/**
 * KL(Q || Q_hat) between the optimal and induced direction distributions;
 * the log-utility cost of allocating at the solution level. Zero iff all
 * direction counts are equal.
 */
double kl_gap(const DirectionGrouping& grouping);

} // namespace tts::dora
