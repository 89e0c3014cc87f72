#pragma once

#include "tts/engine.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace tts::simenv {

/**
 * Ground-truth direction-structured environment. Each latent direction j
 * has a success probability p_j, a unit centroid for embeddings, and a
 * distractor answer; completed solutions in direction j emit the gold
 * answer with probability p_j.
 */
struct EnvSpec {
    int num_directions = 1;                       // g
    std::vector<double> direction_success;        // p_j
    std::vector<double> initial_direction_weights;
    double stay_probability = 1.0;                // rho
    double completion_probability = 0.25;         // q, per step
    int max_depth = 12;                           // D, forces completion
    double score_noise = 0.0;                     // sigma
    int embedding_dim = 2;                        // d
    double max_cross_cosine = 0.2;                // c_max between centroids
    double embedding_noise = 0.0;                 // eta

    void validate() const;
};

/// The shipped stress benchmark: the best direction is underrepresented at
/// the root, the regime where solution-level allocation wastes budget.
EnvSpec imbalanced_benchmark();

class Environment final : public engine::PolicyInterface {
public:
    Environment(EnvSpec spec, std::uint64_t seed);

    Trajectory make_root(std::uint64_t id) override;
    Trajectory step(const Trajectory& parent, std::uint64_t child_id) override;
    double score(const Trajectory& trajectory) const override;
    Embedding embed(const Trajectory& trajectory) const override;

    Token gold_answer() const { return 0; }
    Token distractor(int direction) const { return static_cast<Token>(direction) + 1; }
    const std::vector<Embedding>& centroids() const { return centroids_; }
    const EnvSpec& spec() const { return spec_; }

private:
    int sample_child_direction(int parent_direction, std::mt19937_64& gen) const;

    EnvSpec spec_;
    std::uint64_t seed_;
    std::vector<Embedding> centroids_;
};

/// generate_instance: environment plus its gold answer, fully determined by
/// (spec, seed).
engine::TrialEnvironment generate_instance(const EnvSpec& spec, std::uint64_t seed);

} // namespace tts::simenv
