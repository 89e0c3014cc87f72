#include "tts/dora.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tts::dora {

std::vector<double> similarity_matrix(std::span<const Embedding> embeddings) {
    const std::size_t k = embeddings.size();
    if (k == 0)
        throw std::invalid_argument("similarity_matrix: no embeddings");
    const std::size_t d = embeddings[0].size();
    std::vector<double> norm(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (embeddings[i].size() != d)
            throw std::invalid_argument("similarity_matrix: dimension mismatch");
        double s = 0.0;
        for (double x : embeddings[i])
            s += x * x;
        norm[i] = std::sqrt(s);
        if (!(norm[i] > 0.0))
            throw std::domain_error("similarity_matrix: zero-norm embedding");
    }

    std::vector<double> s(k * k);
    for (std::size_t i = 0; i < k; ++i) {
        s[i * k + i] = 1.0;
        for (std::size_t j = i + 1; j < k; ++j) {
            double dot = 0.0;
            for (std::size_t t = 0; t < d; ++t)
                dot += embeddings[i][t] * embeddings[j][t];
            const double v = dot / (norm[i] * norm[j]);
            s[i * k + j] = v;
            s[j * k + i] = v;
        }
    }
    return s;
}

AffinityMatrix soft_assignment(std::span<const double> similarity, std::size_t size,
                               double similarity_temperature) {
    if (!(similarity_temperature > 0.0))
        throw std::invalid_argument("soft_assignment: temperature must be positive");
    if (similarity.size() != size * size)
        throw std::invalid_argument("soft_assignment: matrix size mismatch");

    AffinityMatrix out;
    out.size = size;
    out.entries.resize(size * size);
    out.uniqueness.resize(size);
    for (std::size_t i = 0; i < size; ++i) {
        const auto row = similarity.subspan(i * size, size);
        double hi = row[0];
        for (double v : row)
            hi = std::max(hi, v);
        double z = 0.0;
        for (std::size_t j = 0; j < size; ++j) {
            const double e = std::exp((row[j] - hi) / similarity_temperature);
            out.entries[i * size + j] = e;
            z += e;
        }
        for (std::size_t j = 0; j < size; ++j)
            out.entries[i * size + j] /= z;
        out.uniqueness[i] = out.entries[i * size + i];
    }
    return out;
}

std::vector<double> dora_weights(const CandidateSet& set, double reward_temperature,
                                 double similarity_temperature) {
    std::vector<double> scores;
    std::vector<Embedding> embeddings;
    scores.reserve(set.candidates.size());
    embeddings.reserve(set.candidates.size());
    for (const auto& c : set.candidates) {
        if (!c.embedding)
            throw std::invalid_argument("dora_weights: candidate without embedding");
        scores.push_back(c.score);
        embeddings.push_back(*c.embedding);
    }

    auto w = softmax_weights(scores, reward_temperature);
    const auto affinity =
        soft_assignment(similarity_matrix(embeddings), w.size(), similarity_temperature);
    double z = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        w[i] *= affinity.uniqueness[i];
        z += w[i];
    }
    for (double& x : w)
        x /= z;
    return w;
}

AllocationVector allocate_dora(const CandidateSet& set, double reward_temperature,
                               double similarity_temperature) {
    return apportion(dora_weights(set, reward_temperature, similarity_temperature), set.budget);
}

namespace {

void check_grouping(const DirectionGrouping& g) {
    if (g.num_directions < 1)
        throw std::invalid_argument("grouping: need at least one direction");
    if (g.counts.size() != static_cast<std::size_t>(g.num_directions) ||
        g.direction_scores.size() != static_cast<std::size_t>(g.num_directions))
        throw std::invalid_argument("grouping: per-direction vectors misaligned");
    for (int kj : g.counts)
        if (kj < 1)
            throw std::invalid_argument("grouping: empty direction");
}

// softmax over direction scores at temperature 1, optionally count-weighted.
std::vector<double> direction_distribution(const DirectionGrouping& g, bool count_weighted) {
    check_grouping(g);
    const double hi =
        *std::max_element(g.direction_scores.begin(), g.direction_scores.end());
    std::vector<double> q(g.direction_scores.size());
    double z = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j) {
        q[j] = std::exp(g.direction_scores[j] - hi);
        if (count_weighted)
            q[j] *= g.counts[j];
        z += q[j];
    }
    for (double& x : q)
        x /= z;
    return q;
}

} // namespace

std::vector<double> induced_direction_allocation(const DirectionGrouping& grouping, int budget) {
    auto q = direction_distribution(grouping, true);
    for (double& x : q)
        x *= budget;
    return q;
}

std::vector<double> optimal_direction_allocation(const DirectionGrouping& grouping, int budget) {
    auto q = direction_distribution(grouping, false);
    for (double& x : q)
        x *= budget;
    return q;
}

double kl_gap(const DirectionGrouping& grouping) {
    const auto q = direction_distribution(grouping, false);
    const auto q_hat = direction_distribution(grouping, true);
    double kl = 0.0;
    for (std::size_t j = 0; j < q.size(); ++j)
        kl += q[j] * std::log(q[j] / q_hat[j]);
    // KL is nonnegative; rounding can leave a tiny negative residue.
    return std::max(kl, 0.0);
}

} // namespace tts::dora
