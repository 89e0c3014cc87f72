#include "tts/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tts {

std::vector<double> softmax_weights(std::span<const double> scores, double temperature) {
    if (scores.empty())
        throw std::invalid_argument("softmax_weights: empty score vector");
    if (!(temperature > 0.0))
        throw std::invalid_argument("softmax_weights: temperature must be positive");
    for (double s : scores)
        if (!std::isfinite(s))
            throw std::domain_error("softmax_weights: non-finite score");

    const double hi = *std::max_element(scores.begin(), scores.end());
    std::vector<double> w(scores.size());
    double z = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        w[i] = std::exp((scores[i] - hi) / temperature);
        z += w[i];
    }
    for (double& x : w)
        x /= z;
    return w;
}

AllocationVector apportion(std::span<const double> weights, int budget) {
    if (budget < 0)
        throw std::invalid_argument("apportion: negative budget");
    for (double w : weights)
        if (!(w >= 0.0))
            throw std::invalid_argument("apportion: negative weight");

    const std::size_t k = weights.size();
    AllocationVector counts(k, 0);
    std::vector<double> remainder(k, 0.0);
    long long assigned = 0;
    for (std::size_t i = 0; i < k; ++i) {
        const double exact = static_cast<double>(budget) * weights[i];
        counts[i] = static_cast<int>(std::floor(exact));
        remainder[i] = exact - std::floor(exact);
        assigned += counts[i];
    }

    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (remainder[a] != remainder[b]) return remainder[a] > remainder[b];
        if (weights[a] != weights[b]) return weights[a] > weights[b];
        return a < b;
    });

    long long leftover = budget - assigned;
    for (std::size_t pos = 0; leftover > 0; pos = (pos + 1) % k, --leftover)
        ++counts[order[pos]];
    return counts;
}

} // namespace tts
