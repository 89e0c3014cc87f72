#include "tts/bayes.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace tts::bayes {

BetaPrior::BetaPrior(double w, double kappa) : mean_weight(w), concentration(kappa) {
    if (!(w > 0.0 && w < 1.0))
        throw std::invalid_argument("BetaPrior: mean weight must lie in (0,1)");
    if (!(kappa > 0.0) || !std::isfinite(kappa))
        throw std::invalid_argument("BetaPrior: concentration must be positive and finite");
}

double failure_expectation(const BetaPrior& prior, int rollouts) {
    if (rollouts < 0)
        throw std::invalid_argument("failure_expectation: negative rollout count");
    const double k = prior.concentration;
    const double a = k * (1.0 - prior.mean_weight);
    double log_f = 0.0;
    for (int r = 0; r < rollouts; ++r)
        log_f += std::log((a + r) / (k + r));
    return std::exp(log_f);
}

double joint_failure(std::span<const BetaPrior> priors, const AllocationVector& allocation) {
    if (priors.size() != allocation.size())
        throw std::invalid_argument("joint_failure: priors/allocation length mismatch");
    double log_f = 0.0;
    for (std::size_t i = 0; i < priors.size(); ++i) {
        const double k = priors[i].concentration;
        const double a = k * (1.0 - priors[i].mean_weight);
        for (int r = 0; r < allocation[i]; ++r)
            log_f += std::log((a + r) / (k + r));
    }
    return std::exp(log_f);
}

double marginal_log_gain(const BetaPrior& prior, int current_rollouts) {
    const double k = prior.concentration;
    return -std::log1p(-k * prior.mean_weight / (k + current_rollouts));
}

AllocationVector optimal_allocate(std::span<const BetaPrior> priors, int budget) {
    if (priors.empty())
        throw std::invalid_argument("optimal_allocate: no candidates");
    if (budget < 0)
        throw std::invalid_argument("optimal_allocate: negative budget");

    AllocationVector counts(priors.size(), 0);
    // Max-heap over (gain, -index); gains strictly decrease per candidate as
    // its count grows, so the greedy argmax sequence is the exact optimum.
    using Entry = std::tuple<double, std::size_t>;
    auto worse = [](const Entry& a, const Entry& b) {
        if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
        return std::get<1>(a) > std::get<1>(b);
    };
    std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
    for (std::size_t i = 0; i < priors.size(); ++i)
        heap.emplace(marginal_log_gain(priors[i], 0), i);

    for (int n = 0; n < budget; ++n) {
        auto [gain, i] = heap.top();
        heap.pop();
        ++counts[i];
        heap.emplace(marginal_log_gain(priors[i], counts[i]), i);
    }
    return counts;
}

namespace {

void enumerate_compositions(std::span<const BetaPrior> priors, int remaining, std::size_t pos,
                            AllocationVector& current, double& best_value,
                            AllocationVector& best) {
    if (pos + 1 == current.size()) {
        current[pos] = remaining;
        const double v = joint_failure(priors, current);
        if (v < best_value) {
            best_value = v;
            best = current;
        }
        return;
    }
    for (int b = 0; b <= remaining; ++b) {
        current[pos] = b;
        enumerate_compositions(priors, remaining - b, pos + 1, current, best_value, best);
    }
}

} // namespace

AllocationVector brute_force_allocate(std::span<const BetaPrior> priors, int budget) {
    if (priors.empty())
        throw std::invalid_argument("brute_force_allocate: no candidates");
    if (priors.size() > 6 || budget > 16 || budget < 0)
        throw std::invalid_argument("brute_force_allocate: instance too large");

    AllocationVector current(priors.size(), 0);
    AllocationVector best(priors.size(), 0);
    // Lexicographic enumeration with strict improvement keeps the smallest
    // minimizer among exact ties.
    double best_value = std::numeric_limits<double>::infinity();
    enumerate_compositions(priors, budget, 0, current, best_value, best);
    return best;
}

std::vector<double> shifted_linear_allocation(std::span<const double> weights, double kappa,
                                              int budget) {
    const double k = static_cast<double>(weights.size());
    std::vector<double> out(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i)
        out[i] = (budget + k * kappa) * weights[i] - kappa;
    return out;
}

} // namespace tts::bayes
