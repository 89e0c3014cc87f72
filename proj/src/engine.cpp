#include "tts/engine.hpp"

#include "tts/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace tts::engine {

SearchResult run_search(const SearchConfig& config, PolicyInterface& env) {
    if (config.budget < 1 || config.max_steps < 1)
        throw std::invalid_argument("run_search: budget and max_steps must be >= 1");

    const int n = config.budget;
    const bool dvts = config.strategy.kind == alloc::StrategyKind::Dvts;
    const bool temperature = config.strategy.kind == alloc::StrategyKind::Temperature;
    const bool needs_embedding = config.strategy.kind == alloc::StrategyKind::Dora;
    const int num_groups = dvts ? std::max(1, n / config.strategy.beam_width) : 0;

    SearchResult result;
    std::uint64_t next_id = 0;
    std::vector<Trajectory> active;
    active.reserve(n);
    for (int i = 0; i < n; ++i) {
        Trajectory root = env.make_root(next_id++);
        if (dvts)
            root.group_id = i % num_groups;
        active.push_back(std::move(root));
    }

    for (int round = 0; round < config.max_steps; ++round) {
        RoundRecord record;
        record.round = round;

        std::vector<Trajectory> survivors;
        survivors.reserve(active.size());
        for (const auto& parent : active) {
            Trajectory child = env.step(parent, next_id++);
            child.group_id = parent.group_id;
            ++result.rollouts_used;
            if (child.complete) {
                child.score = env.score(child);
                result.completed.push_back(std::move(child));
                ++record.completions;
            } else {
                survivors.push_back(std::move(child));
            }
        }

        if (static_cast<int>(result.completed.size()) >= n || survivors.empty()) {
            result.rounds.push_back(std::move(record));
            break;
        }

        const int pool = static_cast<int>(result.completed.size());
        const int round_budget = config.budget_mode == BudgetMode::Remaining ? n - pool : n;
        if (round_budget <= 0 || round + 1 == config.max_steps) {
            result.rounds.push_back(std::move(record));
            break;
        }

        CandidateSet set;
        set.candidates = std::move(survivors);
        for (auto& c : set.candidates) {
            c.score = env.score(c);
            if (needs_embedding)
                c.embedding = env.embed(c);
        }

        AllocationVector allocation;
        if (temperature) {
            // Eq.-1 semantics: every surviving chain keeps exactly one
            // rollout; the allocator is never consulted per round.
            set.budget = static_cast<int>(set.candidates.size());
            allocation.assign(set.candidates.size(), 1);
        } else {
            set.budget = round_budget;
            allocation = alloc::allocate(set, config.strategy);
        }

        for (const auto& c : set.candidates) {
            record.candidate_ids.push_back(c.id);
            record.scores.push_back(c.score);
            record.directions.push_back(c.direction_id.value_or(-1));
            if (needs_embedding)
                record.embeddings.push_back(*c.embedding);
        }
        record.allocation = allocation;
        result.rounds.push_back(std::move(record));

        std::vector<Trajectory> next;
        next.reserve(round_budget);
        for (std::size_t i = 0; i < set.candidates.size(); ++i)
            for (int copy = 0; copy < allocation[i]; ++copy)
                next.push_back(set.candidates[i]);
        active = std::move(next);
        if (active.empty())
            break;
    }

    if (result.completed.empty()) {
        result.abstained = true;
    } else {
        result.voted_answer = vote::vote(result.completed, config.vote);
    }
    return result;
}

std::pair<double, double> bootstrap_mean_ci(std::span<const double> samples, std::uint64_t seed,
                                            int resamples) {
    if (samples.empty())
        return {0.0, 0.0};
    std::mt19937_64 gen(rng::mix(seed));
    std::uniform_int_distribution<std::size_t> pick(0, samples.size() - 1);
    std::vector<double> means(resamples);
    for (int b = 0; b < resamples; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < samples.size(); ++i)
            s += samples[pick(gen)];
        means[b] = s / static_cast<double>(samples.size());
    }
    std::sort(means.begin(), means.end());
    const auto lo = static_cast<std::size_t>(0.025 * (resamples - 1));
    const auto hi = static_cast<std::size_t>(0.975 * (resamples - 1));
    return {means[lo], means[hi]};
}

TrialReport run_trials(const SearchConfig& config, const EnvFactory& factory, int trials) {
    if (trials < 1)
        throw std::invalid_argument("run_trials: need at least one trial");

    TrialReport report;
    report.trials = trials;
    std::vector<double> coverage(trials);
    report.per_trial_accuracy.resize(trials);
    report.per_trial_pass_rate.resize(trials);

    for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = rng::derive(config.seed, static_cast<std::uint64_t>(t));
        TrialEnvironment env = factory(trial_seed);
        SearchResult r = run_search(config, *env.env);

        int correct = 0;
        for (const auto& traj : r.completed)
            if (traj.answer && *traj.answer == env.gold)
                ++correct;
        const bool accurate = r.voted_answer && *r.voted_answer == env.gold;
        report.per_trial_accuracy[t] = accurate ? 1.0 : 0.0;
        report.per_trial_pass_rate[t] =
            r.completed.empty() ? 0.0
                                : static_cast<double>(correct) /
                                      static_cast<double>(r.completed.size());
        coverage[t] = correct > 0 ? 1.0 : 0.0;
    }

    const auto mean = [](std::span<const double> xs) {
        return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    };
    report.mean_accuracy = mean(report.per_trial_accuracy);
    report.mean_pass_rate = mean(report.per_trial_pass_rate);
    report.mean_coverage = mean(coverage);
    std::tie(report.accuracy_ci_low, report.accuracy_ci_high) =
        bootstrap_mean_ci(report.per_trial_accuracy, rng::derive(config.seed, 0xACC));
    std::tie(report.pass_rate_ci_low, report.pass_rate_ci_high) =
        bootstrap_mean_ci(report.per_trial_pass_rate, rng::derive(config.seed, 0xBA55));
    return report;
}

} // namespace tts::engine
