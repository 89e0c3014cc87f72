#include "tts/analysis.hpp"

#include "tts/bayes.hpp"
#include "tts/dora.hpp"
#include "tts/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace tts::analysis {

namespace {

std::vector<double> random_weights(std::size_t k, std::mt19937_64& gen) {
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    std::vector<double> w(k);
    double z = 0.0;
    for (double& x : w) {
        x = unit(gen);
        z += x;
    }
    for (double& x : w)
        x /= z;
    return w;
}

std::vector<bayes::BetaPrior> make_priors(const std::vector<double>& w, double kappa) {
    std::vector<bayes::BetaPrior> priors;
    priors.reserve(w.size());
    for (double wi : w)
        priors.emplace_back(std::clamp(wi, 1e-12, 1.0 - 1e-12), kappa);
    return priors;
}

} // namespace

VerificationReport verify_prop1(int instances, std::uint64_t seed) {
    VerificationReport report;
    report.claim = "prop1";
    report.parameters = "kappa_hi=1e6 kappa_lo=1e-6 finite_kappa=2 n_finite=10000 k_finite=5 "
                        "rel_l1_tol=0.02";
    report.pass = true;
    double max_dev = 0.0;

    // Regime kappa -> infinity: everything on the argmax weight.
    {
        std::mt19937_64 gen(rng::derive(seed, 1));
        std::uniform_int_distribution<int> pick_k(2, 6);
        std::uniform_int_distribution<int> pick_n(1, 64);
        for (int i = 0; i < instances; ++i) {
            std::vector<double> w;
            int n = pick_n(gen);
            // Enforce a clear weight gap so the argmax is unambiguous.
            do {
                w = random_weights(pick_k(gen), gen);
                std::vector<double> sorted = w;
                std::sort(sorted.rbegin(), sorted.rend());
                if (sorted[0] - sorted[1] >= 0.05)
                    break;
            } while (true);
            const auto b = bayes::optimal_allocate(make_priors(w, 1e6), n);
            const auto arg = static_cast<std::size_t>(
                std::max_element(w.begin(), w.end()) - w.begin());
            if (b[arg] != n)
                report.pass = false;
            ++report.instances;
        }
    }

    // Regime kappa -> 0: one rollout to each of the top-min(k, N).
    {
        std::mt19937_64 gen(rng::derive(seed, 2));
        std::uniform_int_distribution<int> pick_k(2, 6);
        std::uniform_int_distribution<int> pick_n(1, 8);
        for (int i = 0; i < instances; ++i) {
            const auto w = random_weights(pick_k(gen), gen);
            const int n = pick_n(gen);
            const auto b = bayes::optimal_allocate(make_priors(w, 1e-6), n);
            std::vector<std::size_t> order(w.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t c) { return w[a] > w[c]; });
            const auto top = std::min<std::size_t>(w.size(), static_cast<std::size_t>(n));
            for (std::size_t r = 0; r < top; ++r)
                if (b[order[r]] < 1)
                    report.pass = false;
            ++report.instances;
        }
    }

    // Finite kappa: greedy optimum vs the analytic shifted-linear rule.
    {
        std::mt19937_64 gen(rng::derive(seed, 3));
        const double kappa = 2.0;
        const int n = 10000;
        const std::size_t k = 5;
        for (int i = 0; i < instances; ++i) {
            std::vector<double> w;
            std::vector<double> linear;
            do {
                w = random_weights(k, gen);
                linear = bayes::shifted_linear_allocation(w, kappa, n);
            } while (*std::min_element(linear.begin(), linear.end()) <= 0.0);
            const auto b = bayes::optimal_allocate(make_priors(w, kappa), n);
            double l1 = 0.0;
            for (std::size_t j = 0; j < k; ++j)
                l1 += std::abs(b[j] - linear[j]);
            const double rel = l1 / n;
            max_dev = std::max(max_dev, rel);
            if (rel > 0.02)
                report.pass = false;
            ++report.instances;
        }
    }

    report.max_deviation = max_dev;
    return report;
}

VerificationReport verify_prop2(int instances, std::uint64_t seed) {
    VerificationReport report;
    report.claim = "prop2";
    report.parameters = "identity_tol=1e-12";
    report.pass = true;
    std::mt19937_64 gen(rng::mix(seed));
    std::uniform_int_distribution<int> pick_g(1, 6);
    std::uniform_int_distribution<int> pick_count(1, 8);
    std::uniform_real_distribution<double> pick_score(-1.0, 2.0);
    std::uniform_int_distribution<int> equalize(0, 3);

    double max_dev = 0.0;
    for (int i = 0; i < instances; ++i) {
        DirectionGrouping g;
        g.num_directions = pick_g(gen);
        const bool equal_counts = equalize(gen) == 0;
        const int shared = pick_count(gen);
        for (int j = 0; j < g.num_directions; ++j) {
            g.counts.push_back(equal_counts ? shared : pick_count(gen));
            g.direction_scores.push_back(pick_score(gen));
        }

        const double gap = dora::kl_gap(g);
        if (gap < 0.0)
            report.pass = false;

        const bool all_equal =
            std::all_of(g.counts.begin(), g.counts.end(),
                        [&](int c) { return c == g.counts.front(); });
        if (all_equal && std::abs(gap) > 1e-12)
            report.pass = false;
        if (!all_equal && gap <= 1e-12)
            report.pass = false;

        // Log-utility difference identity: L(dir) - L(sol) = KL(Q || Q_hat).
        const int n = 64;
        const auto b_dir = dora::optimal_direction_allocation(g, n);
        const auto b_sol = dora::induced_direction_allocation(g, n);
        std::vector<double> q(b_dir.size());
        for (std::size_t j = 0; j < q.size(); ++j)
            q[j] = b_dir[j] / n;
        double diff = 0.0;
        for (std::size_t j = 0; j < q.size(); ++j)
            diff += q[j] * (std::log(b_dir[j]) - std::log(b_sol[j]));
        const double dev = std::abs(diff - gap);
        max_dev = std::max(max_dev, dev);
        if (dev > 1e-12)
            report.pass = false;
        ++report.instances;
    }
    report.max_deviation = max_dev;
    return report;
}

VerificationReport verify_theorem1(double tolerance, double similarity_temperature,
                                   double max_cross_cosine, int instances, std::uint64_t seed) {
    VerificationReport report;
    report.claim = "theorem1";
    {
        std::ostringstream os;
        os << "T_s=" << similarity_temperature << " c_max=" << max_cross_cosine
           << " tol=" << tolerance;
        report.parameters = os.str();
    }
    if (!(std::exp((1.0 - max_cross_cosine) / similarity_temperature) >= 1e6))
        throw std::invalid_argument("verify_theorem1: separation parameters too weak");

    report.pass = true;
    std::mt19937_64 gen(rng::mix(seed));
    std::uniform_int_distribution<int> pick_g(1, 5);
    std::uniform_int_distribution<int> pick_count(1, 8);
    std::uniform_real_distribution<double> pick_score(0.0, 1.0);

    double max_dev = 0.0;
    for (int i = 0; i < instances; ++i) {
        const int g = pick_g(gen);
        // Orthogonal centroids satisfy any cross-cosine bound in [0,1).
        const int dim = std::max(2, g);
        DirectionGrouping grouping;
        grouping.num_directions = g;

        CandidateSet set;
        set.budget = 64;
        std::uint64_t id = 0;
        for (int j = 0; j < g; ++j) {
            const int kj = pick_count(gen);
            const double rj = pick_score(gen);
            grouping.counts.push_back(kj);
            grouping.direction_scores.push_back(rj);
            Embedding centroid(dim, 0.0);
            centroid[j % dim] = 1.0;
            for (int c = 0; c < kj; ++c) {
                Trajectory t;
                t.id = id++;
                t.score = rj;
                t.embedding = centroid;
                grouping.membership.push_back(j);
                set.candidates.push_back(std::move(t));
            }
        }

        // Eq. 9 is a temperature-1 softmax, so pair it with T_b = 1.
        const auto w = dora::dora_weights(set, 1.0, similarity_temperature);
        const auto target = dora::optimal_direction_allocation(grouping, set.budget);
        std::vector<double> sums(g, 0.0);
        for (std::size_t c = 0; c < w.size(); ++c)
            sums[grouping.membership[c]] += w[c] * set.budget;
        for (int j = 0; j < g; ++j) {
            const double dev = std::abs(sums[j] - target[j]);
            max_dev = std::max(max_dev, dev);
            if (dev > tolerance)
                report.pass = false;
        }
        ++report.instances;
    }
    report.max_deviation = max_dev;
    return report;
}

VerificationReport verify_greedy_oracle(int instances, std::uint64_t seed) {
    VerificationReport report;
    report.claim = "greedy_oracle";
    report.parameters = "k<=4 n<=12 kappa in {0.1,1,10} tol=1e-9";
    report.pass = true;
    std::mt19937_64 gen(rng::mix(seed));
    std::uniform_int_distribution<int> pick_k(1, 4);
    std::uniform_int_distribution<int> pick_n(0, 12);
    std::uniform_int_distribution<int> pick_kappa(0, 2);
    const double kappas[] = {0.1, 1.0, 10.0};

    double max_dev = 0.0;
    for (int i = 0; i < instances; ++i) {
        const auto w = random_weights(pick_k(gen), gen);
        const auto priors = make_priors(w, kappas[pick_kappa(gen)]);
        const int n = pick_n(gen);
        const double greedy = bayes::joint_failure(priors, bayes::optimal_allocate(priors, n));
        const double oracle =
            bayes::joint_failure(priors, bayes::brute_force_allocate(priors, n));
        const double dev = std::abs(greedy - oracle);
        max_dev = std::max(max_dev, dev);
        if (dev > 1e-9)
            report.pass = false;
        ++report.instances;
    }
    report.max_deviation = max_dev;
    return report;
}

VerificationReport verify_beta_monte_carlo(int instances, std::uint64_t seed) {
    VerificationReport report;
    report.claim = "beta_mc";
    report.parameters = "samples=1e6 bound=3se";
    report.pass = true;
    std::mt19937_64 gen(rng::mix(seed));
    std::uniform_real_distribution<double> pick_w(0.1, 0.9);
    std::uniform_real_distribution<double> pick_kappa(0.2, 10.0);
    std::uniform_int_distribution<int> pick_b(0, 10);
    constexpr int samples = 1'000'000;

    double max_dev = 0.0;
    for (int i = 0; i < instances; ++i) {
        const double w = pick_w(gen);
        const double kappa = pick_kappa(gen);
        const int b = pick_b(gen);
        const bayes::BetaPrior prior(w, kappa);
        const double exact = bayes::failure_expectation(prior, b);

        // Beta(a, c) draw via two gammas.
        std::gamma_distribution<double> ga(kappa * w, 1.0);
        std::gamma_distribution<double> gc(kappa * (1.0 - w), 1.0);
        double sum = 0.0, sumsq = 0.0;
        for (int s = 0; s < samples; ++s) {
            const double x = ga(gen);
            const double y = gc(gen);
            const double p = x / (x + y);
            const double v = std::pow(1.0 - p, b);
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / samples;
        const double var = std::max(0.0, sumsq / samples - mean * mean);
        const double se = std::sqrt(var / samples);
        const double dev = std::abs(mean - exact);
        max_dev = std::max(max_dev, se > 0 ? dev / se : dev);
        if (dev > 3.0 * se + 1e-12)
            report.pass = false;
        ++report.instances;
    }
    report.max_deviation = max_dev;
    return report;
}

ComparisonTable compare_strategies(const simenv::EnvSpec& env_spec,
                                   const std::vector<alloc::StrategySpec>& strategies,
                                   int trials, const std::vector<int>& budgets,
                                   const engine::SearchConfig& base_config) {
    ComparisonTable table;
    for (const auto& strategy : strategies) {
        for (int budget : budgets) {
            engine::SearchConfig config = base_config;
            config.strategy = strategy;
            config.budget = budget;
            // Paired design: the factory keys the instance off the trial
            // seed alone, so every strategy sees identical environments.
            auto factory = [&env_spec](std::uint64_t trial_seed) {
                return simenv::generate_instance(env_spec, trial_seed);
            };
            StrategyCell cell;
            cell.strategy = alloc::strategy_name(strategy.kind);
            cell.budget = budget;
            cell.report = engine::run_trials(config, factory, trials);
            table.cells.push_back(std::move(cell));
        }
    }
    return table;
}

} // namespace tts::analysis
