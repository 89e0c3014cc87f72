#include "tts/bayes.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

using namespace tts;
using namespace tts::bayes;

TEST_CASE("failure expectation trivial values") {
    CHECK(failure_expectation(BetaPrior(0.5, 2.0), 1) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(failure_expectation(BetaPrior(0.5, 2.0), 2) ==
          doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(failure_expectation(BetaPrior(0.7, 5.0), 0) == doctest::Approx(1.0));
}

TEST_CASE("failure expectation is strictly decreasing in B") {
    const BetaPrior prior(0.3, 0.7);
    double prev = failure_expectation(prior, 0);
    for (int b = 1; b <= 50; ++b) {
        const double cur = failure_expectation(prior, b);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("failure expectation against a Monte-Carlo oracle") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> pick_w(0.1, 0.9);
    std::uniform_real_distribution<double> pick_kappa(0.3, 8.0);
    std::uniform_int_distribution<int> pick_b(1, 10);
    constexpr int samples = 200'000;
    for (int trial = 0; trial < 10; ++trial) {
        const double w = pick_w(gen);
        const double kappa = pick_kappa(gen);
        const int b = pick_b(gen);
        const double exact = failure_expectation(BetaPrior(w, kappa), b);

        std::gamma_distribution<double> ga(kappa * w, 1.0);
        std::gamma_distribution<double> gc(kappa * (1.0 - w), 1.0);
        double sum = 0.0, sumsq = 0.0;
        for (int s = 0; s < samples; ++s) {
            const double x = ga(gen);
            const double p = x / (x + gc(gen));
            const double v = std::pow(1.0 - p, b);
            sum += v;
            sumsq += v * v;
        }
        const double mean = sum / samples;
        const double se =
            std::sqrt(std::max(0.0, sumsq / samples - mean * mean) / samples);
        CHECK(std::abs(mean - exact) < 3.0 * se + 1e-12);
    }
}

TEST_CASE("joint failure basics") {
    std::vector<BetaPrior> priors{BetaPrior(0.5, 2.0), BetaPrior(0.5, 2.0)};
    CHECK(joint_failure(priors, {0, 0}) == doctest::Approx(1.0));
    CHECK(joint_failure(priors, {1, 1}) == doctest::Approx(0.25).epsilon(1e-12));
    std::vector<BetaPrior> single{BetaPrior(0.5, 2.0)};
    CHECK(joint_failure(single, {2}) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK_THROWS_AS(joint_failure(priors, {1}), std::invalid_argument);
}

TEST_CASE("joint failure non-increasing when any count grows") {
    std::vector<BetaPrior> priors{BetaPrior(0.4, 1.5), BetaPrior(0.2, 0.5),
                                  BetaPrior(0.7, 3.0)};
    AllocationVector base{2, 1, 3};
    const double v = joint_failure(priors, base);
    for (std::size_t i = 0; i < base.size(); ++i) {
        AllocationVector more = base;
        ++more[i];
        CHECK(joint_failure(priors, more) <= v);
    }
}

TEST_CASE("marginal log gain hand values and cross-check") {
    const BetaPrior prior(0.6, 1.0);
    CHECK(marginal_log_gain(prior, 0) == doctest::Approx(-std::log(0.4)).epsilon(1e-12));
    CHECK(marginal_log_gain(prior, 1) == doctest::Approx(-std::log(0.7)).epsilon(1e-12));

    // Ratio of consecutive joint failures equals exp(-gain).
    std::vector<BetaPrior> one{prior};
    const double ratio = joint_failure(one, {1}) / joint_failure(one, {0});
    CHECK(ratio == doctest::Approx(std::exp(-marginal_log_gain(prior, 0))).epsilon(1e-12));
}

TEST_CASE("marginal log gain is strictly decreasing") {
    const BetaPrior prior(0.35, 2.3);
    for (int b = 0; b < 20; ++b)
        CHECK(marginal_log_gain(prior, b + 1) < marginal_log_gain(prior, b));
}

TEST_CASE("optimal allocation hand case w=[0.6,0.4] kappa=1 N=3") {
    std::vector<BetaPrior> priors{BetaPrior(0.6, 1.0), BetaPrior(0.4, 1.0)};
    CHECK(optimal_allocate(priors, 3) == AllocationVector{2, 1});
    CHECK(brute_force_allocate(priors, 3) == AllocationVector{2, 1});
}

TEST_CASE("optimal allocation limit regimes") {
    std::vector<BetaPrior> sharp{BetaPrior(0.6, 1e9), BetaPrior(0.4, 1e9)};
    CHECK(optimal_allocate(sharp, 3) == AllocationVector{3, 0});

    std::vector<BetaPrior> diffuse{BetaPrior(0.5, 1e-9), BetaPrior(0.3, 1e-9),
                                   BetaPrior(0.2, 1e-9)};
    CHECK(optimal_allocate(diffuse, 2) == AllocationVector{1, 1, 0});
}

TEST_CASE("brute force edge cases") {
    std::vector<BetaPrior> priors{BetaPrior(0.3, 1.0), BetaPrior(0.6, 2.0)};
    CHECK(brute_force_allocate(priors, 0) == AllocationVector{0, 0});
    std::vector<BetaPrior> single{BetaPrior(0.3, 1.0)};
    CHECK(brute_force_allocate(single, 5) == AllocationVector{5});
    CHECK_THROWS_AS(brute_force_allocate(priors, 17), std::invalid_argument);
}

TEST_CASE("greedy matches brute force on random instances") {
    std::mt19937_64 gen(5);
    std::uniform_int_distribution<int> pick_k(1, 4);
    std::uniform_int_distribution<int> pick_n(0, 12);
    std::uniform_real_distribution<double> unit(0.05, 1.0);
    const double kappas[] = {0.1, 1.0, 10.0};
    std::uniform_int_distribution<int> pick_kappa(0, 2);
    for (int trial = 0; trial < 200; ++trial) {
        const int k = pick_k(gen);
        std::vector<double> w(k);
        double z = 0.0;
        for (double& x : w) {
            x = unit(gen);
            z += x;
        }
        std::vector<BetaPrior> priors;
        for (double x : w)  // z + 0.1 keeps the k = 1 weight inside (0,1)
            priors.emplace_back(x / (z + 0.1), kappas[pick_kappa(gen)]);
        const int n = pick_n(gen);
        const double greedy = joint_failure(priors, optimal_allocate(priors, n));
        const double oracle = joint_failure(priors, brute_force_allocate(priors, n));
        CHECK(std::abs(greedy - oracle) <= 1e-9);
    }
}

TEST_CASE("shifted linear rule") {
    const std::vector<double> even{0.5, 0.5};
    const auto a = shifted_linear_allocation(even, 2.0, 10);
    CHECK(a[0] == doctest::Approx(5.0));
    CHECK(a[1] == doctest::Approx(5.0));

    const std::vector<double> skew{0.7, 0.3};
    const auto b = shifted_linear_allocation(skew, 1.0, 100);
    CHECK(b[0] == doctest::Approx(70.4).epsilon(1e-12));
    CHECK(b[1] == doctest::Approx(29.6).epsilon(1e-12));
    CHECK(std::accumulate(b.begin(), b.end(), 0.0) == doctest::Approx(100.0).epsilon(1e-12));
}

TEST_CASE("beta prior rejects degenerate parameters") {
    CHECK_THROWS_AS(BetaPrior(0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BetaPrior(1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(BetaPrior(0.5, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((BetaPrior(0.5, std::numeric_limits<double>::infinity())),
                    std::invalid_argument);
}
