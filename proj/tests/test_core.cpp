#include "tts/core.hpp"

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

using namespace tts;

TEST_CASE("softmax of symmetric scores is uniform") {
    const std::vector<double> scores{1.0, 1.0};
    const auto w = softmax_weights(scores, 0.1);
    CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("softmax hand case [0, ln 3] at T=1") {
    const std::vector<double> scores{0.0, std::log(3.0)};
    const auto w = softmax_weights(scores, 1.0);
    CHECK(w[0] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(w[1] == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("softmax of a single candidate is 1") {
    const std::vector<double> scores{0.9};
    const auto w = softmax_weights(scores, 0.1);
    CHECK(w[0] == doctest::Approx(1.0));
}

TEST_CASE("softmax rejects bad input") {
    CHECK_THROWS_AS(softmax_weights(std::vector<double>{}, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(softmax_weights(std::vector<double>{1.0}, 0.0), std::invalid_argument);
    const std::vector<double> nan{std::nan("")};
    CHECK_THROWS_AS(softmax_weights(nan, 1.0), std::domain_error);
}

TEST_CASE("softmax survives extreme score gaps") {
    const std::vector<double> scores{5.0, 0.0};
    const auto w = softmax_weights(scores, 0.01);
    CHECK(w[0] == doctest::Approx(1.0));
    CHECK(std::isfinite(w[1]));
}

TEST_CASE("softmax shift invariance") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> pick(-2.0, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> scores(5);
        for (double& s : scores)
            s = pick(gen);
        std::vector<double> shifted = scores;
        const double c = pick(gen);
        for (double& s : shifted)
            s += c;
        const auto a = softmax_weights(scores, 0.3);
        const auto b = softmax_weights(shifted, 0.3);
        for (std::size_t i = 0; i < a.size(); ++i)
            CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
}

TEST_CASE("apportion exact multiples") {
    CHECK(apportion(std::vector<double>{0.25, 0.75}, 4) == AllocationVector{1, 3});
}

TEST_CASE("apportion three-way tie goes to the lowest index") {
    const std::vector<double> w{1.0 / 3, 1.0 / 3, 1.0 / 3};
    CHECK(apportion(w, 4) == AllocationVector{2, 1, 1});
}

TEST_CASE("apportion with zero budget") {
    CHECK(apportion(std::vector<double>{0.5, 0.5}, 0) == AllocationVector{0, 0});
}

TEST_CASE("apportion rejects negative weights") {
    CHECK_THROWS_AS(apportion(std::vector<double>{-0.1, 1.1}, 4), std::invalid_argument);
}

TEST_CASE("apportion exactness and quota property") {
    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_int_distribution<int> pick_n(0, 10000);
    std::uniform_int_distribution<int> pick_k(1, 12);
    for (int trial = 0; trial < 500; ++trial) {
        const int k = pick_k(gen);
        std::vector<double> w(k);
        double z = 0.0;
        for (double& x : w) {
            x = unit(gen);
            z += x;
        }
        for (double& x : w)
            x /= z;
        const int n = pick_n(gen);
        const auto counts = apportion(w, n);
        CHECK(std::accumulate(counts.begin(), counts.end(), 0) == n);
        for (int c : counts)
            CHECK(c >= 0);
        for (int i = 0; i < k; ++i)
            CHECK(std::abs(counts[i] - n * w[i]) < 1.0);
    }
}

TEST_CASE("permutation equivariance with distinct weights") {
    std::mt19937_64 gen(23);
    std::uniform_real_distribution<double> unit(0.01, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> scores(6);
        for (double& s : scores)
            s = unit(gen);
        std::sort(scores.begin(), scores.end());
        // Force distinct values.
        for (std::size_t i = 1; i < scores.size(); ++i)
            scores[i] = std::max(scores[i], scores[i - 1] + 1e-3);

        std::vector<std::size_t> perm(scores.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::shuffle(perm.begin(), perm.end(), gen);
        std::vector<double> permuted(scores.size());
        for (std::size_t i = 0; i < perm.size(); ++i)
            permuted[i] = scores[perm[i]];

        const auto w = softmax_weights(scores, 0.5);
        const auto wp = softmax_weights(permuted, 0.5);
        const auto a = apportion(w, 97);
        const auto ap = apportion(wp, 97);
        for (std::size_t i = 0; i < perm.size(); ++i) {
            CHECK(wp[i] == doctest::Approx(w[perm[i]]).epsilon(1e-12));
            CHECK(ap[i] == a[perm[i]]);
        }
    }
}
