#include "tts/simenv.hpp"

#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>
#include <numeric>

using namespace tts;
using namespace tts::simenv;

namespace {

EnvSpec base_spec() {
    EnvSpec spec;
    spec.num_directions = 2;
    spec.direction_success = {0.7, 0.2};
    spec.initial_direction_weights = {0.5, 0.5};
    spec.stay_probability = 0.8;
    spec.completion_probability = 0.3;
    spec.max_depth = 10;
    spec.score_noise = 0.0;
    spec.embedding_dim = 4;
    spec.max_cross_cosine = 0.0;
    spec.embedding_noise = 0.0;
    return spec;
}

} // namespace

TEST_CASE("spec validation") {
    auto spec = base_spec();
    spec.direction_success = {0.5};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = base_spec();
    spec.initial_direction_weights = {0.7, 0.7};
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);

    spec = base_spec();
    spec.completion_probability = 0.0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("orthogonal centroids when c_max is zero") {
    auto spec = base_spec();
    spec.embedding_dim = 2;
    Environment env(spec, 42);
    const auto& c = env.centroids();
    REQUIRE(c.size() == 2);
    double dot = 0.0;
    for (int i = 0; i < 2; ++i)
        dot += c[0][i] * c[1][i];
    CHECK(std::abs(dot) <= 1e-9);
}

TEST_CASE("centroid separation respects c_max") {
    auto spec = base_spec();
    spec.num_directions = 4;
    spec.direction_success = {0.8, 0.3, 0.3, 0.2};
    spec.initial_direction_weights = {0.25, 0.25, 0.25, 0.25};
    spec.embedding_dim = 16;
    spec.max_cross_cosine = 0.2;
    Environment env(spec, 7);
    const auto& c = env.centroids();
    for (std::size_t i = 0; i < c.size(); ++i)
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            double dot = 0.0;
            for (int t = 0; t < spec.embedding_dim; ++t)
                dot += c[i][t] * c[j][t];
            CHECK(dot <= spec.max_cross_cosine + 1e-12);
        }
}

TEST_CASE("infeasible separation is a configuration error") {
    auto spec = base_spec();
    spec.num_directions = 5;
    spec.direction_success = {0.5, 0.5, 0.5, 0.5, 0.5};
    spec.initial_direction_weights = {0.2, 0.2, 0.2, 0.2, 0.2};
    spec.embedding_dim = 2;
    spec.max_cross_cosine = 0.0;
    CHECK_THROWS_AS(Environment(spec, 1), std::invalid_argument);
}

TEST_CASE("instance generation is deterministic") {
    auto spec = base_spec();
    spec.score_noise = 0.1;
    spec.embedding_noise = 0.1;
    Environment a(spec, 99);
    Environment b(spec, 99);
    CHECK(a.centroids() == b.centroids());
    for (std::uint64_t id = 0; id < 20; ++id) {
        auto ra = a.make_root(id);
        auto rb = b.make_root(id);
        CHECK(ra.direction_id == rb.direction_id);
        auto ca = a.step(ra, 100 + id);
        auto cb = b.step(rb, 100 + id);
        CHECK(ca.direction_id == cb.direction_id);
        CHECK(ca.complete == cb.complete);
        CHECK(ca.answer == cb.answer);
        CHECK(a.score(ca) == b.score(ca));
        CHECK(a.embed(ca) == b.embed(ca));
    }
}

TEST_CASE("score and embed are frozen per node") {
    auto spec = base_spec();
    spec.score_noise = 0.2;
    spec.embedding_noise = 0.1;
    Environment env(spec, 3);
    auto root = env.make_root(0);
    auto child = env.step(root, 1);
    CHECK(env.score(child) == env.score(child));
    CHECK(env.embed(child) == env.embed(child));
}

TEST_CASE("stay probability one keeps the lineage direction") {
    auto spec = base_spec();
    spec.stay_probability = 1.0;
    Environment env(spec, 11);
    auto t = env.make_root(0);
    const int direction = *t.direction_id;
    std::uint64_t id = 1;
    while (!t.complete)
        t = env.step(t, id++);
    CHECK(*t.direction_id == direction);
}

TEST_CASE("stay probability zero with two directions always flips") {
    auto spec = base_spec();
    spec.stay_probability = 0.0;
    Environment env(spec, 19);
    auto t = env.make_root(0);
    for (std::uint64_t id = 1; id <= 30 && !t.complete; ++id) {
        const int before = *t.direction_id;
        t = env.step(t, id);
        CHECK(*t.direction_id == 1 - before);
    }
}

TEST_CASE("completion probability one finishes at step one") {
    auto spec = base_spec();
    spec.completion_probability = 1.0;
    Environment env(spec, 23);
    for (std::uint64_t id = 0; id < 10; ++id) {
        auto child = env.step(env.make_root(id), 1000 + id);
        CHECK(child.complete);
        CHECK(child.answer.has_value());
        CHECK(child.step_count == 1);
    }
}

TEST_CASE("max depth forces completion") {
    auto spec = base_spec();
    spec.completion_probability = 1e-9;
    spec.max_depth = 3;
    Environment env(spec, 29);
    auto t = env.make_root(0);
    std::uint64_t id = 1;
    while (!t.complete)
        t = env.step(t, id++);
    CHECK(t.step_count == 3);
    CHECK_THROWS_AS(env.step(t, id), std::invalid_argument);
}

TEST_CASE("noiseless score equals the direction success rate") {
    Environment env(base_spec(), 31);
    auto root = env.make_root(0);
    auto child = env.step(root, 1);
    CHECK(env.score(child) ==
          doctest::Approx(env.spec().direction_success[*child.direction_id]));
}

TEST_CASE("noiseless embedding equals the centroid") {
    Environment env(base_spec(), 37);
    auto child = env.step(env.make_root(0), 1);
    CHECK(env.embed(child) == env.centroids()[*child.direction_id]);
}

TEST_CASE("p=1 single direction always emits gold") {
    auto spec = base_spec();
    spec.num_directions = 1;
    spec.direction_success = {1.0};
    spec.initial_direction_weights = {1.0};
    spec.completion_probability = 1.0;
    Environment env(spec, 41);
    for (std::uint64_t id = 0; id < 50; ++id) {
        auto child = env.step(env.make_root(id), 1000 + id);
        CHECK(*child.answer == env.gold_answer());
    }
}

TEST_CASE("noisy score mean matches the clamped-normal expectation") {
    auto spec = base_spec();
    spec.num_directions = 1;
    spec.direction_success = {0.7};
    spec.initial_direction_weights = {1.0};
    spec.score_noise = 0.1;
    Environment env(spec, 43);

    constexpr int samples = 10000;
    double sum = 0.0, sumsq = 0.0;
    for (std::uint64_t id = 0; id < samples; ++id) {
        Trajectory t;
        t.id = id;
        t.direction_id = 0;
        const double s = env.score(t);
        CHECK(s >= 0.0);
        CHECK(s <= 1.0);
        sum += s;
        sumsq += s * s;
    }
    const double mean = sum / samples;
    const double se =
        std::sqrt(std::max(0.0, sumsq / samples - mean * mean) / samples);

    // E[clamp(mu + sigma Z, 0, 1)] by quadrature over the normal density.
    const double mu = 0.7, sigma = 0.1;
    double expected = 0.0;
    const int grid = 20000;
    const double lo = mu - 8 * sigma, hi = mu + 8 * sigma;
    const double h = (hi - lo) / grid;
    for (int i = 0; i <= grid; ++i) {
        const double x = lo + i * h;
        const double pdf = std::exp(-0.5 * (x - mu) * (x - mu) / (sigma * sigma)) /
                           (sigma * std::sqrt(2.0 * M_PI));
        const double weight = (i == 0 || i == grid) ? 0.5 : 1.0;
        expected += weight * std::clamp(x, 0.0, 1.0) * pdf * h;
    }
    CHECK(std::abs(mean - expected) <= 3.0 * se);
}
