#include "tts/simenv.hpp"

#include "tts/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace tts::simenv {

void EnvSpec::validate() const {
    if (num_directions < 1)
        throw std::invalid_argument("EnvSpec: need at least one direction");
    const auto g = static_cast<std::size_t>(num_directions);
    if (direction_success.size() != g || initial_direction_weights.size() != g)
        throw std::invalid_argument("EnvSpec: per-direction vectors must have length g");
    for (double p : direction_success)
        if (!(p >= 0.0 && p <= 1.0))
            throw std::invalid_argument("EnvSpec: direction success out of [0,1]");
    double wsum = 0.0;
    for (double w : initial_direction_weights) {
        if (w < 0.0)
            throw std::invalid_argument("EnvSpec: negative initial direction weight");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > 1e-9)
        throw std::invalid_argument("EnvSpec: initial direction weights must sum to 1");
    if (!(stay_probability >= 0.0 && stay_probability <= 1.0))
        throw std::invalid_argument("EnvSpec: stay probability out of [0,1]");
    if (!(completion_probability > 0.0 && completion_probability <= 1.0))
        throw std::invalid_argument("EnvSpec: completion probability out of (0,1]");
    if (max_depth < 1)
        throw std::invalid_argument("EnvSpec: max depth must be >= 1");
    if (score_noise < 0.0 || embedding_noise < 0.0)
        throw std::invalid_argument("EnvSpec: negative noise level");
    if (embedding_dim < 2)
        throw std::invalid_argument("EnvSpec: embedding dim must be >= 2");
    if (!(max_cross_cosine >= 0.0 && max_cross_cosine < 1.0))
        throw std::invalid_argument("EnvSpec: max cross cosine out of [0,1)");
}

EnvSpec imbalanced_benchmark() {
    EnvSpec spec;
    spec.num_directions = 4;
    spec.direction_success = {0.8, 0.3, 0.3, 0.2};
    spec.initial_direction_weights = {0.1, 0.3, 0.3, 0.3};
    spec.stay_probability = 0.95;
    spec.completion_probability = 0.25;
    spec.max_depth = 12;
    spec.score_noise = 0.15;
    spec.embedding_dim = 16;
    spec.max_cross_cosine = 0.2;
    spec.embedding_noise = 0.05;
    return spec;
}

namespace {

void normalize(Embedding& v) {
    double s = 0.0;
    for (double x : v)
        s += x * x;
    s = std::sqrt(s);
    for (double& x : v)
        x /= s;
}

Embedding random_unit(int dim, std::mt19937_64& gen) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Embedding v(dim);
    for (double& x : v)
        x = gauss(gen);
    normalize(v);
    return v;
}

double dot(const Embedding& a, const Embedding& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        s += a[i] * b[i];
    return s;
}

// Orthonormal set via Gram-Schmidt on random Gaussian draws; needs d >= g.
std::vector<Embedding> orthonormal_centroids(int g, int dim, std::mt19937_64& gen) {
    std::vector<Embedding> out;
    while (static_cast<int>(out.size()) < g) {
        Embedding v = random_unit(dim, gen);
        for (const auto& u : out) {
            const double c = dot(v, u);
            for (std::size_t i = 0; i < v.size(); ++i)
                v[i] -= c * u[i];
        }
        double s = 0.0;
        for (double x : v)
            s += x * x;
        if (s < 1e-12)
            continue;
        normalize(v);
        out.push_back(std::move(v));
    }
    return out;
}

std::vector<Embedding> build_centroids(const EnvSpec& spec, std::uint64_t seed) {
    const int g = spec.num_directions;
    auto gen = rng::engine_for(seed, rng::Purpose::Instance);
    if (spec.max_cross_cosine > 0.0) {
        // Rejection sampling; each accepted centroid must clear every
        // earlier one.
        std::vector<Embedding> out;
        int attempts = 0;
        while (static_cast<int>(out.size()) < g && attempts < 20000) {
            Embedding v = random_unit(spec.embedding_dim, gen);
            bool ok = true;
            for (const auto& u : out)
                if (dot(v, u) > spec.max_cross_cosine) {
                    ok = false;
                    break;
                }
            if (ok)
                out.push_back(std::move(v));
            ++attempts;
        }
        if (static_cast<int>(out.size()) == g)
            return out;
    }
    if (spec.embedding_dim < g)
        throw std::invalid_argument(
            "EnvSpec: embedding dim too small for the requested centroid separation");
    return orthonormal_centroids(g, spec.embedding_dim, gen);
}

} // namespace

Environment::Environment(EnvSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), seed_(seed) {
    spec_.validate();
    centroids_ = build_centroids(spec_, seed_);
}

int Environment::sample_child_direction(int parent_direction, std::mt19937_64& gen) const {
    const int g = spec_.num_directions;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    if (g == 1 || unit(gen) < spec_.stay_probability)
        return parent_direction;
    std::uniform_int_distribution<int> other(0, g - 2);
    int d = other(gen);
    if (d >= parent_direction)
        ++d;
    return d;
}

Trajectory Environment::make_root(std::uint64_t id) {
    auto gen = rng::engine_for(rng::derive(seed_, id), rng::Purpose::Root);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double u = unit(gen);
    double acc = 0.0;
    int direction = spec_.num_directions - 1;
    for (int j = 0; j < spec_.num_directions; ++j) {
        acc += spec_.initial_direction_weights[j];
        if (u < acc) {
            direction = j;
            break;
        }
    }
    Trajectory root;
    root.id = id;
    root.direction_id = direction;
    return root;
}

Trajectory Environment::step(const Trajectory& parent, std::uint64_t child_id) {
    if (parent.complete)
        throw std::invalid_argument("Environment::step: trajectory already complete");
    if (parent.step_count >= spec_.max_depth)
        throw std::invalid_argument("Environment::step: trajectory at max depth");
    if (!parent.direction_id)
        throw std::invalid_argument("Environment::step: trajectory without a direction");

    auto gen = rng::engine_for(rng::derive(seed_, child_id), rng::Purpose::Step);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    Trajectory child;
    child.id = child_id;
    child.parent_id = parent.id;
    child.step_count = parent.step_count + 1;
    child.direction_id = sample_child_direction(*parent.direction_id, gen);

    const bool done =
        child.step_count >= spec_.max_depth || unit(gen) < spec_.completion_probability;
    if (done) {
        child.complete = true;
        const int j = *child.direction_id;
        auto agen = rng::engine_for(rng::derive(seed_, child_id), rng::Purpose::Answer);
        const bool correct = unit(agen) < spec_.direction_success[j];
        child.answer = correct ? gold_answer() : distractor(j);
    }
    return child;
}

double Environment::score(const Trajectory& trajectory) const {
    if (!trajectory.direction_id)
        throw std::invalid_argument("Environment::score: trajectory without a direction");
    const double base = spec_.direction_success[*trajectory.direction_id];
    if (spec_.score_noise == 0.0)
        return base;
    auto gen = rng::engine_for(rng::derive(seed_, trajectory.id), rng::Purpose::Score);
    std::normal_distribution<double> gauss(0.0, spec_.score_noise);
    return std::clamp(base + gauss(gen), 0.0, 1.0);
}

Embedding Environment::embed(const Trajectory& trajectory) const {
    if (!trajectory.direction_id)
        throw std::invalid_argument("Environment::embed: trajectory without a direction");
    Embedding e = centroids_[*trajectory.direction_id];
    if (spec_.embedding_noise > 0.0) {
        auto gen = rng::engine_for(rng::derive(seed_, trajectory.id), rng::Purpose::Embed);
        std::normal_distribution<double> gauss(0.0, spec_.embedding_noise);
        for (double& x : e)
            x += gauss(gen);
    }
    normalize(e);
    return e;
}

engine::TrialEnvironment generate_instance(const EnvSpec& spec, std::uint64_t seed) {
    auto env = std::make_unique<Environment>(spec, seed);
    const Token gold = env->gold_answer();
    return engine::TrialEnvironment{std::move(env), gold};
}

} // namespace tts::simenv
