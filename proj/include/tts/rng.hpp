#pragma once

#include <cstdint>
#include <random>

namespace tts::rng {

// splitmix64 finalizer; full-period mixer used for counter-based stream keys.
inline std::uint64_t mix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d4a885398931ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t combine(std::uint64_t a, std::uint64_t b) {
    return mix(a ^ mix(b));
}

// Derives an independent substream key from (parent key, counter).
// Keys form a tree: derive(derive(master, trial), node) is order-independent.
inline std::uint64_t derive(std::uint64_t key, std::uint64_t counter) {
    return combine(key, counter);
}

// Engine-wide convention for purpose tags inside one node's stream.
enum class Purpose : std::uint64_t {
    Step = 1,
    Score = 2,
    Embed = 3,
    Answer = 4,
    Instance = 5,
    Root = 6,
};

inline std::mt19937_64 engine_for(std::uint64_t key, Purpose purpose) {
    return std::mt19937_64(derive(key, static_cast<std::uint64_t>(purpose)));
}

} // namespace tts::rng
