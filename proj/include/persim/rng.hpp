#pragma once

#include <cstdint>
#include <initializer_list>

namespace persim::rng {

// Counter-based generator: the value at position `counter` of a stream keyed
// by `key` is the splitmix64 output for state key + GAMMA*counter.  Random
// access by counter means parallel workers can draw the noise for any
// (time step, site) pair without sharing generator state, and the result is
// independent of the execution order.
inline constexpr char kAlgorithmId[] = "splitmix64-ctr";

inline constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

constexpr std::uint64_t at(std::uint64_t key, std::uint64_t counter) {
    return mix64(key + kGamma * (counter + 1));
}

// Uniform double in [0, 1) from the top 53 bits.
constexpr double uniform(std::uint64_t key, std::uint64_t counter) {
    return static_cast<double>(at(key, counter) >> 11) * 0x1.0p-53;
}

// Deterministic sub-key derivation; used to split the master seed into
// per-sample disorder / initial-state / thermal streams.
constexpr std::uint64_t derive(std::uint64_t key,
                               std::initializer_list<std::uint64_t> words) {
    std::uint64_t k = mix64(key + kGamma);
    for (std::uint64_t w : words)
        k = mix64((k + kGamma) ^ mix64(w + kGamma));
    return k;
}

// Sequential view over a counter-based stream, for the single-threaded
// random-sequential schedule.
struct Stream {
    std::uint64_t key = 0;
    std::uint64_t counter = 0;

    std::uint64_t next_u64() { return at(key, counter++); }
    double next_uniform() { return uniform(key, counter++); }
};

}  // namespace persim::rng
