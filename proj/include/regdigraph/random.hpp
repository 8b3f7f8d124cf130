#ifndef REGDIGRAPH_RANDOM_HPP
#define REGDIGRAPH_RANDOM_HPP

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include "core.hpp"

namespace regdigraph {

/// The project-wide generator. Seeded explicitly everywhere; never from
/// std::random_device.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Per-trial stream. The recorded trial seed is baseSeed ^ trialIndex; the
/// generator state is derived from it through splitmix64 so adjacent trial
/// seeds do not give correlated Mersenne Twister states.
inline std::uint64_t trial_seed(std::uint64_t base, std::uint64_t trial) { return base ^ trial; }
inline Rng make_rng(std::uint64_t seed) { return Rng(splitmix64(seed)); }

inline std::size_t uniform_index(Rng& rng, std::size_t bound) {
    return std::uniform_int_distribution<std::size_t>(0, bound - 1)(rng);
}

/// First k entries of a partial Fisher-Yates shuffle of [0, n): a uniform
/// k-subset in uniform random order.
inline IndexSet random_subset(Rng& rng, std::size_t n, std::size_t k) {
    IndexSet pool(n);
    std::iota(pool.begin(), pool.end(), Index{0});
    for (std::size_t i = 0; i < k; ++i) {
        auto j = i + uniform_index(rng, n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

inline IndexSet random_permutation(Rng& rng, std::size_t n) { return random_subset(rng, n, n); }

} // namespace regdigraph

#endif
