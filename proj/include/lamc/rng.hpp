#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace lamc {

// splitmix64 finalizer. Decorrelates seeds derived from (base, salt) pairs so
// that pipeline stages seeded from the same run seed draw independent streams.
inline std::uint64_t mix_seed(std::uint64_t base, std::uint64_t salt) {
    std::uint64_t z = base + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// In-place Fisher-Yates using the supplied engine.
template <typename T>
void shuffle_indices(std::span<T> v, std::mt19937_64& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::uniform_int_distribution<std::size_t> pick(0, i - 1);
        std::swap(v[i - 1], v[pick(rng)]);
    }
}

} // namespace lamc
