#pragma once

#include <cstdint>

namespace lwmi::detail {

// SplitMix64 finalizer. Used as a counter-based generator: the k-th draw
// of stream s is mix64(s + k * GAMMA), so any draw is addressable without
// sequencing state. Reproducible regardless of thread count.
inline constexpr std::uint64_t SPLITMIX_GAMMA = 0x9e3779b97f4a7c15ULL;

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t stream_draw(std::uint64_t seed, std::uint64_t counter) {
    return mix64(seed + counter * SPLITMIX_GAMMA);
}

// Uniform double in [0, 1) from the top 53 bits.
inline double stream_u01(std::uint64_t seed, std::uint64_t counter) {
    return static_cast<double>(stream_draw(seed, counter) >> 11) * 0x1.0p-53;
}

// Decorrelated child seed (per Boolean assignment, per shard, ...).
inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt) {
    return mix64(seed + (salt + 1) * 0xd1b54a32d192ed03ULL);
}

} // namespace lwmi::detail
