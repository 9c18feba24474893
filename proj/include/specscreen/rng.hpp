#pragma once

#include <cstdint>
#include <random>

namespace specscreen {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer; used to derive independent engine seeds.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Engine for substream `stream` of `seed`. Every Monte-Carlo trial, series
/// or work unit draws from its own substream, so results do not depend on
/// how work is scheduled across threads.
inline Engine substream(std::uint64_t seed, std::uint64_t stream) {
    const std::uint64_t a = mix64(seed);
    const std::uint64_t b = mix64(a ^ mix64(stream + 0x632be59bd9b4e019ULL));
    std::seed_seq seq{static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(a >> 32),
                      static_cast<std::uint32_t>(b), static_cast<std::uint32_t>(b >> 32)};
    return Engine(seq);
}

/// Two-level key, e.g. (experiment cell, trial).
inline Engine substream(std::uint64_t seed, std::uint64_t outer, std::uint64_t inner) {
    return substream(mix64(seed) ^ mix64(outer * 0x9e3779b97f4a7c15ULL + 1), inner);
}

}  // namespace specscreen
