#pragma once

#include <cstdint>
#include <random>

namespace mft {

// SplitMix64 step (public domain, see https://prng.di.unimi.it/splitmix64.c).
// Used only to derive engine seeds, never as the sampling generator itself.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic key for substream `stream` of `seed`. Distinct indices give
// statistically unrelated keys, so work split across replicates, segments or
// calibration draws stays reproducible no matter in which order it runs.
inline std::uint64_t substream_key(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t mixed = splitmix64(s) ^ (stream + 0x9e3779b97f4a7c15ULL);
    return splitmix64(mixed);
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(substream_key(seed, stream));
}

inline std::mt19937_64 substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return std::mt19937_64(substream_key(substream_key(seed, a), b));
}

} // namespace mft
