#pragma once

#include <cstdint>
#include <random>

namespace dilemma {

// splitmix64; used to derive independent substream seeds from a master seed
// so that parallel fan-outs are reproducible regardless of scheduling.
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t master, std::uint64_t index) {
    std::uint64_t s = master ^ (0x9e3779b97f4a7c15ULL * (index + 1));
    splitmix64_next(s);
    return splitmix64_next(s);
}

inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64{seed};
}

// Uniform double in [0, 1) with 53 random bits; avoids the
// implementation-defined behavior of std::uniform_real_distribution.
inline double u01(std::mt19937_64& g) {
    return static_cast<double>(g() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n) by rejection; deterministic across platforms.
inline std::uint64_t uniform_index(std::mt19937_64& g, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t x;
    do {
        x = g();
    } while (x >= limit);
    return x % n;
}

}  // namespace dilemma
