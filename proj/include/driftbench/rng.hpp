#pragma once

#include <cstdint>
#include <random>

namespace driftbench::rng {

// splitmix64 step; used to derive independent child seeds from a base seed
// so that streams indexed by (seed, index) never share state.
inline std::uint64_t mix(std::uint64_t state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    return mix(base ^ mix(index + 1));
}

// Maps one raw 64-bit draw onto [0, n) via multiply-shift, avoiding the
// platform-defined behavior of std::uniform_int_distribution.
inline std::size_t bounded(std::mt19937_64& gen, std::size_t n) {
    return static_cast<std::size_t>((static_cast<unsigned __int128>(gen()) * n) >> 64);
}

}  // namespace driftbench::rng
