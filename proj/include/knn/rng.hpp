#pragma once

#include <cstdint>
#include <random>

namespace knn {

/// splitmix64 step; used to derive independent seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Deterministic seed for a (master, a, b, c) stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                                 std::uint64_t c = 0) {
    std::uint64_t state = master;
    std::uint64_t out = splitmix64(state);
    state ^= a * 0x9e3779b97f4a7c15ULL;
    out ^= splitmix64(state);
    state ^= b * 0xbf58476d1ce4e5b9ULL;
    out ^= splitmix64(state);
    state ^= c * 0x94d049bb133111ebULL;
    out ^= splitmix64(state);
    return out;
}

/// Maps 64 random bits to [0, 1) with 53-bit resolution. Combined with
/// mt19937_64 (whose output sequence the standard pins down) this gives
/// bitwise-reproducible draws on every platform, which the distribution
/// adapters in <random> do not guarantee.
inline double to_unit_interval(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double next_unit(std::mt19937_64& gen) { return to_unit_interval(gen()); }

} // namespace knn
