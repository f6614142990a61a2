// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <cstdint>

namespace restir {

/// PCG32 (O'Neill). One independent stream per (seed, sequence) pair.
struct Pcg32 {
    uint64_t state = 0x853c49e6748fea9bULL;
    uint64_t inc = 0xda3e39cb94b95bdbULL;

    Pcg32() = default;

    Pcg32(uint64_t seed, uint64_t seq = 1) {
        state = 0;
        inc = (seq << 1u) | 1u;
        next_u32();
        state += seed;
        next_u32();
    }

    uint32_t next_u32() {
        uint64_t old = state;
        state = old * 6364136223846793005ULL + inc;
        uint32_t xorshifted = static_cast<uint32_t>(((old >> 18u) ^ old) >> 27u);
        uint32_t rot = static_cast<uint32_t>(old >> 59u);
        return (xorshifted >> rot) | (xorshifted << ((~rot + 1u) & 31));
    }

    /// Uniform double in [0, 1).
    double next_double() { return next_u32() * 0x1p-32; }

    /// Uniform integer in [0, n).
    uint32_t next_below(uint32_t n) { return static_cast<uint32_t>((uint64_t(next_u32()) * n) >> 32); }
};

inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t hash_combine(uint64_t a, uint64_t b) { return splitmix64(a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2))); }

/// Deterministic per-task random stream. Every parallel work item derives its
/// own generator from the run seed and its identifying indices, so results do
/// not depend on scheduling or thread count.
inline Pcg32 make_stream(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0) {
    uint64_t h = splitmix64(seed);
    h = hash_combine(h, a);
    h = hash_combine(h, b);
    h = hash_combine(h, c);
    return Pcg32(h, splitmix64(h));
}

/// Two independent standard normal variates from two uniforms (Box-Muller).
/// Always consumes exactly two draws.
inline void gaussian_pair(Pcg32 &rng, double &g0, double &g1) {
    double u1 = 1.0 - rng.next_double(); // (0, 1]
    double u2 = rng.next_double();
    double r = std::sqrt(-2.0 * std::log(u1));
    g0 = r * std::cos(2.0 * M_PI * u2);
    g1 = r * std::sin(2.0 * M_PI * u2);
}

} // namespace restir
