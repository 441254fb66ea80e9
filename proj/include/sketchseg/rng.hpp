#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <utility>

namespace sseg {

// splitmix64 finalizer; bijective mix of 64-bit state.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic random stream with value semantics. Streams are copied,
// never shared, so concurrent users cannot interleave draws. The generator
// is fixed (splitmix64 + Box-Muller) rather than <random> because
// std::normal_distribution output is implementation-defined.
struct RngStream {
    std::uint64_t state = 0;

    std::uint64_t next_u64() {
        state += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0,1) with 53-bit resolution
    double next_unit() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // one Box-Muller transform: two independent N(0,1) draws
    std::pair<double, double> gaussian_pair() {
        double u1 = next_unit();
        double u2 = next_unit();
        if (u1 <= 0.0) u1 = 0x1.0p-53;  // log(0) guard
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }
};

// Derives an independent stream from a base seed and a path of indices
// (for example block index then variant index). Same inputs always give
// the same stream; distinct paths decorrelate via the bijective mix.
inline RngStream derive_stream(std::uint64_t seed,
                               std::initializer_list<std::uint64_t> path) {
    std::uint64_t s = mix64(seed);
    std::uint64_t level = 1;
    for (std::uint64_t p : path) {
        s = mix64(s ^ mix64(p + (level++ << 32)));
    }
    return RngStream{s};
}

}  // namespace sseg
