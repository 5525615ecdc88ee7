#pragma once

// Seeded counter-based generator for reproducible sampling. The n-th draw of
// a stream is a pure function of (seed, stream, n), so audits can replay any
// sample without replaying the whole run.

#include <cstdint>

namespace cylpack {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed, std::uint64_t stream = 0)
        : state(seed ^ (stream * 0x9e3779b97f4a7c15ULL + 0x7f4a7c15ULL)) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1).
    double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [0, n) without modulo bias for n << 2^64.
    std::uint64_t next_below(std::uint64_t n) {
        return static_cast<std::uint64_t>(next_double() * static_cast<double>(n)) % n;
    }
};

}  // namespace cylpack
