#pragma once

#include <cstdint>
#include <vector>

namespace utilrisk {

/// Deterministic 64-bit generator (splitmix64). Used everywhere instead of
/// std::mt19937 so that streams are reproducible across platforms and
/// standard-library versions.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Independent substream: hash the (seed, tag) pair into a fresh state.
    static Rng stream(std::uint64_t seed, std::uint64_t tag) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (tag + 1)));
        mix.next_u64();
        return mix;
    }

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1): 53-bit mantissa, never exactly 0 or 1.
    double uniform() {
        const std::uint64_t bits = next_u64() >> 11; // 53 bits
        return (static_cast<double>(bits) + 0.5) * (1.0 / 9007199254740992.0);
    }

    /// Uniform on (lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

} // namespace utilrisk
