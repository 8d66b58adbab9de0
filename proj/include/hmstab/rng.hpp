#pragma once

#include "hmstab/rational.hpp"

#include <cstdint>

namespace hmstab {

// Deterministic splitmix64 stream. Never use std::uniform_int_distribution
// here: outputs must be byte-identical across platforms and runs.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Substream for trial `index` of a master seed; independent trials hash
    /// (seed, index) so parallel evaluation order cannot matter.
    static Rng for_trial(std::uint64_t seed, std::uint64_t index) {
        Rng mix(seed ^ (0x9e3779b97f4a7c15ULL * (index + 1)));
        mix.next();
        mix.next();
        return mix;
    }

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [lo, hi], inclusive.
    long range(long lo, long hi) {
        if (hi < lo) throw Error("rng range is empty");
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<long>(next() % span);
    }

    bool flip() { return (next() & 1) != 0; }

    /// Nonzero rational with |num| <= maxNum, 1 <= den <= maxDen.
    Rational nonzero_rational(long maxNum, long maxDen) {
        long num = 0;
        while (num == 0) num = range(-maxNum, maxNum);
        return rat(num, range(1, maxDen));
    }

    /// Positive rational with num <= maxNum, den <= maxDen.
    Rational positive_rational(long maxNum, long maxDen) {
        return rat(range(1, maxNum), range(1, maxDen));
    }

  private:
    std::uint64_t state_;
};

}  // namespace hmstab
