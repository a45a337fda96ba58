// SPDX-License-Identifier: MIT
//
// Deterministic random streams. Shard i of a run derives its own seed as
// a splitmix64 mix of (seed, i), so results depend only on (seed, shards)
// and never on scheduling.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace chaoslab {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

inline std::uint64_t shard_seed(std::uint64_t seed, std::uint64_t shard) {
    return splitmix64(splitmix64(seed) ^ splitmix64(shard + 0x51ull));
}

// mt19937_64 behind hand-rolled variate transforms, so every stream is a
// pure function of its seed.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {
        // 53-bit mantissa in [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01(), u2 = uniform01();
        while (u1 <= 0.0) u1 = uniform01();
        double radius = std::sqrt(-2.0 * std::log(u1));
        double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    double rademacher() { return (eng_() & 1ull) ? 1.0 : -1.0; }

    bool bernoulli(double p) { return uniform01() < p; }

    std::uint64_t raw() { return eng_(); }

  private:
    std::mt19937_64 eng_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace chaoslab
