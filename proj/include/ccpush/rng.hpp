// Copyright (c) 2026 the ccpush authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>

namespace ccpush {

/// splitmix64 step; also used to derive independent substream seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Deterministic seed for a tagged substream (channel, placement, requests, ...).
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t tag) noexcept {
    std::uint64_t state = seed + tag * 0x9E3779B97F4A7C15ULL;
    splitmix64(state);
    return splitmix64(state);
}

/// xoshiro256** with hand-rolled distributions. The standard <random>
/// distributions are not bit-identical across library implementations, so all
/// draws that feed seeded experiments go through this class instead.
class Rng {
public:
    explicit Rng(std::uint64_t seed) noexcept {
        std::uint64_t state = seed;
        for (auto& word : state_) word = splitmix64(state);
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53-bit resolution.
    double uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Unbiased uniform integer in [0, n); n must be nonzero.
    std::uint64_t below(std::uint64_t n) noexcept {
        const std::uint64_t threshold = (0ULL - n) % n;
        for (;;) {
            const std::uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    /// Standard normal via Box-Muller; two draws are produced per transform.
    double normal() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * 3.14159265358979323846 * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

private:
    static std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::uint64_t state_[4]{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ccpush
