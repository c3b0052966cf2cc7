// Copyright 2026 The timesym Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>

namespace timesym::stats {

/// SplitMix64 output finalizer (Steele, Lea & Flood).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Advances a SplitMix64 state by the golden-ratio increment and returns the
/// mixed output.
constexpr std::uint64_t splitmix64_next(std::uint64_t &state) noexcept {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
}

/**
 * Seedable, splittable pseudo-random stream.
 *
 * The generator core is xoshiro256** (Blackman & Vigna, 2018):
 *
 *     result = rotl(s1 * 5, 7) * 9
 *     t = s1 << 17
 *     s2 ^= s0; s3 ^= s1; s1 ^= s2; s0 ^= s3; s2 ^= t; s3 = rotl(s3, 45)
 *
 * The 256-bit state is filled from a SplitMix64 sequence started at
 *
 *     key = mix64(seed) ^ mix64(stream ^ 0xD6E8FEB86659FD93)
 *
 * so a (seed, stream) pair fully determines the sequence.  Only integer
 * arithmetic is involved up to `uniform()`, which makes draws bit-identical
 * on every platform.  `gaussian()` uses Box-Muller and is as portable as the
 * host's `std::log`, `std::sqrt`, `std::cos` and `std::sin`.
 *
 * Streams are plain values; copy one to fork an identical sequence, call
 * `split(id)` to derive an independent one.
 */
class PrngStream {
  public:
    using result_type = std::uint64_t;

    explicit PrngStream(std::uint64_t seed, std::uint64_t stream = 0) noexcept
        : seed_(seed), stream_(stream) {
        std::uint64_t sm = mix64(seed) ^ mix64(stream ^ 0xD6E8FEB86659FD93ULL);
        for (auto &word : s_) {
            word = splitmix64_next(sm);
        }
    }

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t stream() const noexcept { return stream_; }

    std::uint64_t next_u64() noexcept {
        const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double uniform() noexcept {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Standard normal variate by the Box-Muller transform.  Draws come in
    /// pairs; the second of each pair is cached for the next call.
    double gaussian() noexcept {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

    bool bernoulli(double p) noexcept { return uniform() < p; }

    /// Independent child stream.  The child's seed hashes this stream's
    /// (seed, stream) pair, so nested splits stay distinct.
    PrngStream split(std::uint64_t id) const noexcept {
        return PrngStream(mix64(seed_ + 0x9E3779B97F4A7C15ULL * (stream_ + 1)), id);
    }

    // UniformRandomBitGenerator
    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept {
        return std::numeric_limits<result_type>::max();
    }
    result_type operator()() noexcept { return next_u64(); }

  private:
    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
        return (x << k) | (x >> (64 - k));
    }

    std::array<std::uint64_t, 4> s_{};
    std::uint64_t seed_;
    std::uint64_t stream_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace timesym::stats
