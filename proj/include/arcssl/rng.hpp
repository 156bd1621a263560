// SPDX-License-Identifier: Apache-2.0
//
// arcssl - antenna response consistency SSL for WiFi channel state information
// Copyright (C) 2026 the arcssl authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <cstdint>
#include <initializer_list>

namespace arcssl {

/**
 * Deterministic RNG with fully specified output, independent of the standard
 * library implementation. Based on SplitMix64 (Steele et al., SplittableRandom).
 *
 * Every stochastic choice in the project flows through this generator so that
 * a (seed, stream id) pair replays bit-identically on any platform. Substreams
 * are derived by hashing structured ids (sample index, epoch, purpose tag)
 * into a fresh seed, which makes per-sample generation order-independent.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1), 53 bits of randomness.
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform float in [0, 1).
    float next_float() { return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f; }

    /// Uniform integer in [0, n). Lemire's multiply-shift with rejection.
    std::uint64_t next_below(std::uint64_t n) {
        __uint128_t m = static_cast<__uint128_t>(next_u64()) * n;
        std::uint64_t lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            std::uint64_t threshold = (0ULL - n) % n;
            while (lo < threshold) {
                m = static_cast<__uint128_t>(next_u64()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    /// Uniform double in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    /// Standard normal via Box-Muller; the paired value is cached.
    double normal() {
        if (have_cached_) {
            have_cached_ = false;
            return cached_;
        }
        double u1 = 1.0 - next_double(); // (0, 1]
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        cached_ = r * std::sin(a);
        have_cached_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    double cached_ = 0.0;
    bool have_cached_ = false;
};

/// One SplitMix64 avalanche round; used to fold structured ids into seeds.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xBF58476D1CE4E5B9ULL;
    x ^= x >> 27;
    x *= 0x94D049BB133111EBULL;
    x ^= x >> 31;
    return x;
}

/// Derives an independent substream seed from a base seed and a list of ids.
inline std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> ids) {
    std::uint64_t h = mix64(base + 0x9E3779B97F4A7C15ULL);
    for (std::uint64_t id : ids)
        h = mix64(h ^ (id + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)));
    return h;
}

inline Rng derive_rng(std::uint64_t base, std::initializer_list<std::uint64_t> ids) {
    return Rng(derive_seed(base, ids));
}

// Stream purpose tags for substream derivation. Values are arbitrary but frozen:
// changing them changes every downstream random draw.
namespace stream {
inline constexpr std::uint64_t static_paths = 0x11;
inline constexpr std::uint64_t dynamic_paths = 0x12;
inline constexpr std::uint64_t phase_offset = 0x13;
inline constexpr std::uint64_t noise = 0x14;
inline constexpr std::uint64_t split = 0x21;
inline constexpr std::uint64_t init = 0x31;
inline constexpr std::uint64_t queue = 0x32;
inline constexpr std::uint64_t shuffle = 0x33;
inline constexpr std::uint64_t sample_draw = 0x34;
inline constexpr std::uint64_t probe = 0x41;
} // namespace stream

} // namespace arcssl
