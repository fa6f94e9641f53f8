/**
 * Copyright 2026 the fsazip authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <stdexcept>

namespace fsazip {

/// SplitMix64 finalizer (Steele, Lea & Flood). Stateless mixing step used
/// both by the generator and for seed derivation.
inline std::uint64_t split_mix(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// SplitMix64 generator. All synthetic fixtures in this project are defined
/// in terms of this generator so they reproduce bit-for-bit on any platform;
/// the standard library distributions are deliberately avoided.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, bound) via the multiply-shift reduction.
    /// A bound of 1 consumes no randomness.
    std::uint64_t next_below(std::uint64_t bound) {
        if (bound == 0)
            throw std::invalid_argument("SplitMix64::next_below: bound must be positive");
        if (bound == 1) return 0;
        return static_cast<std::uint64_t>(
            (static_cast<unsigned __int128>(next()) * bound) >> 64);
    }

    /// Stable two-level seed derivation for independent substreams.
    static std::uint64_t derive(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) {
        return split_mix(split_mix(split_mix(base) ^ a) ^ b);
    }

private:
    std::uint64_t state_;
};

}  // namespace fsazip
