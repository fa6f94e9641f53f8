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

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "fsazip/bitstream.hpp"
#include "fsazip/errors.hpp"

namespace fsazip {

/// Appends the Elias-delta codeword of x >= 1: the gamma code of the bit
/// count of x, followed by the bits of x below its leading one.
inline void elias_delta_encode(BitStream& s, std::uint64_t x) {
    if (x == 0)
        throw std::invalid_argument("elias_delta_encode: x must be positive");
    unsigned tail = static_cast<unsigned>(std::bit_width(x)) - 1;  // floor(log2 x)
    std::uint64_t n = tail + 1;                                    // bit count of x
    unsigned gamma_zeros = static_cast<unsigned>(std::bit_width(n)) - 1;
    s.write_bits(0, gamma_zeros);
    s.write_bits(n, gamma_zeros + 1);
    s.write_bits(x & ((std::uint64_t{1} << tail) - 1), tail);
}

inline std::uint64_t elias_delta_decode(BitStream& s) {
    unsigned gamma_zeros = 0;
    while (s.read_bits(1) == 0) {
        if (++gamma_zeros > 6) throw corrupt_error("delta codeword exceeds 64-bit range");
    }
    std::uint64_t n = (std::uint64_t{1} << gamma_zeros) | s.read_bits(gamma_zeros);
    std::uint64_t tail = n - 1;
    if (tail > 63) throw corrupt_error("delta codeword exceeds 64-bit range");
    return (std::uint64_t{1} << tail) | s.read_bits(static_cast<unsigned>(tail));
}

/// Closed-form codeword length of elias_delta_encode(x), in bits.
inline unsigned elias_delta_length(std::uint64_t x) {
    if (x == 0)
        throw std::invalid_argument("elias_delta_length: x must be positive");
    unsigned tail = static_cast<unsigned>(std::bit_width(x)) - 1;
    return tail + 2 * (static_cast<unsigned>(std::bit_width(std::uint64_t{tail} + 1)) - 1) + 1;
}

/// Delta code shifted to cover zero: codes x as the codeword of x + 1.
inline void encode_nonneg(BitStream& s, std::uint64_t x) {
    if (x == UINT64_MAX)
        throw std::invalid_argument("encode_nonneg: value too large");
    elias_delta_encode(s, x + 1);
}

inline std::uint64_t decode_nonneg(BitStream& s) {
    return elias_delta_decode(s) - 1;
}

/// A nondecreasing list of integers bounded above, the shape gap coding
/// expects. upper_bound participates only in bound evaluation, not coding.
struct MonotoneList {
    std::vector<std::uint64_t> values;
    std::uint64_t upper_bound = 0;

    bool valid() const {
        std::uint64_t prev = 0;
        for (std::uint64_t v : values) {
            if (v < prev) return false;
            prev = v;
        }
        return values.empty() || values.back() <= upper_bound;
    }
};

/// Gap-codes a sorted list: the shifted delta codeword of each consecutive
/// difference, the first taken against zero. Empty input appends nothing.
inline void difference_encode(BitStream& s, std::span<const std::uint64_t> sorted) {
    std::uint64_t prev = 0;
    for (std::uint64_t v : sorted) {
        if (v < prev)
            throw std::invalid_argument("difference_encode: input not sorted");
        encode_nonneg(s, v - prev);
        prev = v;
    }
}

inline void difference_encode(BitStream& s, const MonotoneList& list) {
    if (!list.valid())
        throw std::invalid_argument("difference_encode: monotone list invariant violated");
    difference_encode(s, std::span<const std::uint64_t>(list.values));
}

inline std::vector<std::uint64_t> difference_decode(BitStream& s, std::size_t count) {
    std::vector<std::uint64_t> out;
    out.reserve(count);
    std::uint64_t prev = 0;
    for (std::size_t i = 0; i < count; ++i) {
        prev += decode_nonneg(s);
        out.push_back(prev);
    }
    return out;
}

/// theta(x) = log2(x+1) + 2*log2(log2(x+1)+1) + 1; the concave per-gap
/// envelope of the shifted delta codeword length.
inline double theta(double x) {
    double l = std::log2(x + 1.0);
    return l + 2.0 * std::log2(l + 1.0) + 1.0;
}

/// Worst-case bit count of difference_encode for d values bounded by n:
/// d*log2((n+d)/d) + 2d*log2(log2((n+d)/d)+1) + d. Returns 0 for d = 0.
inline double lemma1_bound(std::uint64_t d, std::uint64_t n) {
    if (d == 0) return 0.0;
    return static_cast<double>(d) * theta(static_cast<double>(n) / static_cast<double>(d));
}

}  // namespace fsazip
