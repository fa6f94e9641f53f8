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
#include <utility>
#include <vector>

#include "fsazip/errors.hpp"

namespace fsazip {

/// Append-only bit buffer with a separate read cursor.
///
/// Bits are MSB-first: the first bit written lands in the high bit of byte
/// zero. The last partial byte is kept zero-padded at all times, so bytes()
/// is always a valid serialization; bit_len() is the authoritative length.
class BitStream {
public:
    BitStream() = default;

    /// Wraps a byte buffer for reading; bit_len is 8 * bytes.size().
    static BitStream from_bytes(std::vector<std::uint8_t> bytes) {
        BitStream s;
        s.bit_len_ = static_cast<std::uint64_t>(bytes.size()) * 8;
        s.bytes_ = std::move(bytes);
        return s;
    }

    /// Appends the `width` low-order bits of `value`, most significant first.
    /// Width 0 appends nothing.
    void write_bits(std::uint64_t value, unsigned width) {
        if (width > 64)
            throw std::invalid_argument("BitStream::write_bits: width > 64");
        if (width < 64 && (value >> width) != 0)
            throw std::invalid_argument("BitStream::write_bits: value out of range for width");
        unsigned rem = width;
        while (rem > 0) {
            unsigned used = static_cast<unsigned>(bit_len_ & 7u);
            if (used == 0) bytes_.push_back(0);
            unsigned space = 8 - used;
            unsigned take = space < rem ? space : rem;
            auto chunk = static_cast<std::uint8_t>((value >> (rem - take)) & ((1u << take) - 1u));
            bytes_.back() |= static_cast<std::uint8_t>(chunk << (space - take));
            bit_len_ += take;
            rem -= take;
        }
    }

    /// Reads the next `width` bits as an MSB-first integer and advances the
    /// cursor. Reading past bit_len() throws corrupt_error.
    std::uint64_t read_bits(unsigned width) {
        if (width > 64)
            throw std::invalid_argument("BitStream::read_bits: width > 64");
        if (read_pos_ + width > bit_len_)
            throw corrupt_error("bit stream truncated");
        std::uint64_t out = 0;
        unsigned rem = width;
        while (rem > 0) {
            unsigned used = static_cast<unsigned>(read_pos_ & 7u);
            unsigned avail = 8 - used;
            unsigned take = avail < rem ? avail : rem;
            std::uint8_t byte = bytes_[static_cast<std::size_t>(read_pos_ >> 3)];
            auto chunk = static_cast<std::uint8_t>((byte >> (avail - take)) & ((1u << take) - 1u));
            out = (out << take) | chunk;
            read_pos_ += take;
            rem -= take;
        }
        return out;
    }

    std::uint64_t bit_len() const { return bit_len_; }
    std::uint64_t read_pos() const { return read_pos_; }
    std::uint64_t remaining_bits() const { return bit_len_ - read_pos_; }

    void set_read_pos(std::uint64_t pos) {
        if (pos > bit_len_)
            throw std::invalid_argument("BitStream::set_read_pos: past end");
        read_pos_ = pos;
    }

    const std::vector<std::uint8_t>& bytes() const { return bytes_; }
    std::size_t byte_size() const { return bytes_.size(); }

    friend bool operator==(const BitStream& a, const BitStream& b) {
        return a.bit_len_ == b.bit_len_ && a.bytes_ == b.bytes_;
    }

private:
    std::vector<std::uint8_t> bytes_;
    std::uint64_t bit_len_ = 0;
    std::uint64_t read_pos_ = 0;
};

}  // namespace fsazip
