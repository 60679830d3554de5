// Copyright 2026-present the hashcube authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace hashcube {

/// Fixed-width binary code of 1..128 bits. Bits beyond the width are always
/// zero so word-wise comparison and XOR are exact.
class HashCode {
public:
    static constexpr std::size_t kMaxBits = 128;
    static constexpr std::size_t kCanonicalBits = 128;

    HashCode() = default;

    /// All-zero code of the given width.
    explicit HashCode(std::size_t bits);

    static HashCode ones(std::size_t bits);

    /// Decodes `bits/8` bytes; bit j lives in byte j/8 at position j%8.
    static HashCode from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits);
    static HashCode from_hex(std::string_view hex, std::size_t bits);

    std::size_t bits() const { return bits_; }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1u;
    }
    void set(std::size_t i, bool value = true);
    void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

    std::size_t popcount() const {
        return std::popcount(words_[0]) + std::popcount(words_[1]);
    }

    /// Bits [offset, offset + width) packed into the low bits; width <= 32.
    std::uint32_t extract(std::size_t offset, std::size_t width) const;

    std::vector<std::uint8_t> to_bytes() const;
    std::string to_hex() const;

    const std::array<std::uint64_t, 2>& words() const { return words_; }

    friend bool operator==(const HashCode&, const HashCode&) = default;

private:
    std::array<std::uint64_t, 2> words_{0, 0};
    std::uint32_t bits_ = 0;
};

struct HashCodeHash {
    std::size_t operator()(const HashCode& c) const noexcept {
        std::uint64_t h = c.words()[0] * 0x9E3779B97F4A7C15ull;
        h ^= c.words()[1] + 0x632BE59BD9B4E019ull + (h << 6) + (h >> 2);
        return static_cast<std::size_t>(h ^ (h >> 31));
    }
};

} // namespace hashcube
