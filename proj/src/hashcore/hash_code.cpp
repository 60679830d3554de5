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

#include "hashcube/hashcore/hash_code.hpp"

#include "hashcube/error.hpp"

namespace hashcube {

HashCode::HashCode(std::size_t bits) : bits_(static_cast<std::uint32_t>(bits)) {
    if (bits == 0 || bits > kMaxBits) {
        throw InvalidInput("hash code width must be in [1, 128], got " +
                           std::to_string(bits));
    }
}

HashCode HashCode::ones(std::size_t bits) {
    HashCode c(bits);
    for (std::size_t i = 0; i < bits; ++i) {
        c.set(i);
    }
    return c;
}

void HashCode::set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
        words_[i >> 6] |= mask;
    } else {
        words_[i >> 6] &= ~mask;
    }
}

std::uint32_t HashCode::extract(std::size_t offset, std::size_t width) const {
    std::uint32_t out = 0;
    for (std::size_t j = 0; j < width; ++j) {
        if (test(offset + j)) {
            out |= std::uint32_t{1} << j;
        }
    }
    return out;
}

std::vector<std::uint8_t> HashCode::to_bytes() const {
    std::vector<std::uint8_t> out((bits_ + 7) / 8, 0);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(words_[i / 8] >> (8 * (i % 8)));
    }
    return out;
}

HashCode HashCode::from_bytes(std::span<const std::uint8_t> bytes, std::size_t bits) {
    HashCode c(bits);
    if (bytes.size() != (bits + 7) / 8) {
        throw InvalidInput("expected " + std::to_string((bits + 7) / 8) +
                           " code bytes, got " + std::to_string(bytes.size()));
    }
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        c.words_[i / 8] |= std::uint64_t{bytes[i]} << (8 * (i % 8));
    }
    if (bits % 64 != 0) {
        const std::uint64_t tail = c.words_[bits / 64] >> (bits % 64);
        if (tail != 0 || (bits < 64 && c.words_[1] != 0)) {
            throw InvalidInput("code bytes set bits beyond width " +
                               std::to_string(bits));
        }
    }
    return c;
}

std::string HashCode::to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    for (std::uint8_t b : to_bytes()) {
        out.push_back(kDigits[b >> 4]);
        out.push_back(kDigits[b & 15]);
    }
    return out;
}

HashCode HashCode::from_hex(std::string_view hex, std::size_t bits) {
    auto nibble = [&](char ch) -> std::uint8_t {
        if (ch >= '0' && ch <= '9') return static_cast<std::uint8_t>(ch - '0');
        if (ch >= 'a' && ch <= 'f') return static_cast<std::uint8_t>(ch - 'a' + 10);
        if (ch >= 'A' && ch <= 'F') return static_cast<std::uint8_t>(ch - 'A' + 10);
        throw InvalidInput("invalid hex digit in hash code");
    };
    if (hex.size() % 2 != 0) {
        throw InvalidInput("hex hash code must have an even number of digits");
    }
    std::vector<std::uint8_t> bytes(hex.size() / 2);
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<std::uint8_t>(nibble(hex[2 * i]) << 4 | nibble(hex[2 * i + 1]));
    }
    return from_bytes(bytes, bits);
}

} // namespace hashcube
