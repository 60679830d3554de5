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

#include "hashcube/hammindex/hamming.hpp"

#include <limits>
#include <string>

#include "hashcube/error.hpp"

namespace hashcube {

int hamming_distance(const HashCode& a, const HashCode& b) {
    if (a.bits() != b.bits()) {
        throw InvalidInput("hamming distance between codes of width " +
                           std::to_string(a.bits()) + " and " + std::to_string(b.bits()));
    }
    return std::popcount(a.words()[0] ^ b.words()[0]) +
           std::popcount(a.words()[1] ^ b.words()[1]);
}

std::uint64_t ball_size(std::size_t bits, int radius) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    std::uint64_t term = 1;  // C(bits, k)
    for (int k = 0; k <= radius && static_cast<std::size_t>(k) <= bits; ++k) {
        if (k > 0) {
            // C(n, k) = C(n, k-1) * (n - k + 1) / k, exact in 128-bit
            const unsigned __int128 next =
                    static_cast<unsigned __int128>(term) * (bits - k + 1) / static_cast<unsigned>(k);
            if (next > kMax) return kMax;
            term = static_cast<std::uint64_t>(next);
        }
        if (total > kMax - term) return kMax;
        total += term;
    }
    return total;
}

namespace {

template <typename Flip, typename Emit>
void combinations(std::size_t n, int k, std::size_t start, Flip& flip, Emit& emit) {
    if (k == 0) {
        emit();
        return;
    }
    for (std::size_t i = start; i + static_cast<std::size_t>(k) <= n; ++i) {
        flip(i);
        combinations(n, k - 1, i + 1, flip, emit);
        flip(i);
    }
}

} // namespace

std::vector<HashCode> enumerate_ball(const HashCode& center, int radius, int cap) {
    if (radius < 0) {
        throw InvalidInput("radius must be non-negative");
    }
    if (radius > cap) {
        throw RadiusTooLarge(radius, cap);
    }
    std::vector<HashCode> out;
    out.reserve(ball_size(center.bits(), radius));
    HashCode probe = center;
    auto flip = [&](std::size_t i) { probe.flip(i); };
    auto emit = [&] { out.push_back(probe); };
    for (int k = 0; k <= radius && static_cast<std::size_t>(k) <= center.bits(); ++k) {
        combinations(center.bits(), k, 0, flip, emit);
    }
    return out;
}

void for_each_in_ball(std::uint32_t center, std::size_t width, int radius,
                      const std::function<void(std::uint32_t)>& visit) {
    std::uint32_t probe = center;
    auto flip = [&](std::size_t i) { probe ^= std::uint32_t{1} << i; };
    auto emit = [&] { visit(probe); };
    for (int k = 0; k <= radius && static_cast<std::size_t>(k) <= width; ++k) {
        combinations(width, k, 0, flip, emit);
    }
}

} // namespace hashcube
