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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "hashcube/hashcore/hash_code.hpp"

namespace hashcube {

/// Default cap on the radius for which the Hamming ball is enumerated
/// explicitly; larger radii go through multi-index lookup.
inline constexpr int kDefaultBallCap = 2;

/// Popcount of a XOR b. Throws InvalidInput when widths differ.
int hamming_distance(const HashCode& a, const HashCode& b);

/// Sum_{k=0..r} C(bits, k), saturating at UINT64_MAX.
std::uint64_t ball_size(std::size_t bits, int radius);

/// Every code within distance `radius` of `center`, center first, then by
/// increasing distance. Throws RadiusTooLarge above `cap`.
std::vector<HashCode> enumerate_ball(const HashCode& center, int radius,
                                     int cap = kDefaultBallCap);

/// Calls `visit` for every `width`-bit value (width <= 32) within distance
/// `radius` of `center`. No cap; callers bound the work.
void for_each_in_ball(std::uint32_t center, std::size_t width, int radius,
                      const std::function<void(std::uint32_t)>& visit);

} // namespace hashcube
