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

#include "hashcube/hashcore/features.hpp"

#include <cmath>

#include "hashcube/error.hpp"

namespace hashcube {

void BandGrid::validate() const {
    if (width == 0 || height == 0 || values.size() != width * height) {
        throw InvalidInput("band '" + name + "' is not a non-empty rectangular grid");
    }
}

namespace {

// Block i of n over an axis of length len; never empty.
std::pair<std::size_t, std::size_t> block_span(std::size_t i, std::size_t n, std::size_t len) {
    std::size_t lo = i * len / n;
    std::size_t hi = (i + 1) * len / n;
    if (lo >= len) lo = len - 1;
    if (hi <= lo) hi = lo + 1;
    return {lo, hi};
}

} // namespace

FeatureVector extract_features(std::span<const BandGrid> bands, std::size_t dim) {
    if (bands.empty()) {
        throw InvalidInput("feature extraction needs at least one band");
    }
    FeatureVector out;
    out.reserve(2 * bands.size() + kPoolGrid * kPoolGrid);
    for (const auto& band : bands) {
        band.validate();
        double sum = 0.0;
        for (double v : band.values) sum += v;
        const double mean = sum / static_cast<double>(band.values.size());
        double sq = 0.0;
        for (double v : band.values) sq += (v - mean) * (v - mean);
        out.push_back(mean);
        out.push_back(std::sqrt(sq / static_cast<double>(band.values.size())));
    }
    const BandGrid& first = bands.front();
    for (std::size_t bi = 0; bi < kPoolGrid; ++bi) {
        const auto [r0, r1] = block_span(bi, kPoolGrid, first.height);
        for (std::size_t bj = 0; bj < kPoolGrid; ++bj) {
            const auto [c0, c1] = block_span(bj, kPoolGrid, first.width);
            double sum = 0.0;
            for (std::size_t r = r0; r < r1; ++r) {
                for (std::size_t c = c0; c < c1; ++c) sum += first.at(r, c);
            }
            out.push_back(sum / static_cast<double>((r1 - r0) * (c1 - c0)));
        }
    }
    out.resize(dim, 0.0);
    return out;
}

} // namespace hashcube
