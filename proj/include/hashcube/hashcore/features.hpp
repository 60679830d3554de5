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
#include <span>
#include <string>
#include <vector>

#include "hashcube/hashcore/hashing_head.hpp"

namespace hashcube {

/// One spectral band, row-major.
struct BandGrid {
    std::string name;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<double> values;

    /// Throws InvalidInput unless width * height == values.size() > 0.
    void validate() const;
    double at(std::size_t row, std::size_t col) const { return values[row * width + col]; }
};

inline constexpr std::size_t kPoolGrid = 4;

/// Deterministic baseline extractor: per-band (mean, population std) in
/// input order, then the 4x4 block means of the first band in row-major
/// order, zero-padded or truncated to `dim`.
FeatureVector extract_features(std::span<const BandGrid> bands,
                               std::size_t dim = HashingHead::kDefaultInputDim);

} // namespace hashcube
