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
#include <string>
#include <unordered_map>
#include <vector>

#include "hashcube/catalog/geo.hpp"

namespace hashcube {

/// Geohash cell index over record bounding rectangles. A record is listed
/// under every cell its rectangle touches; rectangles spanning more than
/// kMaxCellsPerRecord cells go to an overflow list that every query scans.
/// Ids are caller-assigned record indices.
class GeoIndex {
public:
    using Id = std::uint32_t;
    static constexpr std::uint64_t kMaxCellsPerRecord = 4096;

    explicit GeoIndex(int precision = geohash::kDefaultPrecision);

    int precision() const { return precision_; }
    std::size_t size() const { return rects_.size(); }
    std::size_t cell_count() const { return cells_.size(); }
    std::size_t oversized_count() const { return oversized_.size(); }

    /// Ids must be inserted densely: 0, 1, 2, ...
    void insert(Id id, const GeoRect& bounds);

    /// Superset of the ids whose rectangle intersects `area`, ascending.
    std::vector<Id> candidates(const GeoRect& area) const;

    /// Exact matches: candidates refined against the shape, ascending.
    std::vector<Id> query(const SpatialShape& shape) const;

    /// Ids of the records in one cell (oversized records excluded).
    std::vector<Id> cell_members(std::uint64_t cell) const;

    /// Every record listed under exactly the cells its rectangle covers,
    /// or in the overflow list. One message per violation.
    std::vector<std::string> audit() const;

private:
    int precision_;
    std::vector<GeoRect> rects_;
    std::unordered_map<std::uint64_t, std::vector<Id>> cells_;
    std::vector<Id> oversized_;
};

} // namespace hashcube
