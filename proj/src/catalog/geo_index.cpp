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

#include "hashcube/catalog/geo_index.hpp"

#include <algorithm>

#include "hashcube/error.hpp"

namespace hashcube {

GeoIndex::GeoIndex(int precision) : precision_(precision) {
    if (precision < 1 || precision > geohash::kMaxPrecision) {
        throw InvalidInput("geohash precision must be in [1, 12]");
    }
}

void GeoIndex::insert(Id id, const GeoRect& bounds) {
    if (id != rects_.size()) {
        throw InvalidInput("geo index ids must be inserted densely");
    }
    bounds.validate();
    rects_.push_back(bounds);
    const auto range = geohash::cells_covering(bounds, precision_);
    if (range.count() > kMaxCellsPerRecord) {
        oversized_.push_back(id);
        return;
    }
    for (std::uint32_t x = range.lon_lo; x <= range.lon_hi; ++x) {
        for (std::uint32_t y = range.lat_lo; y <= range.lat_hi; ++y) {
            cells_[geohash::interleave(x, y, precision_)].push_back(id);
        }
    }
}

std::vector<GeoIndex::Id> GeoIndex::candidates(const GeoRect& area) const {
    const auto range = geohash::cells_covering(area, precision_);
    std::vector<Id> out(oversized_.begin(), oversized_.end());
    auto take = [&](const std::vector<Id>& ids) { out.insert(out.end(), ids.begin(), ids.end()); };
    if (range.count() <= cells_.size()) {
        for (std::uint32_t x = range.lon_lo; x <= range.lon_hi; ++x) {
            for (std::uint32_t y = range.lat_lo; y <= range.lat_hi; ++y) {
                auto it = cells_.find(geohash::interleave(x, y, precision_));
                if (it != cells_.end()) take(it->second);
            }
        }
    } else {
        for (const auto& [cell, ids] : cells_) {
            std::uint32_t x, y;
            geohash::deinterleave(cell, precision_, x, y);
            if (x >= range.lon_lo && x <= range.lon_hi && y >= range.lat_lo &&
                y <= range.lat_hi) {
                take(ids);
            }
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<GeoIndex::Id> GeoIndex::query(const SpatialShape& shape) const {
    validate_shape(shape);
    std::vector<Id> out;
    for (Id id : candidates(bounding_rect(shape))) {
        if (intersects(shape, rects_[id])) out.push_back(id);
    }
    return out;
}

std::vector<GeoIndex::Id> GeoIndex::cell_members(std::uint64_t cell) const {
    auto it = cells_.find(cell);
    return it == cells_.end() ? std::vector<Id>{} : it->second;
}

std::vector<std::string> GeoIndex::audit() const {
    std::vector<std::string> problems;
    std::vector<std::uint64_t> listed(rects_.size(), 0);
    for (const auto& [cell, ids] : cells_) {
        std::uint32_t x, y;
        geohash::deinterleave(cell, precision_, x, y);
        for (Id id : ids) {
            if (id >= rects_.size()) {
                problems.push_back("cell lists unknown id " + std::to_string(id));
                continue;
            }
            const auto r = geohash::cells_covering(rects_[id], precision_);
            if (x < r.lon_lo || x > r.lon_hi || y < r.lat_lo || y > r.lat_hi) {
                problems.push_back("record " + std::to_string(id) + " listed under cell " +
                                   geohash::to_string(cell, precision_) + " it does not touch");
            }
            ++listed[id];
        }
    }
    std::vector<bool> over(rects_.size(), false);
    for (Id id : oversized_) {
        if (id < rects_.size()) over[id] = true;
    }
    for (Id id = 0; id < rects_.size(); ++id) {
        const auto r = geohash::cells_covering(rects_[id], precision_);
        const std::uint64_t expected = over[id] ? 0 : r.count();
        if (listed[id] != expected) {
            problems.push_back("record " + std::to_string(id) + " listed in " +
                               std::to_string(listed[id]) + " cells, expected " +
                               std::to_string(expected));
        }
    }
    return problems;
}

} // namespace hashcube
