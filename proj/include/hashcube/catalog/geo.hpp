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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace hashcube {

/// Mean Earth radius in meters.
constexpr double kEarthRadiusM = 6371008.8;

struct GeoPoint {
    double lon = 0.0;
    double lat = 0.0;

    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

/// Axis-aligned rectangle in WGS84 degrees. No antimeridian wrapping.
struct GeoRect {
    double min_lon = 0.0;
    double min_lat = 0.0;
    double max_lon = 0.0;
    double max_lat = 0.0;

    /// Rectangle spanned by two arbitrary corners.
    static GeoRect from_corners(GeoPoint a, GeoPoint b);
    static GeoRect world() { return {-180.0, -90.0, 180.0, 90.0}; }

    /// Throws InvalidInput on out-of-range coordinates or min > max.
    void validate() const;

    bool contains(GeoPoint p) const {
        return p.lon >= min_lon && p.lon <= max_lon && p.lat >= min_lat && p.lat <= max_lat;
    }
    /// Closed intersection: touching rectangles intersect.
    bool intersects(const GeoRect& o) const {
        return min_lon <= o.max_lon && o.min_lon <= max_lon && min_lat <= o.max_lat &&
               o.min_lat <= max_lat;
    }

    friend bool operator==(const GeoRect&, const GeoRect&) = default;
};

/// Radius in meters. Distances use an equirectangular projection at the
/// center latitude, so accuracy degrades toward the poles.
struct GeoCircle {
    GeoPoint center;
    double radius_m = 0.0;

    friend bool operator==(const GeoCircle&, const GeoCircle&) = default;
};

/// Simple polygon in lon/lat treated as a plane. The ring is implicitly
/// closed; a repeated first vertex at the end is dropped on validation.
struct GeoPolygon {
    std::vector<GeoPoint> vertices;

    friend bool operator==(const GeoPolygon&, const GeoPolygon&) = default;
};

using SpatialShape = std::variant<GeoRect, GeoCircle, GeoPolygon>;

/// Throws InvalidInput. A polygon ring given with its closing vertex
/// repeated is accepted.
void validate_shape(const SpatialShape& shape);
/// Validates, then drops a polygon's closing duplicate vertex.
void normalize_shape(SpatialShape& shape);

/// Smallest rectangle containing the shape, clamped to the world.
GeoRect bounding_rect(const SpatialShape& shape);

/// Closed intersection of a shape with a rectangle.
bool intersects(const SpatialShape& shape, const GeoRect& rect);

bool point_in_polygon(const GeoPolygon& poly, GeoPoint p);   // boundary counts as inside
bool segments_intersect(GeoPoint a, GeoPoint b, GeoPoint c, GeoPoint d);

/// Geohash helpers. A cell at precision p has ceil(5p/2) longitude bits
/// and floor(5p/2) latitude bits, interleaved longitude first.
namespace geohash {

constexpr int kDefaultPrecision = 5;
constexpr int kMaxPrecision = 12;

struct CellRange {
    std::uint32_t lon_lo, lon_hi, lat_lo, lat_hi;   // inclusive
    std::uint64_t count() const {
        return std::uint64_t(lon_hi - lon_lo + 1) * std::uint64_t(lat_hi - lat_lo + 1);
    }
};

int lon_bits(int precision);
int lat_bits(int precision);

std::uint32_t lon_index(double lon, int precision);
std::uint32_t lat_index(double lat, int precision);

std::uint64_t interleave(std::uint32_t lon_idx, std::uint32_t lat_idx, int precision);
void deinterleave(std::uint64_t cell, int precision, std::uint32_t& lon_idx, std::uint32_t& lat_idx);

std::uint64_t cell_of(GeoPoint p, int precision);
CellRange cells_covering(const GeoRect& rect, int precision);

std::string to_string(std::uint64_t cell, int precision);
std::uint64_t from_string(const std::string& hash);
std::string encode(GeoPoint p, int precision = kDefaultPrecision);
/// Extent of a cell.
GeoRect cell_rect(std::uint64_t cell, int precision);

} // namespace geohash

} // namespace hashcube
