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

#include "hashcube/catalog/geo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hashcube/error.hpp"

namespace hashcube {

namespace {

constexpr double kMetersPerDegree = kEarthRadiusM * std::numbers::pi / 180.0;

bool valid_lon(double lon) { return std::isfinite(lon) && lon >= -180.0 && lon <= 180.0; }
bool valid_lat(double lat) { return std::isfinite(lat) && lat >= -90.0 && lat <= 90.0; }

void check_point(GeoPoint p, const char* what) {
    if (!valid_lon(p.lon) || !valid_lat(p.lat)) {
        throw InvalidInput(std::string(what) + " outside lon [-180, 180] / lat [-90, 90]");
    }
}

double cross(GeoPoint o, GeoPoint a, GeoPoint b) {
    return (a.lon - o.lon) * (b.lat - o.lat) - (a.lat - o.lat) * (b.lon - o.lon);
}

int orientation(GeoPoint o, GeoPoint a, GeoPoint b) {
    const double c = cross(o, a, b);
    return (c > 0.0) - (c < 0.0);
}

bool on_segment(GeoPoint a, GeoPoint b, GeoPoint p) {
    return std::min(a.lon, b.lon) <= p.lon && p.lon <= std::max(a.lon, b.lon) &&
           std::min(a.lat, b.lat) <= p.lat && p.lat <= std::max(a.lat, b.lat);
}

std::vector<GeoPoint> open_ring(const std::vector<GeoPoint>& v) {
    std::vector<GeoPoint> ring = v;
    if (ring.size() > 1 && ring.front() == ring.back()) ring.pop_back();
    return ring;
}

void validate_polygon(const GeoPolygon& poly) {
    const auto ring = open_ring(poly.vertices);
    if (ring.size() < 3) {
        throw InvalidInput("polygon needs at least 3 distinct vertices");
    }
    for (const auto& p : ring) check_point(p, "polygon vertex");
    const std::size_t n = ring.size();
    double area2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const GeoPoint a = ring[i];
        const GeoPoint b = ring[(i + 1) % n];
        if (a == b) throw InvalidInput("polygon has repeated consecutive vertices");
        area2 += a.lon * b.lat - b.lon * a.lat;
    }
    if (area2 == 0.0) throw InvalidInput("polygon has zero area");
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool adjacent = j == i + 1 || (i == 0 && j == n - 1);
            const GeoPoint a = ring[i], b = ring[(i + 1) % n];
            const GeoPoint c = ring[j], d = ring[(j + 1) % n];
            if (adjacent) {
                // Adjacent edges may only share their common vertex.
                const GeoPoint shared = j == i + 1 ? b : a;
                const GeoPoint far1 = j == i + 1 ? a : b;
                const GeoPoint far2 = j == i + 1 ? d : c;
                if (orientation(shared, far1, far2) == 0 &&
                    ((far1.lon - shared.lon) * (far2.lon - shared.lon) +
                     (far1.lat - shared.lat) * (far2.lat - shared.lat)) > 0.0) {
                    throw InvalidInput("polygon folds back on itself");
                }
                continue;
            }
            if (segments_intersect(a, b, c, d)) {
                throw InvalidInput("polygon edges " + std::to_string(i) + " and " +
                                   std::to_string(j) + " intersect");
            }
        }
    }
}

bool circle_intersects(const GeoCircle& c, const GeoRect& r) {
    const double lon = std::clamp(c.center.lon, r.min_lon, r.max_lon);
    const double lat = std::clamp(c.center.lat, r.min_lat, r.max_lat);
    const double k = std::cos(c.center.lat * std::numbers::pi / 180.0);
    const double dx = (lon - c.center.lon) * k * kMetersPerDegree;
    const double dy = (lat - c.center.lat) * kMetersPerDegree;
    return dx * dx + dy * dy <= c.radius_m * c.radius_m;
}

bool polygon_intersects(const GeoPolygon& poly, const GeoRect& r) {
    const auto& v = poly.vertices;
    for (const auto& p : v) {
        if (r.contains(p)) return true;
    }
    const GeoPoint corners[4] = {{r.min_lon, r.min_lat},
                                 {r.max_lon, r.min_lat},
                                 {r.max_lon, r.max_lat},
                                 {r.min_lon, r.max_lat}};
    for (const auto& c : corners) {
        if (point_in_polygon(poly, c)) return true;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        const GeoPoint a = v[i], b = v[(i + 1) % v.size()];
        for (int e = 0; e < 4; ++e) {
            if (segments_intersect(a, b, corners[e], corners[(e + 1) % 4])) return true;
        }
    }
    return false;
}

} // namespace

GeoRect GeoRect::from_corners(GeoPoint a, GeoPoint b) {
    return {std::min(a.lon, b.lon), std::min(a.lat, b.lat), std::max(a.lon, b.lon),
            std::max(a.lat, b.lat)};
}

void GeoRect::validate() const {
    if (!valid_lon(min_lon) || !valid_lon(max_lon)) {
        throw InvalidInput("longitude outside [-180, 180]");
    }
    if (!valid_lat(min_lat) || !valid_lat(max_lat)) {
        throw InvalidInput("latitude outside [-90, 90]");
    }
    if (min_lon > max_lon || min_lat > max_lat) {
        throw InvalidInput("rectangle min exceeds max");
    }
}

bool segments_intersect(GeoPoint a, GeoPoint b, GeoPoint c, GeoPoint d) {
    const int o1 = orientation(a, b, c);
    const int o2 = orientation(a, b, d);
    const int o3 = orientation(c, d, a);
    const int o4 = orientation(c, d, b);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a, b, c)) return true;
    if (o2 == 0 && on_segment(a, b, d)) return true;
    if (o3 == 0 && on_segment(c, d, a)) return true;
    if (o4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

bool point_in_polygon(const GeoPolygon& poly, GeoPoint p) {
    const auto& v = poly.vertices;
    const std::size_t n = v.size();
    if (n < 3) return false;
    bool inside = false;
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const GeoPoint a = v[i], b = v[j];
        if (orientation(a, b, p) == 0 && on_segment(a, b, p)) return true;
        if ((a.lat > p.lat) != (b.lat > p.lat)) {
            const double x = a.lon + (p.lat - a.lat) * (b.lon - a.lon) / (b.lat - a.lat);
            if (p.lon < x) inside = !inside;
        }
    }
    return inside;
}

void validate_shape(const SpatialShape& shape) {
    std::visit(
            [](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, GeoRect>) {
                    s.validate();
                } else if constexpr (std::is_same_v<T, GeoCircle>) {
                    check_point(s.center, "circle center");
                    if (!std::isfinite(s.radius_m) || !(s.radius_m > 0.0)) {
                        throw InvalidInput("circle radius must be positive");
                    }
                } else {
                    validate_polygon(s);
                }
            },
            shape);
}

void normalize_shape(SpatialShape& shape) {
    validate_shape(shape);
    if (auto* poly = std::get_if<GeoPolygon>(&shape)) {
        poly->vertices = open_ring(poly->vertices);
    }
}

GeoRect bounding_rect(const SpatialShape& shape) {
    return std::visit(
            [](const auto& s) -> GeoRect {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, GeoRect>) {
                    return s;
                } else if constexpr (std::is_same_v<T, GeoCircle>) {
                    const double dlat = s.radius_m / kMetersPerDegree;
                    const double k = std::cos(s.center.lat * std::numbers::pi / 180.0);
                    GeoRect r{-180.0, std::max(-90.0, s.center.lat - dlat), 180.0,
                              std::min(90.0, s.center.lat + dlat)};
                    if (k > 1e-12) {
                        const double dlon = dlat / k;
                        if (dlon < 180.0) {
                            r.min_lon = std::max(-180.0, s.center.lon - dlon);
                            r.max_lon = std::min(180.0, s.center.lon + dlon);
                        }
                    }
                    return r;
                } else {
                    GeoRect r{180.0, 90.0, -180.0, -90.0};
                    for (const auto& p : s.vertices) {
                        r.min_lon = std::min(r.min_lon, p.lon);
                        r.max_lon = std::max(r.max_lon, p.lon);
                        r.min_lat = std::min(r.min_lat, p.lat);
                        r.max_lat = std::max(r.max_lat, p.lat);
                    }
                    return r;
                }
            },
            shape);
}

bool intersects(const SpatialShape& shape, const GeoRect& rect) {
    return std::visit(
            [&](const auto& s) {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, GeoRect>) {
                    return s.intersects(rect);
                } else if constexpr (std::is_same_v<T, GeoCircle>) {
                    return circle_intersects(s, rect);
                } else {
                    return polygon_intersects(s, rect);
                }
            },
            shape);
}

namespace geohash {

namespace {

constexpr char kBase32[] = "0123456789bcdefghjkmnpqrstuvwxyz";

void check_precision(int precision) {
    if (precision < 1 || precision > kMaxPrecision) {
        throw InvalidInput("geohash precision must be in [1, 12]");
    }
}

std::uint32_t axis_index(double v, double lo, double span, int bits) {
    const std::uint32_t cells = 1u << bits;
    const double f = std::floor((v - lo) / span * static_cast<double>(cells));
    if (!(f >= 0.0)) return 0;
    if (f >= static_cast<double>(cells)) return cells - 1;
    return static_cast<std::uint32_t>(f);
}

} // namespace

int lon_bits(int precision) { return (5 * precision + 1) / 2; }
int lat_bits(int precision) { return 5 * precision / 2; }

std::uint32_t lon_index(double lon, int precision) {
    check_precision(precision);
    return axis_index(lon, -180.0, 360.0, lon_bits(precision));
}

std::uint32_t lat_index(double lat, int precision) {
    check_precision(precision);
    return axis_index(lat, -90.0, 180.0, lat_bits(precision));
}

std::uint64_t interleave(std::uint32_t lon_idx, std::uint32_t lat_idx, int precision) {
    int lo = lon_bits(precision);
    int la = lat_bits(precision);
    std::uint64_t cell = 0;
    for (int k = 0; k < 5 * precision; ++k) {
        std::uint64_t bit;
        if (k % 2 == 0) {
            bit = (lon_idx >> --lo) & 1u;
        } else {
            bit = (lat_idx >> --la) & 1u;
        }
        cell = (cell << 1) | bit;
    }
    return cell;
}

void deinterleave(std::uint64_t cell, int precision, std::uint32_t& lon_idx,
                  std::uint32_t& lat_idx) {
    lon_idx = 0;
    lat_idx = 0;
    const int total = 5 * precision;
    for (int k = 0; k < total; ++k) {
        const std::uint32_t bit = (cell >> (total - 1 - k)) & 1u;
        if (k % 2 == 0) {
            lon_idx = (lon_idx << 1) | bit;
        } else {
            lat_idx = (lat_idx << 1) | bit;
        }
    }
}

std::uint64_t cell_of(GeoPoint p, int precision) {
    return interleave(lon_index(p.lon, precision), lat_index(p.lat, precision), precision);
}

CellRange cells_covering(const GeoRect& rect, int precision) {
    return {lon_index(rect.min_lon, precision), lon_index(rect.max_lon, precision),
            lat_index(rect.min_lat, precision), lat_index(rect.max_lat, precision)};
}

std::string to_string(std::uint64_t cell, int precision) {
    check_precision(precision);
    std::string out(static_cast<std::size_t>(precision), '0');
    for (int i = precision - 1; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kBase32[cell & 31u];
        cell >>= 5;
    }
    return out;
}

std::uint64_t from_string(const std::string& hash) {
    check_precision(static_cast<int>(hash.size()));
    std::uint64_t cell = 0;
    for (char c : hash) {
        const char* pos = std::char_traits<char>::find(kBase32, 32, c);
        if (pos == nullptr) {
            throw InvalidInput("invalid geohash character '" + std::string(1, c) + "'");
        }
        cell = (cell << 5) | static_cast<std::uint64_t>(pos - kBase32);
    }
    return cell;
}

std::string encode(GeoPoint p, int precision) {
    check_point(p, "point");
    return to_string(cell_of(p, precision), precision);
}

GeoRect cell_rect(std::uint64_t cell, int precision) {
    check_precision(precision);
    std::uint32_t lo_i, la_i;
    deinterleave(cell, precision, lo_i, la_i);
    const double wlon = 360.0 / static_cast<double>(1u << lon_bits(precision));
    const double wlat = 180.0 / static_cast<double>(1u << lat_bits(precision));
    return {-180.0 + lo_i * wlon, -90.0 + la_i * wlat, -180.0 + (lo_i + 1) * wlon,
            -90.0 + (la_i + 1) * wlat};
}

} // namespace geohash

} // namespace hashcube
