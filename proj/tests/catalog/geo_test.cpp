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

#include <gtest/gtest.h>

#include <random>

#include "geo_oracle.hpp"
#include "hashcube/catalog/geo.hpp"
#include "hashcube/catalog/geo_index.hpp"
#include "hashcube/error.hpp"

namespace hashcube {
namespace {

TEST(Geohash, KnownVectors) {
    EXPECT_EQ(geohash::encode({10.40744, 57.64911}, 11), "u4pruydqqvj");
    EXPECT_EQ(geohash::encode({-5.6, 42.6}, 5), "ezs42");
    EXPECT_EQ(geohash::encode({-0.1275, 51.5072}, 6), "gcpvj0");
}

TEST(Geohash, StringAndCellRoundTrip) {
    const auto cell = geohash::cell_of({13.4, 52.5}, 5);
    EXPECT_EQ(geohash::from_string(geohash::to_string(cell, 5)), cell);
    const auto r = geohash::cell_rect(cell, 5);
    EXPECT_TRUE(r.contains({13.4, 52.5}));
    EXPECT_NEAR(r.max_lon - r.min_lon, 360.0 / 8192.0, 1e-12);
    EXPECT_NEAR(r.max_lat - r.min_lat, 180.0 / 4096.0, 1e-12);
    EXPECT_THROW(geohash::from_string("ezs4a"), InvalidInput);
    EXPECT_THROW(geohash::encode({0, 0}, 13), InvalidInput);
}

TEST(Geohash, CoversEdgesOfTheWorld) {
    EXPECT_EQ(geohash::lon_index(180.0, 5), 8191u);
    EXPECT_EQ(geohash::lat_index(90.0, 5), 4095u);
    EXPECT_EQ(geohash::lon_index(-180.0, 5), 0u);
}

TEST(Shapes, Validation) {
    EXPECT_THROW(validate_shape(GeoRect{0, 0, 200, 1}), InvalidInput);
    EXPECT_THROW(validate_shape(GeoRect{1, 0, 0, 1}), InvalidInput);
    EXPECT_THROW(validate_shape(GeoCircle{{0, 0}, 0.0}), InvalidInput);
    EXPECT_THROW(validate_shape(GeoCircle{{0, 95}, 10.0}), InvalidInput);
    EXPECT_THROW(validate_shape(GeoPolygon{{{0, 0}, {1, 1}}}), InvalidInput);
    // Bow tie.
    EXPECT_THROW(validate_shape(GeoPolygon{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}}), InvalidInput);
    // Collinear.
    EXPECT_THROW(validate_shape(GeoPolygon{{{0, 0}, {1, 1}, {2, 2}}}), InvalidInput);
    EXPECT_NO_THROW(validate_shape(GeoPolygon{{{0, 0}, {1, 0}, {1, 1}, {0, 1}}}));
}

TEST(Shapes, ClosingVertexIsDropped) {
    SpatialShape s = GeoPolygon{{{0, 0}, {1, 0}, {1, 1}, {0, 0}}};
    normalize_shape(s);
    EXPECT_EQ(std::get<GeoPolygon>(s).vertices.size(), 3u);
}

TEST(Shapes, RectangleTouchingCounts) {
    const GeoRect a{0, 0, 1, 1};
    EXPECT_TRUE(intersects(SpatialShape{GeoRect{1, 1, 2, 2}}, a));
    EXPECT_FALSE(intersects(SpatialShape{GeoRect{1.0001, 0, 2, 2}}, a));
}

TEST(Shapes, PolygonCasesWithoutVertexContainment) {
    const GeoRect r{0, 0, 1, 1};
    // Large triangle swallowing the rectangle.
    EXPECT_TRUE(intersects(SpatialShape{GeoPolygon{{{-5, -5}, {5, -5}, {0, 5}}}}, r));
    // Edge crossing only.
    EXPECT_TRUE(intersects(SpatialShape{GeoPolygon{{{-1, 0.5}, {2, 0.4}, {2, 0.6}}}}, r));
    // Concave notch around the rectangle.
    EXPECT_FALSE(intersects(
            SpatialShape{GeoPolygon{{{-2, -2}, {3, -2}, {3, 3}, {2, 3}, {2, -1}, {-1, -1}, {-1, 3}, {-2, 3}}}},
            GeoRect{0, 0, 1, 2}));
}

TEST(Shapes, CircleDistanceInMeters) {
    const GeoCircle c{{0.0, 0.0}, 111195.0};   // about one degree at the equator
    EXPECT_TRUE(intersects(SpatialShape{c}, GeoRect{0.99, -0.1, 2, 0.1}));
    EXPECT_FALSE(intersects(SpatialShape{c}, GeoRect{1.01, -0.1, 2, 0.1}));
    // At 60 degrees a degree of longitude is half as long.
    const GeoCircle north{{0.0, 60.0}, 111195.0};
    EXPECT_TRUE(intersects(SpatialShape{north}, GeoRect{1.99, 59.9, 3, 60.1}));
    EXPECT_FALSE(intersects(SpatialShape{north}, GeoRect{2.01, 59.9, 3, 60.1}));
}

TEST(Shapes, BoundingRectContainsShape) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 200; ++i) {
        const auto c = oracle::random_circle(rng);
        const auto box = bounding_rect(SpatialShape{c});
        // Probe a ring of points exactly on the circle.
        const double m = kEarthRadiusM * std::numbers::pi / 180.0;
        for (int k = 0; k < 32; ++k) {
            const double a = k * std::numbers::pi / 16.0;
            const double lat = c.center.lat + c.radius_m * std::sin(a) / m * 0.999;
            const double lon = c.center.lon + c.radius_m * std::cos(a) /
                                                      (m * std::cos(c.center.lat * std::numbers::pi / 180.0)) * 0.999;
            EXPECT_TRUE(box.contains({lon, lat}));
        }
    }
}

TEST(Shapes, AgreeWithBruteForceOracles) {
    std::mt19937_64 rng(21);
    const auto rects = oracle::random_patches(2000, 5);
    std::size_t hits = 0;
    for (int q = 0; q < 30; ++q) {
        const auto rect = oracle::random_query_rect(rng);
        const auto circle = oracle::random_circle(rng);
        auto poly = oracle::random_polygon(rng);
        try {
            validate_shape(poly);
        } catch (const InvalidInput&) {
            continue;
        }
        for (const auto& r : rects) {
            ASSERT_EQ(intersects(SpatialShape{rect}, r), oracle::rect_meets_rect(rect, r));
            ASSERT_EQ(intersects(SpatialShape{circle}, r), oracle::circle_meets_rect(circle, r));
            const bool p = oracle::polygon_meets_rect(poly, r);
            ASSERT_EQ(intersects(SpatialShape{poly}, r), p);
            hits += p;
        }
    }
    EXPECT_GT(hits, 0u);
}

TEST(GeoIndex, QueryEqualsBruteForce) {
    const auto rects = oracle::random_patches(3000, 9);
    GeoIndex index;
    for (std::size_t i = 0; i < rects.size(); ++i) index.insert(static_cast<GeoIndex::Id>(i), rects[i]);
    EXPECT_TRUE(index.audit().empty());
    std::mt19937_64 rng(4);
    for (int q = 0; q < 20; ++q) {
        std::vector<SpatialShape> shapes = {oracle::random_query_rect(rng), oracle::random_circle(rng)};
        const auto poly = oracle::random_polygon(rng);
        try {
            validate_shape(poly);
            shapes.push_back(poly);
        } catch (const InvalidInput&) {
        }
        for (const auto& s : shapes) {
            std::vector<GeoIndex::Id> expected;
            for (std::size_t i = 0; i < rects.size(); ++i) {
                if (intersects(s, rects[i])) expected.push_back(static_cast<GeoIndex::Id>(i));
            }
            const auto got = index.query(s);
            EXPECT_EQ(got, expected);
            const auto cand = index.candidates(bounding_rect(s));
            EXPECT_TRUE(std::includes(cand.begin(), cand.end(), got.begin(), got.end()));
        }
    }
}

TEST(GeoIndex, WholeWorldReturnsEverything) {
    GeoIndex index;
    const auto rects = oracle::random_patches(500, 1);
    for (std::size_t i = 0; i < rects.size(); ++i) index.insert(static_cast<GeoIndex::Id>(i), rects[i]);
    EXPECT_EQ(index.query(GeoRect::world()).size(), rects.size());
}

TEST(GeoIndex, OversizedRecordsStayFindable) {
    GeoIndex index;
    index.insert(0, {-10, 35, 30, 70});
    index.insert(1, {5, 45, 5.01, 45.01});
    EXPECT_EQ(index.oversized_count(), 1u);
    EXPECT_TRUE(index.audit().empty());
    EXPECT_EQ(index.query(GeoRect{29, 69, 29.5, 69.5}), std::vector<GeoIndex::Id>{0});
    EXPECT_EQ(index.query(GeoRect{5, 45, 5.001, 45.001}), (std::vector<GeoIndex::Id>{0, 1}));
}

TEST(GeoIndex, RectangleOnCellBoundaryIsListedInBothCells) {
    GeoIndex index;
    const auto cell = geohash::cell_rect(geohash::cell_of({10.0, 50.0}, 5), 5);
    index.insert(0, {cell.max_lon - 1e-4, cell.min_lat + 1e-4, cell.max_lon + 1e-4, cell.min_lat + 2e-4});
    EXPECT_EQ(index.cell_count(), 2u);
    EXPECT_TRUE(index.audit().empty());
}

TEST(GeoIndex, RejectsSparseIds) {
    GeoIndex index;
    EXPECT_THROW(index.insert(3, {0, 0, 1, 1}), InvalidInput);
    EXPECT_THROW(GeoIndex(0), InvalidInput);
}

} // namespace
} // namespace hashcube
