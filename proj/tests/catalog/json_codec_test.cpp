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

#include <set>

#include "hashcube/catalog/json_codec.hpp"

namespace hashcube {
namespace {

std::set<std::string> fields_of(const ValidationError& e) {
    std::set<std::string> out;
    for (const auto& f : e.fields) out.insert(f.field);
    return out;
}

const LabelHierarchy& h() { return LabelHierarchy::builtin(); }

TEST(QueryJson, EmptyBodyIsPassAll) {
    const Query q = query_from_json(Json::object(), h());
    EXPECT_FALSE(q.shape);
    EXPECT_EQ(q.label_predicate.op, LabelOperator::None);
    EXPECT_EQ(q.page_size, 50u);
}

TEST(QueryJson, FullBodyRoundTrips) {
    const auto body = Json::parse(R"({
        "shape": {"type": "polygon", "vertices": [[0,40],[5,40],[5,45],[0,40]]},
        "date_range": {"start": "2017-06-01", "end": "2018-05-31"},
        "seasons": ["summer", "autumn"],
        "satellites": ["S2"],
        "label_predicate": {"operator": "Some", "selected": ["Forest"]},
        "page": 2, "page_size": 20})");
    const Query q = query_from_json(body, h());
    ASSERT_TRUE(q.shape);
    EXPECT_EQ(std::get<GeoPolygon>(*q.shape).vertices.size(), 3u);
    EXPECT_EQ(q.label_predicate.selected.size(), 3u);
    const Json out = query_to_json(q, h());
    EXPECT_EQ(out["label_predicate"]["selected"],
              Json({"Broad-leaved forest", "Coniferous forest", "Mixed forest"}));
    const Query again = query_from_json(out, h());
    EXPECT_EQ(query_to_json(again, h()).dump(), out.dump());
}

TEST(QueryJson, RectangleAndCircle) {
    auto q = query_from_json(Json::parse(R"({"shape": {"type": "rectangle", "corners": [[5,50],[1,45]]}})"), h());
    EXPECT_EQ(std::get<GeoRect>(*q.shape), (GeoRect{1, 45, 5, 50}));
    q = query_from_json(Json::parse(R"({"shape": {"type": "circle", "center": [5,50], "radius_m": 1000}})"), h());
    EXPECT_EQ(std::get<GeoCircle>(*q.shape).radius_m, 1000.0);
}

TEST(QueryJson, FieldLevelErrors) {
    const auto body = Json::parse(R"({
        "page_size": 51,
        "seasons": ["monsoon"],
        "label_predicate": {"operator": "Most", "selected": ["Moon dust"]},
        "shape": {"type": "circle", "center": [5, 50], "radius_m": -3},
        "colour": "red"})");
    try {
        query_from_json(body, h());
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(fields_of(e), (std::set<std::string>{"seasons[0]", "label_predicate.operator",
                                                       "label_predicate.selected[0]", "shape",
                                                       "colour"}));
    }
    try {
        query_from_json(Json::parse(R"({"page_size": 51})"), h());
        FAIL();
    } catch (const ValidationError& e) {
        ASSERT_EQ(e.fields.size(), 1u);
        EXPECT_EQ(e.fields[0].field, "page_size");
        EXPECT_NE(e.fields[0].message.find("50"), std::string::npos);
    }
}

TEST(QueryJson, ExtraKeysCanBeAllowed) {
    const auto body = Json::parse(R"({"render": true})");
    EXPECT_THROW(query_from_json(body, h()), ValidationError);
    EXPECT_NO_THROW(query_from_json(body, h(), {"render"}));
}

TEST(RecordJson, RoundTripAndSeasonDerivation) {
    const auto j = Json::parse(R"({"patch_name": "S2A_1_2", "bounds": {"min_lon": 1, "min_lat": 40,
        "max_lon": 1.01, "max_lat": 40.01}, "labels": ["Sea and ocean", "Airports"],
        "acquisition_date": "2018-01-15", "satellite": "S2", "country": "Portugal"})");
    const PatchRecord r = record_from_json(j, h());
    EXPECT_EQ(r.season, Season::Winter);
    EXPECT_EQ(r.labels.size(), 2u);
    const Json out = record_to_json(r, h());
    EXPECT_EQ(out["labels"], Json({"Airports", "Sea and ocean"}));
    EXPECT_EQ(record_from_json(out, h()), r);
}

TEST(RecordJson, ErrorsCarryPrefix) {
    const auto j = Json::parse(R"({"patch_name": "", "bounds": {"min_lon": 1, "min_lat": 40,
        "max_lon": 0, "max_lat": 40.01}, "labels": ["Forest"], "acquisition_date": "2018-13-15",
        "satellite": "S9"})");
    try {
        record_from_json(j, h(), "line 4: ");
        FAIL();
    } catch (const ValidationError& e) {
        EXPECT_EQ(fields_of(e), (std::set<std::string>{"line 4: patch_name", "line 4: bounds",
                                                       "line 4: labels[0]", "line 4: acquisition_date",
                                                       "line 4: satellite", "line 4: country"}));
    }
}

TEST(StatsJson, UsesColorHexKey) {
    LabelStats s;
    s["Pastures"] = {3, "#e6e64d"};
    EXPECT_EQ(stats_to_json(s).dump(), R"({"Pastures":{"colorHex":"#e6e64d","count":3}})");
}

} // namespace
} // namespace hashcube
