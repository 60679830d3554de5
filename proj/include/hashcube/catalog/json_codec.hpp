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

#include <initializer_list>
#include <string>
#include <string_view>

#include "json.hpp"

#include "hashcube/catalog/catalog.hpp"
#include "hashcube/error.hpp"

namespace hashcube {

using Json = nlohmann::json;

/// Wire mapping of the catalog types. Field names are lower_snake_case;
/// decoders throw ValidationError with one entry per offending field, the
/// field path prefixed by `prefix`.
///
/// Shapes:
///   {"type": "rectangle", "corners": [[lon, lat], [lon, lat]]}
///   {"type": "circle", "center": [lon, lat], "radius_m": r}
///   {"type": "polygon", "vertices": [[lon, lat], ...]}
///
/// Records:
///   {"patch_name", "bounds": {"min_lon", "min_lat", "max_lon", "max_lat"},
///    "labels": [leaf names], "acquisition_date": "YYYY-MM-DD",
///    "season", "satellite": "S1"|"S2", "country"}

Json shape_to_json(const SpatialShape& shape);
SpatialShape shape_from_json(const Json& j, const std::string& prefix = "shape");

Json rect_to_json(const GeoRect& r);
GeoRect rect_from_json(const Json& j, const std::string& prefix);

Json record_to_json(const PatchRecord& r, const LabelHierarchy& h);
/// A missing season is derived from the acquisition month. Fields other
/// than the record's own are ignored; resolve labels through `h`.
PatchRecord record_from_json(const Json& j, const LabelHierarchy& h,
                             const std::string& prefix = "");

/// Query body. Keys outside the query schema are rejected unless listed in
/// `extra_keys`. label_predicate.selected accepts node codes or names at
/// any level and is expanded to leaves.
Query query_from_json(const Json& j, const LabelHierarchy& h,
                      std::initializer_list<std::string_view> extra_keys = {});
/// Inverse of query_from_json with selected written as leaf names.
Json query_to_json(const Query& q, const LabelHierarchy& h);

/// label -> {"count", "colorHex"}
Json stats_to_json(const LabelStats& stats);

Json field_errors_to_json(const std::vector<FieldError>& errors);

} // namespace hashcube
