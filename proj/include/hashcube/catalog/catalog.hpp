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

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hashcube/catalog/geo.hpp"
#include "hashcube/catalog/geo_index.hpp"
#include "hashcube/catalog/label_hierarchy.hpp"

namespace hashcube {

struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    /// Strict YYYY-MM-DD; throws InvalidInput.
    static Date parse(std::string_view text);
    std::string to_string() const;
    bool valid() const;

    friend auto operator<=>(const Date&, const Date&) = default;
};

enum class Season { Winter, Spring, Summer, Autumn };
enum class Satellite { S1, S2 };

std::string_view to_string(Season s);
std::string_view to_string(Satellite s);
/// Throw InvalidInput on unknown names.
Season parse_season(std::string_view s);
Satellite parse_satellite(std::string_view s);

/// Northern-hemisphere meteorological seasons: Dec-Feb winter, Mar-May
/// spring, Jun-Aug summer, Sep-Nov autumn.
Season season_of(const Date& d);

struct PatchRecord {
    std::string patch_name;
    GeoRect bounds;
    LabelSet labels;
    Date acquisition_date;
    Season season = Season::Winter;
    Satellite satellite = Satellite::S2;
    std::string country;

    friend bool operator==(const PatchRecord&, const PatchRecord&) = default;
};

enum class LabelOperator { None, Some, Exactly, AtLeastAndMore };

std::string_view to_string(LabelOperator op);
LabelOperator parse_label_operator(std::string_view s);

struct LabelPredicate {
    LabelOperator op = LabelOperator::None;
    LabelSet selected;
};

bool matches_labels(const LabelPredicate& pred, const LabelSet& patch_labels);

struct DateRange {
    Date start;
    Date end;
};

struct Query {
    static constexpr std::size_t kMaxPageSize = 50;

    std::optional<SpatialShape> shape;
    std::optional<DateRange> date_range;
    std::optional<std::vector<Season>> seasons;
    std::optional<std::vector<Satellite>> satellites;
    LabelPredicate label_predicate;
    std::size_t page = 0;
    std::size_t page_size = kMaxPageSize;

    /// Throws ValidationError naming every offending field.
    void validate() const;
};

struct LabelCount {
    std::size_t count = 0;
    std::string color;

    friend bool operator==(const LabelCount&, const LabelCount&) = default;
};

/// Leaf name -> occurrences, ordered by name.
using LabelStats = std::map<std::string, LabelCount>;

/// Counts each leaf once per record that carries it.
LabelStats label_histogram(const LabelHierarchy& h, std::span<const PatchRecord* const> records);
LabelStats label_histogram(const LabelHierarchy& h, std::span<const PatchRecord> records);

struct QueryResult {
    std::size_t total = 0;
    std::vector<const PatchRecord*> page;
    LabelStats stats;
};

/// Immutable record store: records ordered by patch_name, with a geohash
/// index over their bounds. Safe for concurrent reads.
class Catalog {
public:
    /// Throws ValidationError for invalid records and DuplicateKey for a
    /// repeated name.
    Catalog(LabelHierarchy hierarchy, std::vector<PatchRecord> records,
            int geohash_precision = geohash::kDefaultPrecision);

    const LabelHierarchy& hierarchy() const { return hierarchy_; }
    std::span<const PatchRecord> records() const { return records_; }
    std::size_t size() const { return records_.size(); }
    const GeoIndex& geo_index() const { return geo_; }

    const PatchRecord* find(std::string_view name) const;

    /// Full match set in name order.
    std::vector<const PatchRecord*> match(const Query& q) const;
    QueryResult execute(const Query& q) const;

    /// Record-store vs. index consistency; empty means consistent.
    std::vector<std::string> audit() const;

private:
    LabelHierarchy hierarchy_;
    std::vector<PatchRecord> records_;
    std::unordered_map<std::string, std::size_t> by_name_;
    GeoIndex geo_;
};

/// Throws ValidationError with field paths prefixed by `prefix`.
void validate_record(const PatchRecord& r, const std::string& prefix = "");

/// Conjunction of every active filter in `q` for a single record.
bool matches_filters(const Query& q, const PatchRecord& r);

} // namespace hashcube
