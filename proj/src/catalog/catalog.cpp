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

#include "hashcube/catalog/catalog.hpp"

#include <algorithm>
#include <cstdio>

#include "hashcube/error.hpp"

namespace hashcube {

namespace {

bool is_leap(int y) { return (y % 4 == 0 && y % 100 != 0) || y % 400 == 0; }

int days_in_month(int y, int m) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return m == 2 && is_leap(y) ? 29 : kDays[m - 1];
}

template <class T>
bool contains(const std::vector<T>& v, T x) {
    return std::find(v.begin(), v.end(), x) != v.end();
}

} // namespace

Date Date::parse(std::string_view text) {
    auto digits = [&](std::size_t from, std::size_t n) {
        int v = 0;
        for (std::size_t i = from; i < from + n; ++i) {
            const char c = text[i];
            if (c < '0' || c > '9') throw InvalidInput("date must be YYYY-MM-DD");
            v = v * 10 + (c - '0');
        }
        return v;
    };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw InvalidInput("date must be YYYY-MM-DD");
    }
    Date d{digits(0, 4), digits(5, 2), digits(8, 2)};
    if (!d.valid()) {
        throw InvalidInput("no such calendar date: " + std::string(text));
    }
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", year, month, day);
    return buf;
}

bool Date::valid() const {
    return year >= 0 && year <= 9999 && month >= 1 && month <= 12 && day >= 1 &&
           day <= days_in_month(year, month);
}

std::string_view to_string(Season s) {
    switch (s) {
    case Season::Winter: return "winter";
    case Season::Spring: return "spring";
    case Season::Summer: return "summer";
    case Season::Autumn: return "autumn";
    }
    return "winter";
}

std::string_view to_string(Satellite s) { return s == Satellite::S1 ? "S1" : "S2"; }

Season parse_season(std::string_view s) {
    for (Season v : {Season::Winter, Season::Spring, Season::Summer, Season::Autumn}) {
        if (s == to_string(v)) return v;
    }
    throw InvalidInput("unknown season '" + std::string(s) +
                       "', expected winter, spring, summer or autumn");
}

Satellite parse_satellite(std::string_view s) {
    if (s == "S1") return Satellite::S1;
    if (s == "S2") return Satellite::S2;
    throw InvalidInput("unknown satellite '" + std::string(s) + "', expected S1 or S2");
}

Season season_of(const Date& d) {
    switch (d.month) {
    case 12: case 1: case 2: return Season::Winter;
    case 3: case 4: case 5: return Season::Spring;
    case 6: case 7: case 8: return Season::Summer;
    default: return Season::Autumn;
    }
}

std::string_view to_string(LabelOperator op) {
    switch (op) {
    case LabelOperator::None: return "None";
    case LabelOperator::Some: return "Some";
    case LabelOperator::Exactly: return "Exactly";
    case LabelOperator::AtLeastAndMore: return "AtLeastAndMore";
    }
    return "None";
}

LabelOperator parse_label_operator(std::string_view s) {
    for (LabelOperator op : {LabelOperator::None, LabelOperator::Some, LabelOperator::Exactly,
                             LabelOperator::AtLeastAndMore}) {
        if (s == to_string(op)) return op;
    }
    throw InvalidInput("unknown operator '" + std::string(s) +
                       "', expected None, Some, Exactly or AtLeastAndMore");
}

bool matches_labels(const LabelPredicate& pred, const LabelSet& patch_labels) {
    switch (pred.op) {
    case LabelOperator::None: return true;
    case LabelOperator::Some: return patch_labels.intersects(pred.selected);
    case LabelOperator::Exactly: return patch_labels == pred.selected;
    case LabelOperator::AtLeastAndMore: return patch_labels.includes(pred.selected);
    }
    return false;
}

void Query::validate() const {
    std::vector<FieldError> errors;
    if (shape) {
        try {
            validate_shape(*shape);
        } catch (const InvalidInput& e) {
            errors.push_back({"shape", e.what()});
        }
    }
    if (date_range) {
        if (!date_range->start.valid()) errors.push_back({"date_range.start", "invalid date"});
        if (!date_range->end.valid()) errors.push_back({"date_range.end", "invalid date"});
        if (date_range->end < date_range->start) {
            errors.push_back({"date_range", "start must not be after end"});
        }
    }
    if (seasons && seasons->empty()) {
        errors.push_back({"seasons", "must list at least one season when present"});
    }
    if (satellites && satellites->empty()) {
        errors.push_back({"satellites", "must list at least one satellite when present"});
    }
    if (label_predicate.op != LabelOperator::None && label_predicate.selected.empty()) {
        errors.push_back({"label_predicate.selected",
                          "must be non-empty unless operator is None"});
    }
    if (page_size < 1 || page_size > kMaxPageSize) {
        errors.push_back({"page_size", "must be in [1, 50], got " + std::to_string(page_size)});
    }
    if (!errors.empty()) throw ValidationError(std::move(errors));
}

LabelStats label_histogram(const LabelHierarchy& h, std::span<const PatchRecord* const> records) {
    std::vector<std::size_t> counts(h.leaf_count(), 0);
    for (const PatchRecord* r : records) {
        for (char c : r->labels.chars()) {
            ++counts.at(static_cast<std::size_t>(c - LabelHierarchy::kFirstChar));
        }
    }
    LabelStats stats;
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] == 0) continue;
        const char c = static_cast<char>(LabelHierarchy::kFirstChar + static_cast<int>(i));
        stats.emplace(h.leaf_name(c), LabelCount{counts[i], h.leaf_color(c)});
    }
    return stats;
}

LabelStats label_histogram(const LabelHierarchy& h, std::span<const PatchRecord> records) {
    std::vector<const PatchRecord*> ptrs;
    ptrs.reserve(records.size());
    for (const auto& r : records) ptrs.push_back(&r);
    return label_histogram(h, std::span<const PatchRecord* const>(ptrs));
}

void validate_record(const PatchRecord& r, const std::string& prefix) {
    std::vector<FieldError> errors;
    if (r.patch_name.empty()) errors.push_back({prefix + "patch_name", "must be non-empty"});
    try {
        r.bounds.validate();
    } catch (const InvalidInput& e) {
        errors.push_back({prefix + "bounds", e.what()});
    }
    if (r.labels.empty()) errors.push_back({prefix + "labels", "must be non-empty"});
    if (!r.acquisition_date.valid()) {
        errors.push_back({prefix + "acquisition_date", "invalid date"});
    }
    if (!errors.empty()) throw ValidationError(std::move(errors));
}

bool matches_filters(const Query& q, const PatchRecord& r) {
    if (q.shape && !intersects(*q.shape, r.bounds)) return false;
    if (q.date_range &&
        (r.acquisition_date < q.date_range->start || q.date_range->end < r.acquisition_date)) {
        return false;
    }
    if (q.seasons && !contains(*q.seasons, r.season)) return false;
    if (q.satellites && !contains(*q.satellites, r.satellite)) return false;
    return matches_labels(q.label_predicate, r.labels);
}

Catalog::Catalog(LabelHierarchy hierarchy, std::vector<PatchRecord> records,
                 int geohash_precision)
        : hierarchy_(std::move(hierarchy)), records_(std::move(records)), geo_(geohash_precision) {
    std::sort(records_.begin(), records_.end(),
              [](const PatchRecord& a, const PatchRecord& b) { return a.patch_name < b.patch_name; });
    by_name_.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const PatchRecord& r = records_[i];
        validate_record(r, "records[" + r.patch_name + "].");
        for (char c : r.labels.chars()) hierarchy_.leaf_name(c);
        if (!by_name_.emplace(r.patch_name, i).second) throw DuplicateKey(r.patch_name);
        geo_.insert(static_cast<GeoIndex::Id>(i), r.bounds);
    }
}

const PatchRecord* Catalog::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &records_[it->second];
}

std::vector<const PatchRecord*> Catalog::match(const Query& q) const {
    q.validate();
    std::vector<const PatchRecord*> out;
    if (q.shape) {
        for (GeoIndex::Id id : geo_.query(*q.shape)) {
            if (matches_filters(q, records_[id])) out.push_back(&records_[id]);
        }
    } else {
        for (const auto& r : records_) {
            if (matches_filters(q, r)) out.push_back(&r);
        }
    }
    return out;
}

QueryResult Catalog::execute(const Query& q) const {
    const auto all = match(q);
    QueryResult result;
    result.total = all.size();
    result.stats = label_histogram(hierarchy_, all);
    const std::size_t begin = std::min(all.size(), q.page * q.page_size);
    const std::size_t end = std::min(all.size(), begin + q.page_size);
    result.page.assign(all.begin() + static_cast<std::ptrdiff_t>(begin),
                       all.begin() + static_cast<std::ptrdiff_t>(end));
    return result;
}

std::vector<std::string> Catalog::audit() const {
    std::vector<std::string> problems = geo_.audit();
    if (geo_.size() != records_.size()) {
        problems.push_back("geo index holds " + std::to_string(geo_.size()) +
                           " records, store holds " + std::to_string(records_.size()));
    }
    if (by_name_.size() != records_.size()) {
        problems.push_back("name map size differs from record count");
    }
    for (std::size_t i = 1; i < records_.size(); ++i) {
        if (!(records_[i - 1].patch_name < records_[i].patch_name)) {
            problems.push_back("records out of name order at " + records_[i].patch_name);
        }
    }
    return problems;
}

} // namespace hashcube
