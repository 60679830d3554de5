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

#include "hashcube/catalog/json_codec.hpp"

#include <algorithm>

#include "hashcube/error.hpp"

namespace hashcube {

namespace {

class Collector {
public:
    void add(std::string field, std::string message) {
        errors_.push_back({std::move(field), std::move(message)});
    }
    bool ok() const { return errors_.empty(); }
    void raise() {
        if (!errors_.empty()) throw ValidationError(std::move(errors_));
    }
    void absorb(const ValidationError& e) {
        errors_.insert(errors_.end(), e.fields.begin(), e.fields.end());
    }

private:
    std::vector<FieldError> errors_;
};

const Json* member(const Json& j, const char* key) {
    auto it = j.find(key);
    return it == j.end() || it->is_null() ? nullptr : &*it;
}

std::optional<double> number(const Json& j, const char* key, const std::string& prefix,
                             Collector& c) {
    const Json* v = member(j, key);
    if (v == nullptr) {
        c.add(prefix + key, "required");
        return std::nullopt;
    }
    if (!v->is_number()) {
        c.add(prefix + key, "must be a number");
        return std::nullopt;
    }
    return v->get<double>();
}

std::optional<std::string> string(const Json& j, const char* key, const std::string& prefix,
                                  Collector& c, bool required = true) {
    const Json* v = member(j, key);
    if (v == nullptr) {
        if (required) c.add(prefix + key, "required");
        return std::nullopt;
    }
    if (!v->is_string()) {
        c.add(prefix + key, "must be a string");
        return std::nullopt;
    }
    return v->get<std::string>();
}

std::optional<GeoPoint> point(const Json& j, const std::string& field, Collector& c) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
        c.add(field, "must be [lon, lat]");
        return std::nullopt;
    }
    return GeoPoint{j[0].get<double>(), j[1].get<double>()};
}

Json point_to_json(GeoPoint p) { return Json::array({p.lon, p.lat}); }

std::optional<std::size_t> count(const Json& j, const char* key, Collector& c) {
    const Json* v = member(j, key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_number_integer() || (v->is_number_integer() && v->get<long long>() < 0)) {
        c.add(key, "must be a non-negative integer");
        return std::nullopt;
    }
    return v->get<std::size_t>();
}

template <class T, class Parse>
std::optional<std::vector<T>> enum_list(const Json& j, const char* key, Collector& c,
                                        Parse parse) {
    const Json* v = member(j, key);
    if (v == nullptr) return std::nullopt;
    if (!v->is_array()) {
        c.add(key, "must be an array");
        return std::nullopt;
    }
    std::vector<T> out;
    for (std::size_t i = 0; i < v->size(); ++i) {
        const std::string field = std::string(key) + "[" + std::to_string(i) + "]";
        if (!(*v)[i].is_string()) {
            c.add(field, "must be a string");
            continue;
        }
        try {
            out.push_back(parse((*v)[i].template get<std::string>()));
        } catch (const InvalidInput& e) {
            c.add(field, e.what());
        }
    }
    return out;
}

} // namespace

Json rect_to_json(const GeoRect& r) {
    return {{"min_lon", r.min_lon}, {"min_lat", r.min_lat}, {"max_lon", r.max_lon},
            {"max_lat", r.max_lat}};
}

GeoRect rect_from_json(const Json& j, const std::string& prefix) {
    Collector c;
    if (!j.is_object()) {
        c.add(prefix, "must be an object");
        c.raise();
    }
    const std::string p = prefix + ".";
    GeoRect r;
    r.min_lon = number(j, "min_lon", p, c).value_or(0.0);
    r.min_lat = number(j, "min_lat", p, c).value_or(0.0);
    r.max_lon = number(j, "max_lon", p, c).value_or(0.0);
    r.max_lat = number(j, "max_lat", p, c).value_or(0.0);
    if (c.ok()) {
        try {
            r.validate();
        } catch (const InvalidInput& e) {
            c.add(prefix, e.what());
        }
    }
    c.raise();
    return r;
}

Json shape_to_json(const SpatialShape& shape) {
    return std::visit(
            [](const auto& s) -> Json {
                using T = std::decay_t<decltype(s)>;
                if constexpr (std::is_same_v<T, GeoRect>) {
                    return {{"type", "rectangle"},
                            {"corners", Json::array({point_to_json({s.min_lon, s.min_lat}),
                                                     point_to_json({s.max_lon, s.max_lat})})}};
                } else if constexpr (std::is_same_v<T, GeoCircle>) {
                    return {{"type", "circle"},
                            {"center", point_to_json(s.center)},
                            {"radius_m", s.radius_m}};
                } else {
                    Json v = Json::array();
                    for (const auto& p : s.vertices) v.push_back(point_to_json(p));
                    return {{"type", "polygon"}, {"vertices", v}};
                }
            },
            shape);
}

SpatialShape shape_from_json(const Json& j, const std::string& prefix) {
    Collector c;
    if (!j.is_object()) {
        c.add(prefix, "must be an object");
        c.raise();
    }
    const auto type = string(j, "type", prefix + ".", c);
    c.raise();
    SpatialShape shape;
    if (*type == "rectangle") {
        const Json* corners = member(j, "corners");
        if (corners == nullptr || !corners->is_array() || corners->size() != 2) {
            c.add(prefix + ".corners", "must hold two [lon, lat] corners");
            c.raise();
        }
        auto a = point((*corners)[0], prefix + ".corners[0]", c);
        auto b = point((*corners)[1], prefix + ".corners[1]", c);
        c.raise();
        shape = GeoRect::from_corners(*a, *b);
    } else if (*type == "circle") {
        const Json* center = member(j, "center");
        std::optional<GeoPoint> p;
        if (center == nullptr) {
            c.add(prefix + ".center", "required");
        } else {
            p = point(*center, prefix + ".center", c);
        }
        auto r = number(j, "radius_m", prefix + ".", c);
        c.raise();
        shape = GeoCircle{*p, *r};
    } else if (*type == "polygon") {
        const Json* vertices = member(j, "vertices");
        if (vertices == nullptr || !vertices->is_array()) {
            c.add(prefix + ".vertices", "must be an array of [lon, lat]");
            c.raise();
        }
        GeoPolygon poly;
        for (std::size_t i = 0; i < vertices->size(); ++i) {
            auto p = point((*vertices)[i], prefix + ".vertices[" + std::to_string(i) + "]", c);
            if (p) poly.vertices.push_back(*p);
        }
        c.raise();
        shape = std::move(poly);
    } else {
        c.add(prefix + ".type", "must be rectangle, circle or polygon");
        c.raise();
    }
    try {
        normalize_shape(shape);
    } catch (const InvalidInput& e) {
        c.add(prefix, e.what());
    }
    c.raise();
    return shape;
}

Json record_to_json(const PatchRecord& r, const LabelHierarchy& h) {
    return {{"patch_name", r.patch_name},
            {"bounds", rect_to_json(r.bounds)},
            {"labels", h.decode(r.labels)},
            {"acquisition_date", r.acquisition_date.to_string()},
            {"season", to_string(r.season)},
            {"satellite", to_string(r.satellite)},
            {"country", r.country}};
}

PatchRecord record_from_json(const Json& j, const LabelHierarchy& h, const std::string& prefix) {
    Collector c;
    if (!j.is_object()) {
        c.add(prefix.empty() ? "record" : prefix, "must be an object");
        c.raise();
    }
    PatchRecord r;
    if (auto name = string(j, "patch_name", prefix, c)) {
        if (name->empty()) c.add(prefix + "patch_name", "must be non-empty");
        r.patch_name = std::move(*name);
    }
    if (const Json* b = member(j, "bounds")) {
        try {
            r.bounds = rect_from_json(*b, prefix + "bounds");
        } catch (const ValidationError& e) {
            c.absorb(e);
        }
    } else {
        c.add(prefix + "bounds", "required");
    }
    const Json* labels = member(j, "labels");
    if (labels == nullptr || !labels->is_array() || labels->empty()) {
        c.add(prefix + "labels", "must be a non-empty array of leaf labels");
    } else {
        std::string chars;
        for (std::size_t i = 0; i < labels->size(); ++i) {
            const std::string field = prefix + "labels[" + std::to_string(i) + "]";
            if (!(*labels)[i].is_string()) {
                c.add(field, "must be a string");
                continue;
            }
            const auto name = (*labels)[i].get<std::string>();
            if (!h.is_leaf(name)) {
                c.add(field, "unknown label: " + name);
                continue;
            }
            chars.push_back(h.leaf_char(name));
        }
        r.labels = LabelSet::from_chars(std::move(chars));
    }
    if (auto date = string(j, "acquisition_date", prefix, c)) {
        try {
            r.acquisition_date = Date::parse(*date);
        } catch (const InvalidInput& e) {
            c.add(prefix + "acquisition_date", e.what());
        }
    }
    r.season = season_of(r.acquisition_date);
    if (auto season = string(j, "season", prefix, c, false)) {
        try {
            r.season = parse_season(*season);
        } catch (const InvalidInput& e) {
            c.add(prefix + "season", e.what());
        }
    }
    if (auto sat = string(j, "satellite", prefix, c)) {
        try {
            r.satellite = parse_satellite(*sat);
        } catch (const InvalidInput& e) {
            c.add(prefix + "satellite", e.what());
        }
    }
    if (auto country = string(j, "country", prefix, c)) r.country = std::move(*country);
    c.raise();
    return r;
}

Query query_from_json(const Json& j, const LabelHierarchy& h,
                      std::initializer_list<std::string_view> extra_keys) {
    static constexpr std::string_view kKeys[] = {"shape",      "date_range",      "seasons",
                                                 "satellites", "label_predicate", "page",
                                                 "page_size"};
    Collector c;
    if (!j.is_object()) {
        c.add("body", "must be a JSON object");
        c.raise();
    }
    for (const auto& [key, value] : j.items()) {
        const bool known = std::find(std::begin(kKeys), std::end(kKeys), key) != std::end(kKeys) ||
                           std::find(extra_keys.begin(), extra_keys.end(), key) != extra_keys.end();
        if (!known) c.add(key, "unknown field");
    }
    Query q;
    if (const Json* s = member(j, "shape")) {
        try {
            q.shape = shape_from_json(*s, "shape");
        } catch (const ValidationError& e) {
            c.absorb(e);
        }
    }
    if (const Json* d = member(j, "date_range")) {
        if (!d->is_object()) {
            c.add("date_range", "must be an object with start and end");
        } else {
            DateRange range;
            bool ok = true;
            const std::pair<const char*, Date*> slots[] = {{"start", &range.start},
                                                           {"end", &range.end}};
            for (auto [key, slot] : slots) {
                auto text = string(*d, key, "date_range.", c);
                if (!text) {
                    ok = false;
                    continue;
                }
                try {
                    *slot = Date::parse(*text);
                } catch (const InvalidInput& e) {
                    c.add(std::string("date_range.") + key, e.what());
                    ok = false;
                }
            }
            if (ok) q.date_range = range;
        }
    }
    q.seasons = enum_list<Season>(j, "seasons", c, [](const std::string& s) { return parse_season(s); });
    q.satellites = enum_list<Satellite>(j, "satellites", c,
                                        [](const std::string& s) { return parse_satellite(s); });
    if (const Json* lp = member(j, "label_predicate")) {
        if (!lp->is_object()) {
            c.add("label_predicate", "must be an object");
        } else {
            if (auto op = string(*lp, "operator", "label_predicate.", c)) {
                try {
                    q.label_predicate.op = parse_label_operator(*op);
                } catch (const InvalidInput& e) {
                    c.add("label_predicate.operator", e.what());
                }
            }
            if (const Json* sel = member(*lp, "selected")) {
                if (!sel->is_array()) {
                    c.add("label_predicate.selected", "must be an array of labels");
                } else {
                    std::vector<std::string> ids;
                    for (std::size_t i = 0; i < sel->size(); ++i) {
                        const std::string field =
                                "label_predicate.selected[" + std::to_string(i) + "]";
                        if (!(*sel)[i].is_string()) {
                            c.add(field, "must be a string");
                            continue;
                        }
                        auto id = (*sel)[i].get<std::string>();
                        if (!h.find_node(id)) {
                            c.add(field, "unknown label: " + id);
                            continue;
                        }
                        ids.push_back(std::move(id));
                    }
                    q.label_predicate.selected = h.expand_selection(ids);
                }
            }
        }
    }
    if (auto page = count(j, "page", c)) q.page = *page;
    if (auto size = count(j, "page_size", c)) q.page_size = *size;
    if (c.ok()) {
        try {
            q.validate();
        } catch (const ValidationError& e) {
            c.absorb(e);
        }
    }
    c.raise();
    return q;
}

Json query_to_json(const Query& q, const LabelHierarchy& h) {
    Json j = Json::object();
    if (q.shape) j["shape"] = shape_to_json(*q.shape);
    if (q.date_range) {
        j["date_range"] = {{"start", q.date_range->start.to_string()},
                           {"end", q.date_range->end.to_string()}};
    }
    if (q.seasons) {
        Json a = Json::array();
        for (Season s : *q.seasons) a.push_back(to_string(s));
        j["seasons"] = a;
    }
    if (q.satellites) {
        Json a = Json::array();
        for (Satellite s : *q.satellites) a.push_back(to_string(s));
        j["satellites"] = a;
    }
    j["label_predicate"] = {{"operator", to_string(q.label_predicate.op)},
                            {"selected", h.decode(q.label_predicate.selected)}};
    j["page"] = q.page;
    j["page_size"] = q.page_size;
    return j;
}

Json stats_to_json(const LabelStats& stats) {
    Json j = Json::object();
    for (const auto& [label, lc] : stats) {
        j[label] = {{"count", lc.count}, {"colorHex", lc.color}};
    }
    return j;
}

Json field_errors_to_json(const std::vector<FieldError>& errors) {
    Json a = Json::array();
    for (const auto& e : errors) a.push_back({{"field", e.field}, {"message", e.message}});
    return a;
}

} // namespace hashcube
