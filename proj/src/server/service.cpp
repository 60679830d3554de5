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

#include "hashcube/server/service.hpp"

#include <algorithm>
#include <ctime>
#include <fstream>

#include "hashcube/catalog/json_codec.hpp"
#include "hashcube/detail/file_io.hpp"
#include "hashcube/detail/zip.hpp"
#include "hashcube/error.hpp"
#include "hashcube/hashcore/features.hpp"

namespace hashcube {

namespace fs = std::filesystem;

namespace {

Response json_response(const Json& j, int status = 200) {
    Response r;
    r.status = status;
    r.body = j.dump() + "\n";
    return r;
}

Json parse_body(std::string_view body) {
    if (body.find_first_not_of(" \t\r\n") == std::string_view::npos) return Json::object();
    Json j = Json::parse(body);
    if (!j.is_object()) throw ValidationError("body", "must be a JSON object");
    return j;
}

void check_session(const std::string& session) {
    const bool ok = !session.empty() && session.size() <= 64 &&
                    std::all_of(session.begin(), session.end(), [](char c) {
                        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                               (c >= '0' && c <= '9') || c == '-' || c == '_';
                    });
    if (!ok) throw ValidationError("session", "must be 1-64 characters of [A-Za-z0-9_-]");
}

std::optional<long long> integer_field(const Json& j, const char* key, long long lo, long long hi,
                                       std::vector<FieldError>& errors) {
    auto it = j.find(key);
    if (it == j.end() || it->is_null()) return std::nullopt;
    if (!it->is_number_integer()) {
        errors.push_back({key, "must be an integer"});
        return std::nullopt;
    }
    const long long v = it->get<long long>();
    if (v < lo || v > hi) {
        errors.push_back({key, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]"});
        return std::nullopt;
    }
    return v;
}

Json hierarchy_node(const LabelHierarchy& h, std::size_t index) {
    const auto& n = h.nodes()[index];
    Json j = {{"code", n.code}, {"name", n.name}, {"level", n.level}};
    Json children = Json::array();
    for (std::size_t c : n.children) children.push_back(hierarchy_node(h, c));
    j["children"] = children;
    if (n.children.empty()) j["color"] = n.color;
    return j;
}

std::string image_url(const std::string& name, const char* kind) {
    return "/api/image/" + name + "?kind=" + kind;
}

} // namespace

std::string utc_timestamp(std::chrono::system_clock::time_point t) {
    const std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

Response error_response(int status, const std::string& message, const std::vector<FieldError>& fields) {
    Json j = {{"error", message}};
    if (!fields.empty()) j["fields"] = field_errors_to_json(fields);
    return json_response(j, status);
}

Response guarded(const std::function<Response()>& fn) {
    try {
        return fn();
    } catch (const DimensionMismatch& e) {
        return error_response(422, e.what());
    } catch (const ValidationError& e) {
        return error_response(400, "validation failed", e.fields);
    } catch (const Json::exception& e) {
        return error_response(400, std::string("malformed JSON: ") + e.what());
    } catch (const NotFound& e) {
        return error_response(404, e.what());
    } catch (const UnknownLabel& e) {
        return error_response(400, e.what());
    } catch (const InvalidInput& e) {
        return error_response(400, e.what());
    } catch (const ParseError& e) {
        return error_response(400, e.what());
    } catch (const std::exception& e) {
        return error_response(500, e.what());
    }
}

// ---- CartStore

CartStore::CartStore(std::chrono::seconds idle, Clock clock) : idle_(idle), clock_(std::move(clock)) {}

std::shared_ptr<CartStore::Cart> CartStore::touch(const std::string& session) {
    const auto now = clock_();
    std::lock_guard lock(mutex_);
    for (auto it = carts_.begin(); it != carts_.end();) {
        std::lock_guard cart_lock(it->second->mutex);
        if (now - it->second->last_used > idle_) {
            it = carts_.erase(it);
        } else {
            ++it;
        }
    }
    auto& cart = carts_[session];
    if (!cart) cart = std::make_shared<Cart>();
    std::lock_guard cart_lock(cart->mutex);
    cart->last_used = now;
    return cart;
}

std::set<std::string> CartStore::add(const std::string& session, const std::vector<std::string>& names) {
    auto cart = touch(session);
    std::lock_guard lock(cart->mutex);
    cart->names.insert(names.begin(), names.end());
    return cart->names;
}

std::set<std::string> CartStore::get(const std::string& session) {
    auto cart = touch(session);
    std::lock_guard lock(cart->mutex);
    return cart->names;
}

std::size_t CartStore::session_count() {
    std::lock_guard lock(mutex_);
    return carts_.size();
}

// ---- FeedbackLog

FeedbackLog::FeedbackLog(fs::path path) : path_(std::move(path)) {
    std::error_code ec;
    if (!fs::exists(path_, ec)) return;
    const std::string text = detail::read_file_text(path_);
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t nl = text.find('\n', pos);
        if (nl == std::string::npos) nl = text.size();
        if (nl > pos) ++count_;
        pos = nl + 1;
    }
}

std::size_t FeedbackLog::append(const std::string& text, std::chrono::system_clock::time_point when) {
    const std::string line = Json{{"text", text}, {"timestamp", utc_timestamp(when)}}.dump() + "\n";
    std::lock_guard lock(mutex_);
    std::ofstream out(path_, std::ios::binary | std::ios::app);
    out << line;
    out.flush();
    if (!out) throw IoError("cannot append to " + path_.string());
    return ++count_;
}

std::size_t FeedbackLog::count() const {
    std::lock_guard lock(mutex_);
    return count_;
}

// ---- Service

Service::Service(std::shared_ptr<const ArchiveStore> store, ServiceOptions options)
        : store_(std::move(store)),
          options_(std::move(options)),
          carts_(options_.cart_idle, options_.clock),
          feedback_(store_->feedback_path()) {}

Query Service::parse_query(std::string_view body, bool* render) const {
    const Json j = parse_body(body);
    if (auto it = j.find("render"); it != j.end() && !it->is_null()) {
        if (!it->is_boolean()) throw ValidationError("render", "must be a boolean");
        if (render != nullptr) *render = it->get<bool>();
    }
    return query_from_json(j, store_->hierarchy(), {"render"});
}

Response Service::query(std::string_view body) const {
    return guarded([&] {
        bool render = false;
        const Query q = parse_query(body, &render);
        const QueryResult result = store_->catalog().execute(q);
        const auto& h = store_->hierarchy();
        Json page = Json::array();
        for (const PatchRecord* r : result.page) page.push_back(record_to_json(*r, h));
        const bool disabled = result.total > options_.render_cap;
        Json j = {{"total", result.total},
                  {"page", page},
                  {"page_number", q.page},
                  {"page_size", q.page_size},
                  {"stats", stats_to_json(result.stats)},
                  {"render_disabled", disabled}};
        if (render && !disabled) {
            Json refs = Json::array();
            for (const PatchRecord* r : result.page) {
                if (store_->rendered_image(r->patch_name)) {
                    refs.push_back({{"patch_name", r->patch_name},
                                    {"url", image_url(r->patch_name, "rendered")}});
                }
            }
            j["rendered"] = refs;
        }
        return json_response(j);
    });
}

Response Service::query_names(std::string_view body) const {
    return guarded([&] {
        const Query q = parse_query(body, nullptr);
        Response r;
        r.content_type = "text/plain; charset=utf-8";
        r.filename = "patch_names.txt";
        for (const PatchRecord* rec : store_->catalog().match(q)) {
            r.body += rec->patch_name;
            r.body += '\n';
        }
        return r;
    });
}

Response Service::stats(std::string_view body) const {
    return guarded([&] {
        const Query q = parse_query(body, nullptr);
        const auto all = store_->catalog().match(q);
        return json_response({{"total", all.size()},
                              {"stats", stats_to_json(label_histogram(store_->hierarchy(), all))}});
    });
}

Response Service::similar(std::string_view body) const {
    return guarded([&] {
        const Json j = parse_body(body);
        std::vector<FieldError> errors;
        for (const auto& [key, value] : j.items()) {
            if (key != "patch_name" && key != "features" && key != "bands" && key != "radius" && key != "k") {
                errors.push_back({key, "unknown field"});
            }
        }
        SimilarityRequest req;
        const int bits = static_cast<int>(store_->codes().code_bits());
        if (auto r = integer_field(j, "radius", 0, bits, errors)) req.radius = static_cast<int>(*r);
        if (auto k = integer_field(j, "k", 1, static_cast<long long>(options_.max_k), errors)) {
            req.k = static_cast<std::size_t>(*k);
        }
        if (j.contains("radius") && j.contains("k")) errors.push_back({"k", "give either radius or k"});

        const int sources = j.contains("patch_name") + j.contains("features") + j.contains("bands");
        if (sources != 1) {
            errors.push_back({"patch_name", "give exactly one of patch_name, features, bands"});
        }
        if (auto it = j.find("patch_name"); it != j.end()) {
            if (it->is_string()) {
                req.patch_name = it->get<std::string>();
            } else {
                errors.push_back({"patch_name", "must be a string"});
            }
        }
        if (auto it = j.find("features"); it != j.end()) {
            if (!it->is_array() || it->empty() ||
                !std::all_of(it->begin(), it->end(), [](const Json& v) { return v.is_number(); })) {
                errors.push_back({"features", "must be a non-empty array of numbers"});
            } else {
                req.features = it->get<FeatureVector>();
            }
        }
        if (auto it = j.find("bands"); it != j.end()) {
            if (!it->is_array() || it->empty()) {
                errors.push_back({"bands", "must be a non-empty array of band grids"});
            } else {
                for (std::size_t i = 0; i < it->size(); ++i) {
                    const Json& b = (*it)[i];
                    const std::string field = "bands[" + std::to_string(i) + "]";
                    if (!b.is_object() || !b.contains("band") || !b["band"].is_string() ||
                        !b.contains("width") || !b["width"].is_number_unsigned() ||
                        !b.contains("height") || !b["height"].is_number_unsigned() ||
                        !b.contains("values") || !b["values"].is_array()) {
                        errors.push_back({field, "must be {\"band\", \"width\", \"height\", \"values\"}"});
                        continue;
                    }
                    BandGrid g;
                    g.name = b["band"].get<std::string>();
                    g.width = b["width"].get<std::size_t>();
                    g.height = b["height"].get<std::size_t>();
                    for (const auto& v : b["values"]) {
                        if (!v.is_number()) {
                            errors.push_back({field + ".values", "must be numbers"});
                            break;
                        }
                        g.values.push_back(v.get<double>());
                    }
                    req.bands.push_back(std::move(g));
                }
            }
        }
        if (!errors.empty()) throw ValidationError(std::move(errors));
        return json_response(similar_json(req));
    });
}

Response Service::similar(const SimilarityRequest& request) const {
    return guarded([&] { return json_response(similar_json(request)); });
}

Json Service::similar_json(const SimilarityRequest& req) const {
    const CodeTable& codes = store_->codes();
    const HashingHead& head = store_->head();
    const int sources = req.patch_name.has_value() + req.features.has_value() + !req.bands.empty();
    if (sources != 1) throw ValidationError("patch_name", "give exactly one of patch_name, features, bands");
    if (req.radius && req.k) throw ValidationError("k", "give either radius or k");

    HashCode code;
    Json ref;
    if (req.patch_name) {
        const HashCode* stored = codes.find(*req.patch_name);
        if (stored == nullptr) throw NotFound("unknown patch '" + *req.patch_name + "'");
        code = *stored;
        ref = {{"patch_name", *req.patch_name}, {"source", "archive"}};
    } else {
        FeatureVector f;
        if (req.features) {
            if (req.features->size() != head.input_dim()) {
                throw DimensionMismatch(head.input_dim(), req.features->size());
            }
            f = *req.features;
        } else {
            for (const auto& b : req.bands) b.validate();
            f = extract_features(req.bands, head.input_dim());
        }
        code = infer_code(head, f);
        ref = {{"patch_name", nullptr}, {"source", "upload"}};
    }
    ref["code"] = code.to_hex();

    Json j = {{"query_ref", ref}};
    std::vector<Neighbor> hits;
    if (req.k) {
        if (*req.k < 1 || *req.k > options_.max_k) {
            throw ValidationError("k", "must be in [1, " + std::to_string(options_.max_k) + "]");
        }
        hits = codes.query_knn(code, *req.k);
        j["mode"] = "knn";
        j["k"] = *req.k;
    } else {
        const int r = req.radius.value_or(options_.default_radius);
        if (r < 0 || r > static_cast<int>(codes.code_bits())) {
            throw ValidationError("radius", "must be in [0, " + std::to_string(codes.code_bits()) + "]");
        }
        hits = codes.query_radius(code, r);
        j["mode"] = "radius";
        j["radius"] = r;
    }

    const auto& catalog = store_->catalog();
    Json neighbors = Json::array();
    std::vector<const PatchRecord*> others;
    for (const auto& n : hits) {
        const PatchRecord* rec = catalog.find(n.patch_name);
        if (rec == nullptr) throw Error("code store entry '" + n.patch_name + "' has no metadata");
        neighbors.push_back({{"patch_name", n.patch_name},
                             {"distance", n.distance},
                             {"record", record_to_json(*rec, store_->hierarchy())}});
        if (!req.patch_name || n.patch_name != *req.patch_name) others.push_back(rec);
    }
    j["total"] = hits.size();
    j["neighbors"] = neighbors;
    j["stats"] = stats_to_json(label_histogram(store_->hierarchy(), others));
    return j;
}

std::vector<std::uint8_t> Service::band_archive(const std::string& name) const {
    std::vector<detail::ZipEntry> entries;
    for (const auto& p : store_->band_files(name)) {
        entries.push_back({p.filename().string(), detail::read_file_bytes(p)});
    }
    return detail::zip_store(entries);
}

Response Service::image(std::string_view name, std::string_view kind) const {
    return guarded([&] {
        const std::string n(name);
        if (store_->catalog().find(n) == nullptr) throw NotFound("unknown patch '" + n + "'");
        Response r;
        if (kind.empty() || kind == "rendered") {
            const auto path = store_->rendered_image(n);
            if (!path) throw NotFound("no rendered image for '" + n + "'");
            const auto bytes = detail::read_file_bytes(*path);
            r.body.assign(bytes.begin(), bytes.end());
            r.content_type = "image/png";
            r.filename = n + ".png";
        } else if (kind == "bands") {
            const auto bytes = band_archive(n);
            r.body.assign(bytes.begin(), bytes.end());
            r.content_type = "application/zip";
            r.filename = n + ".zip";
        } else {
            throw ValidationError("kind", "must be rendered or bands");
        }
        return r;
    });
}

Response Service::cart_add(const std::string& session, std::string_view body) {
    return guarded([&] {
        check_session(session);
        const Json j = parse_body(body);
        for (const auto& [key, value] : j.items()) {
            if (key != "patch_names") throw ValidationError(key, "unknown field");
        }
        auto it = j.find("patch_names");
        if (it == j.end() || !it->is_array() ||
            !std::all_of(it->begin(), it->end(), [](const Json& v) { return v.is_string(); })) {
            throw ValidationError("patch_names", "must be an array of names");
        }
        if (it->size() > options_.cart_batch) {
            throw ValidationError("patch_names", "at most " + std::to_string(options_.cart_batch) +
                                                         " names per request, got " +
                                                         std::to_string(it->size()));
        }
        const auto names = it->get<std::vector<std::string>>();
        std::vector<std::string> unknown;
        for (const auto& n : names) {
            if (store_->catalog().find(n) == nullptr) unknown.push_back(n);
        }
        if (!unknown.empty()) {
            std::string msg = "unknown patch";
            for (std::size_t i = 0; i < unknown.size(); ++i) msg += (i ? ", '" : " '") + unknown[i] + "'";
            throw NotFound(msg);
        }
        const auto cart = carts_.add(session, names);
        return json_response({{"session", session}, {"size", cart.size()}, {"patch_names", cart}});
    });
}

Response Service::cart_get(const std::string& session) {
    return guarded([&] {
        check_session(session);
        const auto cart = carts_.get(session);
        return json_response({{"session", session}, {"size", cart.size()}, {"patch_names", cart}});
    });
}

Response Service::cart_download(const std::string& session) {
    return guarded([&] {
        check_session(session);
        std::vector<detail::ZipEntry> entries;
        for (const auto& n : carts_.get(session)) entries.push_back({n + ".zip", band_archive(n)});
        const auto bytes = detail::zip_store(entries);
        Response r;
        r.body.assign(bytes.begin(), bytes.end());
        r.content_type = "application/zip";
        r.filename = "cart-" + session + ".zip";
        return r;
    });
}

Response Service::feedback_post(std::string_view body, bool json) {
    return guarded([&] {
        std::string text;
        if (json) {
            const Json j = parse_body(body);
            for (const auto& [key, value] : j.items()) {
                if (key != "text") throw ValidationError(key, "unknown field");
            }
            if (!j.contains("text") || !j["text"].is_string()) {
                throw ValidationError("text", "must be a string");
            }
            text = j["text"].get<std::string>();
        } else {
            text.assign(body);
        }
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
            throw ValidationError("text", "must not be empty");
        }
        const std::size_t n = feedback_.append(text, options_.clock());
        return json_response({{"count", n}}, 201);
    });
}

Response Service::feedback_count() const {
    return json_response({{"count", feedback_.count()}});
}

Response Service::hierarchy() const {
    const auto& h = store_->hierarchy();
    Json roots = Json::array();
    for (std::size_t r : h.roots()) roots.push_back(hierarchy_node(h, r));
    return json_response({{"roots", roots}});
}

} // namespace hashcube
