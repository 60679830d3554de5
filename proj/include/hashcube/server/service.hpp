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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "hashcube/error.hpp"
#include "hashcube/hashcore/features.hpp"
#include "hashcube/ingest/archive.hpp"

namespace hashcube {

using Json = nlohmann::json;

/// Status, content type and body of one endpoint call. The HTTP layer and
/// the CLI both print `body` verbatim.
struct Response {
    int status = 200;
    std::string content_type = "application/json";
    std::string body;
    /// Suggested file name for downloads.
    std::string filename;
};

struct SimilarityRequest {
    std::optional<std::string> patch_name;
    std::optional<FeatureVector> features;
    std::vector<BandGrid> bands;
    std::optional<int> radius;
    std::optional<std::size_t> k;
};

struct ServiceOptions {
    std::size_t render_cap = 1000;
    std::size_t cart_batch = 50;
    std::chrono::seconds cart_idle{3600};
    int default_radius = 2;
    std::size_t default_k = 20;
    std::size_t max_k = 1000;
    std::function<std::chrono::system_clock::time_point()> clock = std::chrono::system_clock::now;
};

/// Session carts held in memory; a cart idle for longer than `idle` is
/// dropped on the next access.
class CartStore {
public:
    using Clock = std::function<std::chrono::system_clock::time_point()>;

    CartStore(std::chrono::seconds idle, Clock clock);

    /// Returns the cart after the union.
    std::set<std::string> add(const std::string& session, const std::vector<std::string>& names);
    std::set<std::string> get(const std::string& session);
    std::size_t session_count();

private:
    struct Cart {
        std::mutex mutex;
        std::set<std::string> names;
        std::chrono::system_clock::time_point last_used;
    };

    std::shared_ptr<Cart> touch(const std::string& session);

    std::chrono::seconds idle_;
    Clock clock_;
    std::mutex mutex_;
    std::map<std::string, std::shared_ptr<Cart>> carts_;
};

/// Append-only JSONL of {"text", "timestamp"}.
class FeedbackLog {
public:
    explicit FeedbackLog(std::filesystem::path path);

    /// Returns the record count after appending.
    std::size_t append(const std::string& text, std::chrono::system_clock::time_point when);
    std::size_t count() const;

private:
    std::filesystem::path path_;
    mutable std::mutex mutex_;
    std::size_t count_ = 0;
};

std::string utc_timestamp(std::chrono::system_clock::time_point t);

/// Endpoint logic over a loaded store. Request bodies are JSON text; every
/// failure becomes a JSON error response:
///   {"error": message, "fields": [{"field", "message"}, ...]}
class Service {
public:
    explicit Service(std::shared_ptr<const ArchiveStore> store, ServiceOptions options = {});

    const ArchiveStore& store() const { return *store_; }
    const ServiceOptions& options() const { return options_; }

    /// {"total", "page": [record], "page_number", "page_size", "stats",
    ///  "render_disabled", "rendered": [{"patch_name", "url"}] (render only)}
    Response query(std::string_view body) const;
    /// Newline-terminated names of the whole match set; paging is ignored.
    Response query_names(std::string_view body) const;
    /// {"total", "stats"}
    Response stats(std::string_view body) const;

    /// Body: {"patch_name"} or {"features": [...]} or
    /// {"bands": [{"band", "width", "height", "values"}]}, with optional
    /// "radius" or "k". Response:
    /// {"query_ref": {"patch_name", "source", "code"}, "mode", "radius"|"k",
    ///  "total", "neighbors": [{"patch_name", "distance", "record"}], "stats"}
    Response similar(std::string_view body) const;
    Response similar(const SimilarityRequest& request) const;

    /// kind "rendered" (PNG) or "bands" (zip of the stored band files).
    Response image(std::string_view name, std::string_view kind) const;

    /// Body: {"patch_names": [...]}.
    Response cart_add(const std::string& session, std::string_view body);
    Response cart_get(const std::string& session);
    /// Zip holding one band archive "<name>.zip" per cart member.
    Response cart_download(const std::string& session);

    /// JSON {"text"} when `json` is set, otherwise the raw body is the text.
    Response feedback_post(std::string_view body, bool json);
    Response feedback_count() const;

    /// {"roots": [node]}, node = {"code", "name", "level", "children"} and
    /// "color" on leaves.
    Response hierarchy() const;

private:
    Json similar_json(const SimilarityRequest& request) const;
    Query parse_query(std::string_view body, bool* render) const;
    std::vector<std::uint8_t> band_archive(const std::string& name) const;

    std::shared_ptr<const ArchiveStore> store_;
    ServiceOptions options_;
    CartStore carts_;
    FeedbackLog feedback_;
};

/// Shared error-body format.
Response error_response(int status, const std::string& message,
                        const std::vector<FieldError>& fields = {});

/// Runs `fn`, mapping library exceptions to error responses:
/// ValidationError / InvalidInput / malformed JSON -> 400, NotFound -> 404,
/// DimensionMismatch -> 422, anything else -> 500.
Response guarded(const std::function<Response()>& fn);

} // namespace hashcube
