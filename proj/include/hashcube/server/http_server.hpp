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

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "hashcube/server/service.hpp"

namespace hashcube {

struct HttpOptions {
    std::string host = "127.0.0.1";
    int port = 8080;                  // 0 picks a free port
    std::size_t max_upload = 32u << 20;
    /// Static frontend assets served at "/"; a built-in index page otherwise.
    std::optional<std::filesystem::path> web_root;
};

/// Routes:
///   POST /api/query                      GET|POST /api/query/names  (?filter=JSON)
///   POST /api/stats                      POST /api/similar  (JSON, or multipart PGM bands)
///   GET  /api/image/{name}?kind=rendered|bands
///   POST /api/cart/{session}/add         GET /api/cart/{session}
///   GET  /api/cart/{session}/download
///   POST /api/feedback                   GET /api/feedback
///   GET  /api/hierarchy
class HttpServer {
public:
    HttpServer(std::shared_ptr<Service> service, HttpOptions options);
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    /// Binds the socket; returns the bound port. Throws IoError.
    int bind();
    /// Serves until stop(); requires bind().
    void listen();
    void stop();
    bool running() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

} // namespace hashcube
