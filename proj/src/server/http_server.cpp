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

#include "hashcube/server/http_server.hpp"

#include "httplib.h"

#include <sstream>

#include "hashcube/error.hpp"
#include "hashcube/ingest/image_io.hpp"

namespace hashcube {

namespace {

constexpr const char* kIndexPage = R"(<!doctype html>
<html><head><meta charset="utf-8"><title>hashcube</title></head>
<body><h1>hashcube</h1>
<p>No frontend assets are installed. The JSON API lives under <code>/api/</code>.</p>
</body></html>
)";

long parse_int_field(const std::string& text, const char* field) {
    std::size_t used = 0;
    long v = 0;
    try {
        v = std::stol(text, &used);
    } catch (const std::logic_error&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw ValidationError(field, "must be an integer");
    return v;
}

void send(httplib::Response& res, const Response& r) {
    res.status = r.status;
    if (!r.filename.empty()) {
        res.set_header("Content-Disposition", "attachment; filename=\"" + r.filename + "\"");
    }
    res.set_content(r.body, r.content_type);
}

bool is_json(const httplib::Request& req) {
    const auto type = req.get_header_value("Content-Type");
    return type.empty() || type.find("application/json") != std::string::npos;
}

// Multipart upload: one file per band (field name = band name), optional
// "order" (comma-separated band names), "radius" and "k" fields.
Response similar_multipart(const Service& service, const httplib::Request& req) {
    return guarded([&] {
        SimilarityRequest sreq;
        std::vector<std::string> order;
        std::vector<const httplib::MultipartFormData*> files;
        for (const auto& [field, part] : req.files) {
            if (field == "order") {
                std::stringstream ss(part.content);
                for (std::string band; std::getline(ss, band, ',');) {
                    if (!band.empty()) order.push_back(band);
                }
            } else if (field == "radius") {
                sreq.radius = static_cast<int>(parse_int_field(part.content, "radius"));
            } else if (field == "k") {
                const long k = parse_int_field(part.content, "k");
                if (k < 1) throw ValidationError("k", "must be at least 1");
                sreq.k = static_cast<std::size_t>(k);
            } else {
                files.push_back(&part);
            }
        }
        if (files.empty()) throw ValidationError("bands", "no band files uploaded");
        if (!order.empty()) {
            std::vector<const httplib::MultipartFormData*> sorted;
            for (const auto& band : order) {
                auto it = std::find_if(files.begin(), files.end(),
                                       [&](const auto* f) { return f->name == band; });
                if (it == files.end()) throw ValidationError("order", "band " + band + " was not uploaded");
                sorted.push_back(*it);
            }
            if (sorted.size() != files.size()) throw ValidationError("order", "must name every uploaded band");
            files = std::move(sorted);
        }
        for (const auto* f : files) {
            const std::span<const std::uint8_t> bytes(reinterpret_cast<const std::uint8_t*>(f->content.data()),
                                                      f->content.size());
            sreq.bands.push_back(decode_pgm(bytes, f->name, f->name));
        }
        return service.similar(sreq);
    });
}

} // namespace

struct HttpServer::Impl {
    std::shared_ptr<Service> service;
    HttpOptions options;
    httplib::Server server;
    bool bound = false;
};

HttpServer::HttpServer(std::shared_ptr<Service> service, HttpOptions options)
        : impl_(std::make_unique<Impl>()) {
    impl_->service = std::move(service);
    impl_->options = std::move(options);
    auto& svr = impl_->server;
    Service& s = *impl_->service;
    svr.set_payload_max_length(impl_->options.max_upload);

    svr.Post("/api/query", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.query(req.body));
    });
    svr.Get("/api/query/names", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.query_names(req.get_param_value("filter")));
    });
    svr.Post("/api/query/names", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.query_names(req.body));
    });
    svr.Post("/api/stats", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.stats(req.body));
    });
    svr.Post("/api/similar", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, req.is_multipart_form_data() ? similar_multipart(s, req) : s.similar(req.body));
    });
    svr.Get(R"(/api/image/([^/]+))", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.image(req.matches[1].str(), req.get_param_value("kind")));
    });
    svr.Post(R"(/api/cart/([^/]+)/add)", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.cart_add(req.matches[1].str(), req.body));
    });
    svr.Get(R"(/api/cart/([^/]+)/download)", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.cart_download(req.matches[1].str()));
    });
    svr.Get(R"(/api/cart/([^/]+))", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.cart_get(req.matches[1].str()));
    });
    svr.Post("/api/feedback", [&s](const httplib::Request& req, httplib::Response& res) {
        send(res, s.feedback_post(req.body, is_json(req)));
    });
    svr.Get("/api/feedback", [&s](const httplib::Request&, httplib::Response& res) {
        send(res, s.feedback_count());
    });
    svr.Get("/api/hierarchy", [&s](const httplib::Request&, httplib::Response& res) {
        send(res, s.hierarchy());
    });

    if (impl_->options.web_root) {
        if (!svr.set_mount_point("/", impl_->options.web_root->string())) {
            throw IoError("web root not found: " + impl_->options.web_root->string());
        }
    } else {
        svr.Get("/", [](const httplib::Request&, httplib::Response& res) {
            res.set_content(kIndexPage, "text/html; charset=utf-8");
        });
    }

    svr.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        const bool api = req.path.rfind("/api/", 0) == 0;
        std::string msg = res.status == 413 ? "request body exceeds the upload limit"
                          : res.status == 404 ? "no route for " + req.method + " " + req.path
                                              : "request failed";
        if (api || res.status == 413) {
            const Response r = error_response(res.status, msg);
            res.set_content(r.body, r.content_type);
        }
    });
    svr.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string msg = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            msg = e.what();
        } catch (...) {
        }
        const Response r = error_response(500, msg);
        res.status = 500;
        res.set_content(r.body, r.content_type);
    });
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
    auto& o = impl_->options;
    int port = o.port;
    if (port == 0) {
        port = impl_->server.bind_to_any_port(o.host);
        if (port < 0) throw IoError("cannot bind " + o.host);
    } else if (!impl_->server.bind_to_port(o.host, port)) {
        throw IoError("cannot bind " + o.host + ":" + std::to_string(port));
    }
    impl_->bound = true;
    return port;
}

void HttpServer::listen() {
    if (!impl_->bound) throw Error("HttpServer::listen before bind");
    impl_->server.listen_after_bind();
}

void HttpServer::stop() {
    if (impl_ && impl_->server.is_running()) impl_->server.stop();
}

bool HttpServer::running() const { return impl_->server.is_running(); }

} // namespace hashcube
