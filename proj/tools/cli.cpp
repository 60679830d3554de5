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

#include "cli.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <atomic>
#include <csignal>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "hashcube/catalog/json_codec.hpp"
#include "hashcube/detail/file_io.hpp"
#include "hashcube/error.hpp"
#include "hashcube/server/http_server.hpp"

namespace hashcube::cli {

namespace fs = std::filesystem;

namespace {

std::atomic<HttpServer*> g_server{nullptr};

extern "C" void on_signal(int) {
    if (HttpServer* s = g_server.load()) s->stop();
}

struct Options {
    std::string output = "human";
    std::string store;

    // ingest
    std::string manifest;
    std::string out_dir;
    std::string head;
    std::string hierarchy;
    std::uint64_t seed = 1;
    std::size_t synthetic = 0;
    std::size_t clusters = 10;
    bool with_bands = false;
    std::size_t steps = BuildConfig{}.steps;
    std::size_t train_sample = BuildConfig{}.train_sample;

    // serve
    std::string host = "127.0.0.1";
    int port = 8080;
    std::string web_root;

    // query / stats / similar
    std::string filter = "{}";
    std::string name;
    std::string features;
    std::optional<int> radius;
    std::optional<std::size_t> k;
};

// Exit code for an endpoint status.
int status_exit(int status) {
    if (status < 400) return kOk;
    return status >= 500 ? kIo : kValidation;
}

std::string read_arg_or_file(const std::string& value) {
    if (!value.empty() && value.front() == '@') return detail::read_file_text(value.substr(1));
    return value;
}

void print_error_body(const Response& r, bool json, std::ostream& err) {
    if (json) {
        err << r.body;
        return;
    }
    const Json j = Json::parse(r.body, nullptr, false);
    if (j.is_discarded() || !j.contains("error")) {
        err << "error: " << r.body;
        return;
    }
    err << "error: " << j["error"].get<std::string>() << "\n";
    if (j.contains("fields")) {
        for (const auto& f : j["fields"]) {
            err << "  " << f["field"].get<std::string>() << ": " << f["message"].get<std::string>() << "\n";
        }
    }
}

std::string labels_text(const Json& record) {
    std::string out;
    for (const auto& l : record["labels"]) {
        if (!out.empty()) out += ", ";
        out += l.get<std::string>();
    }
    return out;
}

void print_stats(const Json& stats, std::ostream& out) {
    std::size_t width = 0;
    for (const auto& [label, v] : stats.items()) width = std::max(width, label.size());
    for (const auto& [label, v] : stats.items()) {
        out << "  " << std::left << std::setw(static_cast<int>(width)) << label << "  "
            << std::right << std::setw(7) << v["count"].get<std::size_t>() << "  "
            << v["colorHex"].get<std::string>() << "\n";
    }
}

void print_record_line(const Json& r, std::ostream& out) {
    out << "  " << r["patch_name"].get<std::string>() << "  " << r["acquisition_date"].get<std::string>()
        << "  " << r["satellite"].get<std::string>() << "  " << r["country"].get<std::string>() << "  ["
        << labels_text(r) << "]\n";
}

void print_query_human(const Json& j, std::ostream& out) {
    out << "total: " << j["total"].get<std::size_t>() << " (page " << j["page_number"].get<std::size_t>()
        << ", " << j["page"].size() << " shown)\n";
    for (const auto& r : j["page"]) print_record_line(r, out);
    if (j["render_disabled"].get<bool>()) out << "rendering disabled: more than 1000 matches\n";
    out << "label statistics:\n";
    print_stats(j["stats"], out);
}

void print_similar_human(const Json& j, std::ostream& out) {
    const Json& ref = j["query_ref"];
    out << "query: " << (ref["patch_name"].is_null() ? std::string("(upload)") : ref["patch_name"].get<std::string>())
        << "  code " << ref["code"].get<std::string>() << "\n";
    if (j["mode"] == "knn") {
        out << "nearest " << j["k"].get<std::size_t>() << ": " << j["total"].get<std::size_t>() << " neighbors\n";
    } else {
        out << "within radius " << j["radius"].get<int>() << ": " << j["total"].get<std::size_t>() << " neighbors\n";
    }
    for (const auto& n : j["neighbors"]) {
        out << "  " << std::setw(3) << n["distance"].get<int>() << "  " << n["patch_name"].get<std::string>()
            << "  [" << labels_text(n["record"]) << "]\n";
    }
    out << "label statistics:\n";
    print_stats(j["stats"], out);
}

int emit(const Response& r, bool json, std::ostream& out, std::ostream& err,
         void (*human)(const Json&, std::ostream&)) {
    if (r.status >= 400) {
        print_error_body(r, json, err);
        return status_exit(r.status);
    }
    if (json) {
        out << r.body;
    } else {
        human(Json::parse(r.body), out);
    }
    return kOk;
}

std::shared_ptr<const ArchiveStore> open_store(const Options& o) {
    if (o.store.empty()) throw InvalidInput("no store given (use --store or HASHCUBE_STORE)");
    return ArchiveStore::open(o.store);
}

int cmd_ingest(const Options& o, bool json, std::ostream& out, std::ostream& err) {
    LabelHierarchy h = o.hierarchy.empty()
                               ? LabelHierarchy::builtin()
                               : LabelHierarchy::parse(detail::read_file_text(o.hierarchy), o.hierarchy);
    Manifest manifest;
    if (o.synthetic > 0) {
        SyntheticOptions s;
        s.seed = o.seed;
        s.count = o.synthetic;
        s.clusters = o.clusters;
        if (o.with_bands) {
            if (o.manifest.empty()) throw InvalidInput("--with-bands needs --manifest to place the band files");
            const fs::path parent = fs::path(o.manifest).parent_path();
            s.band_dir = parent.empty() ? fs::path(".") : parent;
        }
        manifest = generate_synthetic(s, h);
        if (!o.manifest.empty()) save_manifest(manifest, h, o.manifest);
    } else {
        if (o.manifest.empty()) throw InvalidInput("give --manifest, or --synthetic N to generate one");
        manifest = load_manifest(o.manifest, h);
    }
    std::optional<HashingHead> head;
    if (!o.head.empty()) head = load_head(o.head);

    BuildConfig config;
    config.seed = o.seed;
    config.steps = o.steps;
    config.train_sample = o.train_sample;
    const BuildReport report = build_archive(manifest, h, head, config, o.out_dir);

    if (json) {
        Json j = {{"out", o.out_dir},
                  {"entries", report.entries},
                  {"trained", report.trained},
                  {"triplets", report.triplets},
                  {"first_loss", report.first_loss ? Json(*report.first_loss) : Json(nullptr)},
                  {"last_loss", report.last_loss ? Json(*report.last_loss) : Json(nullptr)},
                  {"band_files", report.band_files},
                  {"rendered", report.rendered},
                  {"audit", report.audit}};
        out << j.dump() << "\n";
    } else {
        out << "wrote " << report.entries << " entries to " << o.out_dir << "\n";
        if (report.trained) {
            out << "trained on " << report.triplets << " triplets, loss " << *report.first_loss << " -> "
                << *report.last_loss << "\n";
        } else {
            out << "no triplets mined; codes use the untrained projection\n";
        }
        out << report.band_files << " band files, " << report.rendered << " rendered images\n";
        out << (report.audit.empty() ? "audit: consistent\n" : "audit: FAILED\n");
    }
    for (const auto& p : report.audit) err << "audit: " << p << "\n";
    return report.audit.empty() ? kOk : kIo;
}

int cmd_serve(const Options& o, std::ostream& err) {
    auto service = std::make_shared<Service>(open_store(o));
    HttpOptions http;
    http.host = o.host;
    http.port = o.port;
    if (!o.web_root.empty()) http.web_root = o.web_root;
    HttpServer server(service, http);
    const int port = server.bind();
    err << "serving " << service->store().catalog().size() << " patches on http://" << o.host << ":" << port
        << "/\n";
    g_server.store(&server);
    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    server.listen();
    g_server.store(nullptr);
    return kOk;
}

FeatureVector read_features(const std::string& path) {
    const std::string text = detail::read_file_text(path);
    const Json j = Json::parse(text, nullptr, false);
    if (!j.is_discarded()) {
        const Json& arr = j.is_object() && j.contains("features") ? j["features"] : j;
        if (!arr.is_array()) throw InvalidInput(path + ": expected a JSON array of numbers");
        FeatureVector f;
        for (const auto& v : arr) {
            if (!v.is_number()) throw InvalidInput(path + ": expected a JSON array of numbers");
            f.push_back(v.get<double>());
        }
        return f;
    }
    std::istringstream in(text);
    FeatureVector f;
    for (double v; in >> v;) f.push_back(v);
    if (!in.eof()) throw InvalidInput(path + ": expected whitespace-separated numbers");
    return f;
}

int dispatch(CLI::App& app, const Options& o, std::ostream& out, std::ostream& err) {
    const bool json = o.output == "json";
    const std::string sub = app.get_subcommands().front()->get_name();
    if (sub == "ingest") return cmd_ingest(o, json, out, err);
    if (sub == "serve") return cmd_serve(o, err);

    Service service(open_store(o));
    if (sub == "query") {
        return emit(service.query(read_arg_or_file(o.filter)), json, out, err, print_query_human);
    }
    if (sub == "stats") {
        return emit(service.stats(read_arg_or_file(o.filter)), json, out, err, [](const Json& j, std::ostream& os) {
            os << "total: " << j["total"].get<std::size_t>() << "\n";
            print_stats(j["stats"], os);
        });
    }
    // similar
    Json body = Json::object();
    if (!o.name.empty()) body["patch_name"] = o.name;
    if (!o.features.empty()) body["features"] = read_features(o.features);
    if (o.radius) body["radius"] = *o.radius;
    if (o.k) body["k"] = *o.k;
    return emit(service.similar(body.dump()), json, out, err, print_similar_human);
}

} // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"hashcube: satellite image search over hash codes and metadata", "hashcube"};
    app.require_subcommand(1);
    app.add_option("--output", o.output, "Output format")
            ->check(CLI::IsMember({"human", "json"}))
            ->capture_default_str();

    auto store_opt = [&](CLI::App* sub) {
        sub->add_option("--store", o.store, "Store directory")->envname("HASHCUBE_STORE");
    };

    CLI::App* ingest = app.add_subcommand("ingest", "Build a store from a manifest");
    ingest->add_option("--manifest", o.manifest, "Manifest (JSONL); written when --synthetic is given");
    ingest->add_option("--out", o.out_dir, "Output store directory")->required();
    ingest->add_option("--head", o.head, "Use this hashing head instead of training one");
    ingest->add_option("--hierarchy", o.hierarchy, "Label hierarchy file (default: built-in CLC)");
    ingest->add_option("--seed", o.seed, "Seed for synthesis and training")->capture_default_str();
    auto* synthetic = ingest->add_option("--synthetic", o.synthetic, "Generate N synthetic entries");
    ingest->add_option("--clusters", o.clusters, "Clusters of the synthetic archive")
            ->needs(synthetic)
            ->capture_default_str();
    ingest->add_flag("--with-bands", o.with_bands, "Write synthetic band files next to the manifest")
            ->needs(synthetic);
    ingest->add_option("--steps", o.steps, "Training steps")->capture_default_str();
    ingest->add_option("--train-sample", o.train_sample, "Entries used for training")->capture_default_str();

    CLI::App* serve = app.add_subcommand("serve", "Serve the HTTP API");
    store_opt(serve);
    serve->add_option("--port", o.port, "Port (0 picks one)")->capture_default_str();
    serve->add_option("--host", o.host, "Bind address")->capture_default_str();
    serve->add_option("--web-root", o.web_root, "Static frontend assets served at /");

    CLI::App* query = app.add_subcommand("query", "Run a metadata query (same body as POST /api/query)");
    store_opt(query);
    query->add_option("--filter", o.filter, "Query JSON, or @file")->capture_default_str();

    CLI::App* stats = app.add_subcommand("stats", "Label statistics of a query (POST /api/stats)");
    store_opt(stats);
    stats->add_option("--filter", o.filter, "Query JSON, or @file")->capture_default_str();

    CLI::App* similar = app.add_subcommand("similar", "Similarity search (POST /api/similar)");
    store_opt(similar);
    auto* name = similar->add_option("--name", o.name, "Archive patch to search from");
    auto* features = similar->add_option("--features", o.features, "Feature vector file (JSON array or numbers)");
    name->excludes(features);
    similar->add_option("--radius", o.radius, "Hamming radius (default 2)");
    similar->add_option("--k", o.k, "Nearest neighbors instead of a radius")->excludes("--radius");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            out << app.help();
            return kOk;
        }
        err << "error: " << e.what() << "\n" << "run with --help for usage\n";
        return kValidation;
    }
    if (similar->parsed() && o.name.empty() && o.features.empty()) {
        err << "error: similar needs --name or --features\n";
        return kValidation;
    }

    try {
        return dispatch(app, o, out, err);
    } catch (const IoError& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const Json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kValidation;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kIo;
    }
}

} // namespace hashcube::cli
