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

#include "hashcube/ingest/archive.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <random>

#include "hashcube/catalog/json_codec.hpp"
#include "hashcube/detail/file_io.hpp"
#include "hashcube/error.hpp"
#include "hashcube/ingest/image_io.hpp"

namespace hashcube {

namespace fs = std::filesystem;

namespace {

fs::path resolve(const fs::path& base, const fs::path& p) {
    return p.is_absolute() || base.empty() ? p : base / p;
}

void prepare_out_dir(const fs::path& out) {
    std::error_code ec;
    if (fs::exists(out)) {
        if (!fs::is_directory(out)) throw IoError(out.string() + " is not a directory");
        const bool empty = fs::is_empty(out);
        if (!empty && !fs::exists(out / store_layout::kMetadata)) {
            throw IoError("refusing to write a store into non-empty directory " + out.string());
        }
        fs::remove_all(out / store_layout::kBands, ec);
        fs::remove_all(out / store_layout::kRendered, ec);
    }
    fs::create_directories(out / store_layout::kBands, ec);
    if (ec) throw IoError("cannot create " + (out / store_layout::kBands).string() + ": " + ec.message());
    fs::create_directories(out / store_layout::kRendered, ec);
    if (ec) throw IoError("cannot create " + (out / store_layout::kRendered).string() + ": " + ec.message());
}

} // namespace

void check_patch_name(const std::string& name) {
    if (name.empty() || name == "." || name == ".." ||
        name.find_first_of("/\\") != std::string::npos || name.find('\0') != std::string::npos) {
        throw InvalidInput("patch_name '" + name + "' cannot be used as a file name");
    }
}

double jaccard(const LabelSet& a, const LabelSet& b) {
    std::size_t common = 0;
    for (char c : a.chars()) common += b.contains(c);
    const std::size_t uni = a.size() + b.size() - common;
    return uni == 0 ? 1.0 : static_cast<double>(common) / static_cast<double>(uni);
}

std::vector<TrainingSet::Indices> mine_triplets(std::span<const LabelSet> labels,
                                                std::size_t per_anchor, double positive_jaccard,
                                                std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<TrainingSet::Indices> out;
    std::vector<std::size_t> pos, neg;
    for (std::size_t a = 0; a < labels.size(); ++a) {
        pos.clear();
        neg.clear();
        for (std::size_t j = 0; j < labels.size(); ++j) {
            if (j == a) continue;
            if (!labels[a].intersects(labels[j])) {
                neg.push_back(j);
            } else if (jaccard(labels[a], labels[j]) >= positive_jaccard) {
                pos.push_back(j);
            }
        }
        if (pos.empty() || neg.empty()) continue;
        for (std::size_t t = 0; t < per_anchor; ++t) {
            out.push_back({a, pos[rng() % pos.size()], neg[rng() % neg.size()]});
        }
    }
    return out;
}

HashingHead train_head(std::span<const FeatureVector> features, std::span<const LabelSet> labels,
                       const BuildConfig& config, BuildReport& report) {
    if (features.empty() || features.size() != labels.size()) {
        throw InvalidInput("training needs matching, non-empty features and labels");
    }
    const std::size_t dim = features.front().size();
    const std::size_t n = features.size();

    std::vector<std::size_t> sample(n);
    std::iota(sample.begin(), sample.end(), 0);
    if (n > config.train_sample) {
        std::mt19937_64 rng(config.seed);
        std::shuffle(sample.begin(), sample.end(), rng);
        sample.resize(config.train_sample);
        std::sort(sample.begin(), sample.end());
    }

    std::vector<double> mean(dim, 0.0), scale(dim, 0.0);
    for (std::size_t i : sample) {
        if (features[i].size() != dim) throw DimensionMismatch(dim, features[i].size());
        for (std::size_t d = 0; d < dim; ++d) mean[d] += features[i][d];
    }
    for (double& m : mean) m /= static_cast<double>(sample.size());
    for (std::size_t i : sample) {
        for (std::size_t d = 0; d < dim; ++d) {
            const double c = features[i][d] - mean[d];
            scale[d] += c * c;
        }
    }
    for (double& s : scale) {
        s = std::sqrt(s / static_cast<double>(sample.size()));
        if (!(s > 1e-12)) s = 1.0;
    }

    TrainingSet set;
    std::vector<LabelSet> sample_labels;
    for (std::size_t i : sample) {
        FeatureVector z(dim);
        for (std::size_t d = 0; d < dim; ++d) z[d] = (features[i][d] - mean[d]) / scale[d];
        set.points.push_back(std::move(z));
        sample_labels.push_back(labels[i]);
    }
    set.triplets = mine_triplets(sample_labels, config.triplets_per_anchor,
                                 config.positive_jaccard, config.seed + 1);
    report.triplets = set.triplets.size();

    HashingHead head = HashingHead::random(dim, config.code_bits, config.seed);
    balance_bias(head, set.points);
    if (!set.triplets.empty() && config.steps > 0) {
        TrainOptions options{config.steps, config.learning_rate};
        head = train(head, set, options, [&](std::size_t step, double loss) {
            if (!report.first_loss) report.first_loss = loss;
            report.last_loss = loss;
            if (config.observer) config.observer(step, loss);
        });
        report.trained = true;
    }

    // z = W ((x - mean) / scale) + b  =  (W / scale) x + (b - W (mean / scale))
    HashingHead folded = head;
    for (std::size_t j = 0; j < head.code_bits(); ++j) {
        double shift = 0.0;
        for (std::size_t d = 0; d < dim; ++d) {
            folded.weight(j, d) = head.weight(j, d) / scale[d];
            shift += head.weight(j, d) * mean[d] / scale[d];
        }
        folded.bias()[j] = head.bias()[j] - shift;
    }
    folded.validate();
    return folded;
}

FeatureVector entry_features(const ManifestEntry& e, const fs::path& base_dir, std::size_t dim) {
    if (e.features) {
        if (e.features->size() != dim) throw DimensionMismatch(dim, e.features->size());
        return *e.features;
    }
    if (e.bands.empty()) {
        throw InvalidInput("entry '" + e.record.patch_name + "' has neither features nor band files");
    }
    std::vector<BandGrid> grids;
    for (const auto& b : e.bands) grids.push_back(read_pgm(resolve(base_dir, b.path), b.band));
    return extract_features(grids, dim);
}

BuildReport build_archive(const Manifest& manifest, const LabelHierarchy& hierarchy,
                          const std::optional<HashingHead>& head, const BuildConfig& config,
                          const fs::path& out_dir) {
    BuildReport report;
    report.entries = manifest.entries.size();
    for (const auto& e : manifest.entries) check_patch_name(e.record.patch_name);

    std::size_t dim = HashingHead::kDefaultInputDim;
    if (head) {
        head->validate();
        dim = head->input_dim();
    } else if (auto d = manifest.feature_dim()) {
        dim = *d;
    }

    // Entries carrying vectors are referenced in place; band-derived ones
    // are kept alongside.
    std::deque<FeatureVector> extracted;
    std::vector<const FeatureVector*> features;
    features.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries) {
        if (e.features) {
            if (e.features->size() != dim) throw DimensionMismatch(dim, e.features->size());
            features.push_back(&*e.features);
        } else {
            extracted.push_back(entry_features(e, manifest.base_dir, dim));
            features.push_back(&extracted.back());
        }
    }

    std::vector<PatchRecord> records;
    records.reserve(manifest.entries.size());
    for (const auto& e : manifest.entries) records.push_back(e.record);
    Catalog catalog(hierarchy, std::move(records), config.geohash_precision);

    HashingHead model = head ? *head : HashingHead(dim, config.code_bits);
    if (!head && !manifest.entries.empty()) {
        const std::size_t n = manifest.entries.size();
        std::vector<std::size_t> sample(n);
        std::iota(sample.begin(), sample.end(), 0);
        if (n > config.train_sample) {
            std::mt19937_64 rng(config.seed);
            std::shuffle(sample.begin(), sample.end(), rng);
            sample.resize(config.train_sample);
            std::sort(sample.begin(), sample.end());
        }
        std::vector<FeatureVector> xs;
        std::vector<LabelSet> ls;
        for (std::size_t i : sample) {
            xs.push_back(*features[i]);
            ls.push_back(manifest.entries[i].record.labels);
        }
        BuildConfig inner = config;
        inner.train_sample = xs.size();
        model = train_head(xs, ls, inner, report);
    }

    CodeTable table(model.code_bits());
    for (std::size_t i = 0; i < manifest.entries.size(); ++i) {
        table.insert(manifest.entries[i].record.patch_name, infer_code(model, *features[i]));
    }
    table.freeze();

    prepare_out_dir(out_dir);
    std::string metadata;
    for (const auto& r : catalog.records()) {
        metadata += record_to_json(r, hierarchy).dump();
        metadata += '\n';
    }
    detail::write_file_text(out_dir / store_layout::kMetadata, metadata);
    save_code_table(table, out_dir / store_layout::kCodes);
    save_head(model, out_dir / store_layout::kHead);
    detail::write_file_text(out_dir / store_layout::kHierarchy, hierarchy.to_text());
    if (!fs::exists(out_dir / store_layout::kFeedback)) {
        detail::write_file_text(out_dir / store_layout::kFeedback, "");
    }

    for (const auto& e : manifest.entries) {
        if (e.bands.empty()) continue;
        const fs::path dir = out_dir / store_layout::kBands / e.record.patch_name;
        fs::create_directories(dir);
        std::vector<BandGrid> rgb(3);
        for (const auto& b : e.bands) {
            const auto bytes = detail::read_file_bytes(resolve(manifest.base_dir, b.path));
            BandGrid grid = decode_pgm(bytes, b.band, b.path.string());
            detail::write_file_bytes(dir / (b.band + ".pgm"), bytes);
            ++report.band_files;
            if (e.rgb) {
                for (int c = 0; c < 3; ++c) {
                    if ((*e.rgb)[c] == b.band) rgb[c] = grid;
                }
            }
        }
        if (e.rgb) {
            detail::write_file_bytes(out_dir / store_layout::kRendered / (e.record.patch_name + ".png"),
                                     render_rgb_png(rgb[0], rgb[1], rgb[2]));
            ++report.rendered;
        }
    }

    report.store = ArchiveStore::assemble(out_dir, std::move(catalog), std::move(table), std::move(model));
    if (config.verify) {
        const auto store = ArchiveStore::open(out_dir);
        report.audit = store->audit();
        if (store->catalog().size() != manifest.entries.size()) {
            report.audit.push_back("metadata holds " + std::to_string(store->catalog().size()) +
                                   " records, manifest has " +
                                   std::to_string(manifest.entries.size()));
        }
        for (const auto& e : manifest.entries) {
            const auto files = store->band_files(e.record.patch_name);
            if (files.size() != e.bands.size()) {
                report.audit.push_back("'" + e.record.patch_name + "' has " +
                                       std::to_string(files.size()) + " stored bands, manifest lists " +
                                       std::to_string(e.bands.size()));
            }
        }
    }
    return report;
}

std::shared_ptr<const ArchiveStore> ArchiveStore::open(const fs::path& dir) {
    if (!fs::is_directory(dir)) throw IoError("store directory not found: " + dir.string());
    auto store = std::make_shared<ArchiveStore>();
    store->dir_ = dir;
    const fs::path hpath = dir / store_layout::kHierarchy;
    LabelHierarchy h = LabelHierarchy::parse(detail::read_file_text(hpath), hpath.string());

    const fs::path mpath = dir / store_layout::kMetadata;
    const std::string text = detail::read_file_text(mpath);
    std::vector<PatchRecord> records;
    std::size_t pos = 0, line_no = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        const std::string_view line(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
        pos = nl == std::string::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.empty()) continue;
        const std::string where = mpath.string() + ":" + std::to_string(line_no);
        try {
            records.push_back(record_from_json(Json::parse(line), h));
        } catch (const Json::parse_error& e) {
            throw ParseError(where, e.what());
        } catch (const ValidationError& e) {
            throw ParseError(where, e.what());
        }
    }
    store->catalog_ = std::make_unique<Catalog>(std::move(h), std::move(records));
    store->codes_ = std::make_unique<CodeTable>(load_code_table(dir / store_layout::kCodes));
    store->head_ = std::make_unique<HashingHead>(load_head(dir / store_layout::kHead));
    return store;
}

std::shared_ptr<const ArchiveStore> ArchiveStore::assemble(const fs::path& dir, Catalog catalog,
                                                           CodeTable codes, HashingHead head) {
    auto store = std::make_shared<ArchiveStore>();
    store->dir_ = dir;
    store->catalog_ = std::make_unique<Catalog>(std::move(catalog));
    store->codes_ = std::make_unique<CodeTable>(std::move(codes));
    store->head_ = std::make_unique<HashingHead>(std::move(head));
    return store;
}

std::vector<fs::path> ArchiveStore::band_files(std::string_view name) const {
    std::vector<fs::path> out;
    if (catalog_->find(name) == nullptr) return out;
    const fs::path d = dir_ / store_layout::kBands / std::string(name);
    std::error_code ec;
    if (!fs::is_directory(d, ec)) return out;
    for (const auto& entry : fs::directory_iterator(d)) {
        if (entry.is_regular_file()) out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::optional<fs::path> ArchiveStore::rendered_image(std::string_view name) const {
    if (catalog_->find(name) == nullptr) return std::nullopt;
    fs::path p = dir_ / store_layout::kRendered / (std::string(name) + ".png");
    std::error_code ec;
    if (!fs::is_regular_file(p, ec)) return std::nullopt;
    return p;
}

std::vector<std::string> ArchiveStore::audit() const {
    std::vector<std::string> problems = catalog_->audit();
    for (auto& p : codes_->audit()) problems.push_back("codes: " + p);
    if (codes_->size() != catalog_->size()) {
        problems.push_back("code store holds " + std::to_string(codes_->size()) +
                           " entries, metadata holds " + std::to_string(catalog_->size()));
    }
    for (const auto& r : catalog_->records()) {
        if (codes_->find(r.patch_name) == nullptr) {
            problems.push_back("'" + r.patch_name + "' has metadata but no code");
        }
    }
    if (head_->code_bits() != codes_->code_bits()) {
        problems.push_back("head emits " + std::to_string(head_->code_bits()) +
                           "-bit codes, code store holds " + std::to_string(codes_->code_bits()));
    }
    std::error_code ec;
    for (const char* sub : {store_layout::kBands, store_layout::kRendered}) {
        const fs::path d = dir_ / sub;
        if (!fs::is_directory(d, ec)) {
            problems.push_back(std::string("missing ") + sub + "/ collection");
            continue;
        }
        for (const auto& entry : fs::directory_iterator(d)) {
            std::string name = entry.path().filename().string();
            if (std::string(sub) == store_layout::kRendered) name = entry.path().stem().string();
            if (catalog_->find(name) == nullptr) {
                problems.push_back(std::string(sub) + "/" + entry.path().filename().string() +
                                   " belongs to no record");
            }
        }
    }
    if (!fs::exists(feedback_path(), ec)) problems.push_back("missing feedback collection");
    return problems;
}

} // namespace hashcube
