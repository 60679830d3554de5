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

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hashcube/catalog/catalog.hpp"
#include "hashcube/hammindex/code_table.hpp"
#include "hashcube/hashcore/losses.hpp"
#include "hashcube/ingest/manifest.hpp"

namespace hashcube {

/// Store directory layout.
namespace store_layout {
inline constexpr const char* kMetadata = "metadata.jsonl";
inline constexpr const char* kCodes = "codes.bin";
inline constexpr const char* kHead = "head.bin";
inline constexpr const char* kBands = "bands";
inline constexpr const char* kRendered = "rendered";
inline constexpr const char* kFeedback = "feedback.jsonl";
inline constexpr const char* kHierarchy = "hierarchy.txt";
}

struct BuildConfig {
    std::uint64_t seed = 1;
    std::size_t code_bits = HashCode::kCanonicalBits;
    /// Training uses at most this many entries as anchors and triplet members.
    std::size_t train_sample = 1000;
    std::size_t triplets_per_anchor = 10;
    double positive_jaccard = 0.5;
    std::size_t steps = 200;
    double learning_rate = 0.05;
    int geohash_precision = geohash::kDefaultPrecision;
    /// Re-open the written store and audit it.
    bool verify = true;
    TrainObserver observer;
};

class ArchiveStore;

struct BuildReport {
    std::size_t entries = 0;
    bool trained = false;
    std::size_t triplets = 0;
    std::optional<double> first_loss;
    std::optional<double> last_loss;
    std::size_t band_files = 0;
    std::size_t rendered = 0;
    std::vector<std::string> audit;
    /// The built store as held in memory before it was written.
    std::shared_ptr<const ArchiveStore> store;
};

/// Positive: label Jaccard >= `positive_jaccard`; negative: disjoint labels.
/// Up to `per_anchor` triplets per anchor, drawn with `seed`.
std::vector<TrainingSet::Indices> mine_triplets(std::span<const LabelSet> labels,
                                                std::size_t per_anchor, double positive_jaccard,
                                                std::uint64_t seed);

double jaccard(const LabelSet& a, const LabelSet& b);

/// Trains a head on a sample of (features, labels). Features are
/// standardized per dimension for training and the affine map is folded
/// back into the returned head, which therefore takes raw features. When no
/// triplet can be mined the head is the seeded random projection with
/// median-balanced biases and `report.trained` stays false.
HashingHead train_head(std::span<const FeatureVector> features, std::span<const LabelSet> labels,
                       const BuildConfig& config, BuildReport& report);

/// Features for one entry: the manifest vector, else the baseline
/// extractor over its band files. Throws InvalidInput when neither exists.
FeatureVector entry_features(const ManifestEntry& e, const std::filesystem::path& base_dir,
                             std::size_t dim);

/// Writes a complete store to `out_dir` (created if needed; an existing
/// store there is replaced, its feedback kept). Throws on invalid input,
/// training divergence, or I/O failure.
BuildReport build_archive(const Manifest& manifest, const LabelHierarchy& hierarchy,
                          const std::optional<HashingHead>& head, const BuildConfig& config,
                          const std::filesystem::path& out_dir);

/// A loaded, immutable store.
class ArchiveStore {
public:
    /// Throws IoError / ParseError.
    static std::shared_ptr<const ArchiveStore> open(const std::filesystem::path& dir);
    /// Wraps already built parts; file lookups resolve below `dir`.
    static std::shared_ptr<const ArchiveStore> assemble(const std::filesystem::path& dir,
                                                        Catalog catalog, CodeTable codes,
                                                        HashingHead head);

    const std::filesystem::path& dir() const { return dir_; }
    const Catalog& catalog() const { return *catalog_; }
    const LabelHierarchy& hierarchy() const { return catalog_->hierarchy(); }
    const CodeTable& codes() const { return *codes_; }
    const HashingHead& head() const { return *head_; }

    /// Stored band files of a patch in name order; empty when none.
    std::vector<std::filesystem::path> band_files(std::string_view name) const;
    std::optional<std::filesystem::path> rendered_image(std::string_view name) const;
    std::filesystem::path feedback_path() const { return dir_ / store_layout::kFeedback; }

    /// Cross-store consistency; empty means consistent.
    std::vector<std::string> audit() const;

private:
    std::filesystem::path dir_;
    std::unique_ptr<Catalog> catalog_;
    std::unique_ptr<CodeTable> codes_;
    std::unique_ptr<HashingHead> head_;
};

/// Throws InvalidInput for names unusable as a file name.
void check_patch_name(const std::string& name);

} // namespace hashcube
