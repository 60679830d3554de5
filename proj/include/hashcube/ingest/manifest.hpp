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

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hashcube/catalog/catalog.hpp"
#include "hashcube/hashcore/hashing_head.hpp"

namespace hashcube {

struct BandRef {
    std::string band;
    std::filesystem::path path;   // relative paths resolve against base_dir

    friend bool operator==(const BandRef&, const BandRef&) = default;
};

struct ManifestEntry {
    PatchRecord record;
    std::optional<FeatureVector> features;
    std::vector<BandRef> bands;
    /// Band names used for the rendered composite, in R, G, B order.
    std::optional<std::array<std::string, 3>> rgb;

    friend bool operator==(const ManifestEntry&, const ManifestEntry&) = default;
};

/// One JSON object per line:
///
///     {"patch_name": "...", "bounds": {...}, "labels": [...],
///      "acquisition_date": "YYYY-MM-DD", "satellite": "S2", "country": "...",
///      "season": "summer",                       (optional)
///      "features": [f0, f1, ...],                  (optional)
///      "bands": [{"band": "B04", "path": "p/B04.pgm"}, ...],   (optional)
///      "rgb": ["B04", "B03", "B02"]}              (optional)
///
/// Blank lines are ignored.
struct Manifest {
    std::vector<ManifestEntry> entries;
    std::filesystem::path base_dir;

    /// Dimension shared by every feature vector, if any entry has one.
    std::optional<std::size_t> feature_dim() const;
};

/// Throws ParseError located at "<source>:<line>"; a duplicate name cites
/// both lines.
Manifest parse_manifest(std::string_view text, const LabelHierarchy& h,
                        const std::string& source = "manifest");
Manifest load_manifest(const std::filesystem::path& path, const LabelHierarchy& h);

std::string manifest_line(const ManifestEntry& e, const LabelHierarchy& h);
std::string format_manifest(const Manifest& m, const LabelHierarchy& h);
void save_manifest(const Manifest& m, const LabelHierarchy& h, const std::filesystem::path& path);

/// Desk-scale stand-in archive: `clusters` Gaussian feature centers, each
/// with its own label bundle, entries assigned round-robin, bounds inside
/// lon [-10, 30] x lat [35, 70], acquisition dates over one year.
struct SyntheticOptions {
    std::uint64_t seed = 1;
    std::size_t count = 1000;
    std::size_t clusters = 10;
    std::size_t feature_dim = HashingHead::kDefaultInputDim;
    double noise = 1.5;
    /// When set, writes three small 16-bit PGM bands per entry below this
    /// directory and references them (with an RGB composite).
    std::optional<std::filesystem::path> band_dir;
    std::size_t band_size = 16;
};

/// Throws InvalidInput unless count >= clusters >= 1.
Manifest generate_synthetic(const SyntheticOptions& options, const LabelHierarchy& h);
Manifest generate_synthetic(std::uint64_t seed, std::size_t count, std::size_t clusters,
                            const LabelHierarchy& h = LabelHierarchy::builtin());

/// Label bundle of cluster k as generate_synthetic assigns it.
LabelSet synthetic_bundle(std::uint64_t seed, std::size_t cluster, std::size_t clusters,
                          const LabelHierarchy& h);

} // namespace hashcube
