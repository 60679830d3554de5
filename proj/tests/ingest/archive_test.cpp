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

#include <gtest/gtest.h>

#include <set>

#include "hashcube/detail/file_io.hpp"
#include "hashcube/error.hpp"
#include "hashcube/hammindex/hamming.hpp"
#include "hashcube/ingest/archive.hpp"
#include "temp_dir.hpp"

namespace hashcube {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

const LabelHierarchy& H() { return LabelHierarchy::builtin(); }

BuildConfig quick_config() {
    BuildConfig c;
    c.train_sample = 200;
    c.triplets_per_anchor = 5;
    c.steps = 60;
    return c;
}

std::string slurp(const fs::path& p) { return detail::read_file_text(p); }

TEST(Triplets, SatisfyJaccardAndDisjointness) {
    const Manifest m = generate_synthetic(3, 120, 6);
    std::vector<LabelSet> labels;
    for (const auto& e : m.entries) labels.push_back(e.record.labels);
    const auto triplets = mine_triplets(labels, 4, 0.5, 9);
    ASSERT_FALSE(triplets.empty());
    std::set<std::size_t> anchors;
    for (const auto& t : triplets) {
        EXPECT_NE(t.anchor, t.positive);
        EXPECT_GE(jaccard(labels[t.anchor], labels[t.positive]), 0.5);
        EXPECT_FALSE(labels[t.anchor].intersects(labels[t.negative]));
        anchors.insert(t.anchor);
    }
    EXPECT_EQ(triplets.size(), anchors.size() * 4);
    EXPECT_EQ(mine_triplets(labels, 4, 0.5, 9).size(), triplets.size());
    EXPECT_TRUE(mine_triplets(std::vector<LabelSet>(5, labels[0]), 4, 0.5, 9).empty());
}

TEST(Triplets, JaccardValues) {
    const auto a = LabelSet::from_chars("!\"#"), b = LabelSet::from_chars("\"#$");
    EXPECT_DOUBLE_EQ(jaccard(a, b), 0.5);
    EXPECT_DOUBLE_EQ(jaccard(a, a), 1.0);
    EXPECT_DOUBLE_EQ(jaccard(a, LabelSet::from_chars("%")), 0.0);
    EXPECT_DOUBLE_EQ(jaccard(LabelSet{}, LabelSet{}), 1.0);
}

TEST(TrainHead, FoldedHeadMatchesStandardizedHead) {
    // Features with large offsets and scales; an untrained head still
    // splits every bit at the median of the sample.
    Manifest m = generate_synthetic(4, 400, 5);
    std::vector<FeatureVector> xs;
    std::vector<LabelSet> ls;
    for (auto& e : m.entries) {
        for (std::size_t d = 0; d < e.features->size(); ++d) {
            (*e.features)[d] = 1000.0 + 50.0 * static_cast<double>(d % 7 + 1) * (*e.features)[d];
        }
        xs.push_back(*e.features);
        ls.push_back(LabelSet{});
    }
    BuildConfig c = quick_config();
    c.train_sample = xs.size();
    BuildReport report;
    const HashingHead head = train_head(xs, ls, c, report);
    EXPECT_FALSE(report.trained);
    EXPECT_EQ(report.triplets, 0u);
    std::vector<std::size_t> ones(head.code_bits(), 0);
    for (const auto& x : xs) {
        const HashCode code = infer_code(head, x);
        for (std::size_t j = 0; j < head.code_bits(); ++j) ones[j] += code.test(j);
    }
    for (std::size_t j = 0; j < head.code_bits(); ++j) {
        EXPECT_NEAR(static_cast<double>(ones[j]) / xs.size(), 0.5, 0.01) << "bit " << j;
    }
}

TEST(TrainHead, TrainingLowersLossAndSeparatesClusters) {
    const Manifest m = generate_synthetic(8, 300, 6);
    std::vector<FeatureVector> xs;
    std::vector<LabelSet> ls;
    for (const auto& e : m.entries) {
        xs.push_back(*e.features);
        ls.push_back(e.record.labels);
    }
    BuildConfig c = quick_config();
    std::size_t calls = 0;
    c.observer = [&](std::size_t, double) { ++calls; };
    BuildReport report;
    const HashingHead head = train_head(xs, ls, c, report);
    EXPECT_TRUE(report.trained);
    EXPECT_GT(report.triplets, 0u);
    EXPECT_EQ(calls, c.steps);
    ASSERT_TRUE(report.first_loss && report.last_loss);
    EXPECT_LT(*report.last_loss, *report.first_loss);

    double intra = 0, inter = 0;
    std::size_t n_intra = 0, n_inter = 0;
    for (std::size_t i = 0; i < 60; ++i) {
        for (std::size_t j = i + 1; j < 60; ++j) {
            const int d = hamming_distance(infer_code(head, xs[i]), infer_code(head, xs[j]));
            (i % 6 == j % 6 ? intra : inter) += d;
            ++(i % 6 == j % 6 ? n_intra : n_inter);
        }
    }
    EXPECT_LT(intra / n_intra + 10.0, inter / n_inter);
}

TEST(BuildArchive, WritesConsistentStore) {
    TempDir bands, out;
    SyntheticOptions o;
    o.seed = 2;
    o.count = 1000;
    o.clusters = 10;
    o.band_dir = bands.path();
    o.band_size = 4;
    const Manifest m = generate_synthetic(o, H());
    const BuildReport report = build_archive(m, H(), std::nullopt, quick_config(), out.path());
    EXPECT_EQ(report.entries, 1000u);
    EXPECT_TRUE(report.trained);
    EXPECT_TRUE(report.audit.empty()) << report.audit.front();
    EXPECT_EQ(report.band_files, 3000u);
    EXPECT_EQ(report.rendered, 1000u);

    const auto store = ArchiveStore::open(out.path());
    EXPECT_TRUE(store->audit().empty());
    ASSERT_EQ(store->catalog().size(), 1000u);
    ASSERT_EQ(store->codes().size(), 1000u);
    for (const auto& e : m.entries) {
        const PatchRecord* r = store->catalog().find(e.record.patch_name);
        ASSERT_NE(r, nullptr);
        EXPECT_EQ(*r, e.record);
        EXPECT_EQ(store->codes().lookup(e.record.patch_name), infer_code(store->head(), *e.features));
        EXPECT_EQ(store->band_files(e.record.patch_name).size(), 3u);
        EXPECT_TRUE(store->rendered_image(e.record.patch_name));
    }
    EXPECT_TRUE(store->band_files("nope").empty());
    EXPECT_FALSE(store->rendered_image("nope"));
    EXPECT_TRUE(fs::is_regular_file(store->feedback_path()));
    EXPECT_EQ(store->hierarchy().to_text(), H().to_text());
}

TEST(BuildArchive, RebuildIsByteIdentical) {
    TempDir a, b;
    const Manifest m = generate_synthetic(12, 300, 5);
    build_archive(m, H(), std::nullopt, quick_config(), a.path());
    build_archive(m, H(), std::nullopt, quick_config(), b.path());
    for (const char* f : {store_layout::kCodes, store_layout::kHead, store_layout::kMetadata}) {
        EXPECT_EQ(detail::read_file_bytes(a / f), detail::read_file_bytes(b / f)) << f;
    }
}

TEST(BuildArchive, EmptyManifestGivesEmptyStore) {
    TempDir out;
    const BuildReport report = build_archive(Manifest{}, H(), std::nullopt, quick_config(), out.path());
    EXPECT_EQ(report.entries, 0u);
    EXPECT_FALSE(report.trained);
    EXPECT_TRUE(report.audit.empty());
    const auto store = ArchiveStore::open(out.path());
    EXPECT_EQ(store->catalog().size(), 0u);
    EXPECT_EQ(store->codes().size(), 0u);
    EXPECT_EQ(store->head().code_bits(), 128u);
}

TEST(BuildArchive, GivenHeadIsUsedAsIs) {
    TempDir out;
    const Manifest m = generate_synthetic(1, 50, 5);
    const HashingHead head = HashingHead::random(128, 64, 77);
    build_archive(m, H(), head, quick_config(), out.path());
    const auto store = ArchiveStore::open(out.path());
    EXPECT_EQ(store->head().code_bits(), 64u);
    EXPECT_EQ(store->codes().code_bits(), 64u);
    for (const auto& e : m.entries) {
        EXPECT_EQ(store->codes().lookup(e.record.patch_name), infer_code(head, *e.features));
    }
    EXPECT_THROW(build_archive(m, H(), HashingHead::random(32, 64, 1), quick_config(), out.path()),
                 DimensionMismatch);
}

TEST(BuildArchive, BandOnlyEntriesUseExtractedFeatures) {
    TempDir bands, out;
    SyntheticOptions o;
    o.count = 20;
    o.clusters = 2;
    o.band_dir = bands.path();
    o.band_size = 8;
    Manifest m = generate_synthetic(o, H());
    for (auto& e : m.entries) e.features.reset();
    build_archive(m, H(), std::nullopt, quick_config(), out.path());
    const auto store = ArchiveStore::open(out.path());
    for (const auto& e : m.entries) {
        const FeatureVector f = entry_features(e, m.base_dir, store->head().input_dim());
        EXPECT_EQ(store->codes().lookup(e.record.patch_name), infer_code(store->head(), f));
    }
    m.entries[0].bands.clear();
    m.entries[0].rgb.reset();
    EXPECT_THROW(build_archive(m, H(), std::nullopt, quick_config(), out.path()), InvalidInput);
}

TEST(BuildArchive, RejectsUnusableNamesAndForeignDirectories) {
    TempDir out;
    Manifest m = generate_synthetic(1, 10, 2);
    m.entries[3].record.patch_name = "a/b";
    EXPECT_THROW(build_archive(m, H(), std::nullopt, quick_config(), out.path()), InvalidInput);
    EXPECT_THROW(check_patch_name(".."), InvalidInput);
    EXPECT_THROW(check_patch_name(""), InvalidInput);
    EXPECT_NO_THROW(check_patch_name("S2_PT_0000001"));

    detail::write_file_text(out / "unrelated.txt", "x");
    EXPECT_THROW(build_archive(generate_synthetic(1, 10, 2), H(), std::nullopt, quick_config(), out.path()),
                 IoError);
}

TEST(BuildArchive, RebuildKeepsFeedbackAndDropsOldBands) {
    TempDir bands, out;
    SyntheticOptions o;
    o.count = 10;
    o.clusters = 2;
    o.band_dir = bands.path();
    o.band_size = 4;
    const Manifest with_bands = generate_synthetic(o, H());
    build_archive(with_bands, H(), std::nullopt, quick_config(), out.path());
    detail::write_file_text(out / store_layout::kFeedback, "{\"rating\":5}\n");
    const Manifest plain = generate_synthetic(99, 10, 2);
    const BuildReport report = build_archive(plain, H(), std::nullopt, quick_config(), out.path());
    EXPECT_TRUE(report.audit.empty()) << report.audit.front();
    EXPECT_EQ(slurp(out / store_layout::kFeedback), "{\"rating\":5}\n");
    EXPECT_TRUE(fs::is_empty(out / store_layout::kBands));
}

TEST(ArchiveStore, AuditFindsInconsistencies) {
    TempDir out;
    const Manifest m = generate_synthetic(1, 30, 3);
    build_archive(m, H(), std::nullopt, quick_config(), out.path());
    fs::create_directories(out / store_layout::kBands / "ghost");
    auto store = ArchiveStore::open(out.path());
    auto problems = store->audit();
    ASSERT_EQ(problems.size(), 1u);
    EXPECT_NE(problems[0].find("ghost"), std::string::npos);
    fs::remove_all(out / store_layout::kBands / "ghost");

    // Metadata with one record dropped: the code store no longer matches.
    std::string meta = slurp(out / store_layout::kMetadata);
    meta.erase(0, meta.find('\n') + 1);
    detail::write_file_text(out / store_layout::kMetadata, meta);
    problems = ArchiveStore::open(out.path())->audit();
    EXPECT_FALSE(problems.empty());
}

TEST(ArchiveStore, CorruptMetadataCitesLine) {
    TempDir out;
    build_archive(generate_synthetic(1, 5, 1), H(), std::nullopt, quick_config(), out.path());
    std::string meta = slurp(out / store_layout::kMetadata);
    meta += "{broken\n";
    detail::write_file_text(out / store_layout::kMetadata, meta);
    try {
        ArchiveStore::open(out.path());
        FAIL() << "expected ParseError";
    } catch (const ParseError& e) {
        EXPECT_NE(e.location.find("metadata.jsonl:6"), std::string::npos) << e.location;
    }
    EXPECT_THROW(ArchiveStore::open(out / "missing"), IoError);
}

} // namespace
} // namespace hashcube
