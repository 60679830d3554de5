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

#include "hashcube/hammindex/code_table.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "code_oracle.hpp"
#include "hashcube/error.hpp"

using namespace hashcube;

namespace {

CodeTable build(const std::vector<oracle::Entry>& entries, std::size_t bits = 128) {
    CodeTable table(bits);
    for (const auto& e : entries) table.insert(e.name, e.code);
    table.freeze();
    return table;
}

} // namespace

TEST(CodeTableTest, InsertLookupRoundtrip) {
    std::mt19937_64 rng(2);
    CodeTable table;
    const HashCode a = oracle::random_code(rng);
    table.insert("a", a);
    table.insert("b", a);
    table.insert("c", oracle::random_code(rng));
    EXPECT_EQ(table.size(), 3u);
    EXPECT_EQ(table.lookup("a"), a);
    EXPECT_EQ(table.find("zzz"), nullptr);
    EXPECT_THROW(table.lookup("zzz"), NotFound);
    EXPECT_THROW(table.insert("a", a), DuplicateKey);
    EXPECT_THROW(table.insert("d", HashCode(64)), InvalidInput);
    const auto hits = table.query_radius(a, 0);
    EXPECT_EQ(hits, (std::vector<Neighbor>{{"a", 0}, {"b", 0}}));
    EXPECT_TRUE(table.audit().empty());
    table.freeze();
    EXPECT_THROW(table.insert("e", a), std::logic_error);
}

TEST(CodeTableTest, WidthValidation) {
    EXPECT_THROW(CodeTable(12), InvalidInput);
    EXPECT_THROW(CodeTable(0), InvalidInput);
    EXPECT_THROW(CodeTable(136), InvalidInput);
    EXPECT_NO_THROW(CodeTable(16));
}

TEST(CodeTableTest, EmptyTableAndSimpleRadius) {
    CodeTable empty;
    EXPECT_TRUE(empty.query_radius(HashCode(128), 0).empty());
    EXPECT_TRUE(empty.query_radius(HashCode(128), 40).empty());
    EXPECT_TRUE(empty.query_knn(HashCode(128), 5).empty());

    CodeTable table;
    HashCode x(128);
    HashCode y = x;
    for (int i : {1, 20, 40, 77, 100}) y.flip(i);
    table.insert("x", x);
    table.insert("y", y);
    EXPECT_EQ(table.query_radius(x, 2), (std::vector<Neighbor>{{"x", 0}}));
    EXPECT_EQ(table.query_radius(x, 5), (std::vector<Neighbor>{{"x", 0}, {"y", 5}}));
    EXPECT_THROW(table.query_radius(x, -1), InvalidInput);
    EXPECT_THROW(table.query_radius(x, 129), InvalidInput);
    EXPECT_THROW(table.query_radius(HashCode(64), 1), InvalidInput);
}

TEST(CodeTableTest, RadiusMatchesLinearScan) {
    const auto entries = oracle::clustered_entries(3000, 30, 11);
    const CodeTable table = build(entries);
    ASSERT_TRUE(table.audit().empty());
    std::mt19937_64 rng(12);
    for (int q = 0; q < 30; ++q) {
        const HashCode query = oracle::perturb(entries[rng() % entries.size()].code, q % 4, rng);
        std::size_t previous = 0;
        for (int r = 0; r <= 12; ++r) {
            const auto got = table.query_radius(query, r);
            EXPECT_EQ(got, oracle::linear_scan(entries, query, r)) << "r=" << r;
            EXPECT_GE(got.size(), previous);
            previous = got.size();
        }
    }
}

TEST(CodeTableTest, BallAndMultiIndexPathsAgree) {
    const auto entries = oracle::clustered_entries(2000, 20, 13);
    const CodeTable table = build(entries);
    std::mt19937_64 rng(14);
    for (int q = 0; q < 40; ++q) {
        const HashCode query = oracle::perturb(entries[rng() % entries.size()].code, q % 3, rng);
        for (int r = 0; r <= 2; ++r) {
            EXPECT_EQ(table.query_radius_ball(query, r), table.query_radius_mih(query, r));
        }
    }
    EXPECT_THROW(table.query_radius_ball(HashCode(128), 3), RadiusTooLarge);
}

TEST(CodeTableTest, LargeRadiiFallBackToBlockScans) {
    const auto entries = oracle::clustered_entries(500, 5, 15);
    const CodeTable table = build(entries);
    std::mt19937_64 rng(16);
    const HashCode query = oracle::random_code(rng);
    for (int r : {20, 60, 64, 90, 128}) {
        EXPECT_EQ(table.query_radius(query, r), oracle::linear_scan(entries, query, r));
    }
    EXPECT_EQ(table.query_radius(query, 128).size(), entries.size());
}

TEST(CodeTableTest, NarrowCodes) {
    std::mt19937_64 rng(17);
    std::vector<oracle::Entry> entries;
    for (int i = 0; i < 400; ++i) {
        entries.push_back({"n" + std::to_string(i), oracle::random_code(rng, 16)});
    }
    const CodeTable table = build(entries, 16);
    for (int r = 0; r <= 16; ++r) {
        const HashCode q = oracle::random_code(rng, 16);
        EXPECT_EQ(table.query_radius(q, r), oracle::linear_scan(entries, q, r));
    }
}

TEST(CodeTableTest, KnnMatchesSortedScan) {
    const auto entries = oracle::clustered_entries(2500, 25, 18);
    const CodeTable table = build(entries);
    std::mt19937_64 rng(19);
    for (int q = 0; q < 20; ++q) {
        const HashCode query = q % 2 ? oracle::random_code(rng)
                                     : oracle::perturb(entries[rng() % entries.size()].code, 2, rng);
        auto expected = oracle::linear_scan(entries, query, 128);
        for (std::size_t k : {1u, 25u, 200u}) {
            auto want = expected;
            want.resize(k);
            EXPECT_EQ(table.query_knn(query, k), want);
        }
    }
}

TEST(CodeTableTest, KnnSmallTables) {
    std::mt19937_64 rng(20);
    CodeTable table;
    const HashCode a = oracle::random_code(rng);
    table.insert("b", a);
    table.insert("a", a);
    table.insert("c", oracle::random_code(rng));
    EXPECT_EQ(table.query_knn(a, 10).size(), 3u);
    EXPECT_EQ(table.query_knn(a, 1), (std::vector<Neighbor>{{"a", 0}}));
    EXPECT_THROW(table.query_knn(a, 0), InvalidInput);
}

TEST(CodeStoreTest, FileLayout) {
    CodeTable table(16);
    HashCode c(16);
    c.set(0);
    c.set(15);
    table.insert("zz", c);
    table.insert("a", HashCode(16));
    const auto bytes = serialize_code_table(table);
    const std::vector<std::uint8_t> expected{
            'H', 'Q', 'C', 'T', 1, 0, 16, 0, 0, 0, 2, 0, 0, 0, 0, 0, 0, 0,
            1, 0, 'a', 0, 0,
            2, 0, 'z', 'z', 0x01, 0x80};
    EXPECT_EQ(bytes, expected);
}

TEST(CodeStoreTest, SaveLoadPreservesQueries) {
    const auto entries = oracle::clustered_entries(800, 8, 21);
    const CodeTable table = build(entries);
    const auto path = std::filesystem::temp_directory_path() / "hashcube_codes_test.bin";
    save_code_table(table, path);
    const CodeTable loaded = load_code_table(path);
    EXPECT_TRUE(loaded.frozen());
    EXPECT_EQ(loaded.size(), table.size());
    EXPECT_TRUE(loaded.audit().empty());
    std::mt19937_64 rng(22);
    for (int q = 0; q < 10; ++q) {
        const HashCode query = entries[rng() % entries.size()].code;
        EXPECT_EQ(loaded.query_radius(query, 6), table.query_radius(query, 6));
    }
    EXPECT_EQ(serialize_code_table(loaded), serialize_code_table(table));
    std::filesystem::remove(path);
}

TEST(CodeStoreTest, RejectsCorruptInput) {
    CodeTable table(8);
    table.insert("a", HashCode(8));
    auto bytes = serialize_code_table(table);
    auto bad = bytes;
    bad[3] = 'X';
    EXPECT_THROW(deserialize_code_table(bad), ParseError);
    auto truncated = bytes;
    truncated.pop_back();
    EXPECT_THROW(deserialize_code_table(truncated), ParseError);
    auto dup = bytes;
    dup[10] = 2;  // count 2 with one record then duplicate appended
    dup.insert(dup.end(), bytes.begin() + 18, bytes.end());
    EXPECT_THROW(deserialize_code_table(dup), DuplicateKey);
}
