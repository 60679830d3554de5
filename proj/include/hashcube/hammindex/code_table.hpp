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
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hashcube/hammindex/hamming.hpp"
#include "hashcube/hashcore/hash_code.hpp"

namespace hashcube {

struct Neighbor {
    std::string patch_name;
    int distance = 0;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Orders by distance, then patch name.
bool neighbor_less(const Neighbor& a, const Neighbor& b);

/// In-memory code index: patch name -> code, exact-code buckets, and four
/// block tables keyed by consecutive B/4-bit slices of the code.
///
/// Radius queries up to the ball cap probe the buckets for every code in the
/// Hamming ball. Larger radii use the pigeonhole bound: a code within r of
/// the query agrees with it to within floor(r/4) on at least one block, so
/// the union of block-table hits is a candidate superset that is then
/// verified exactly.
///
/// Writes happen before freeze(); afterwards the table is read-only and safe
/// for concurrent queries.
class CodeTable {
public:
    static constexpr std::size_t kBlocks = 4;

    /// `code_bits` must be a multiple of 8 in [8, 128].
    explicit CodeTable(std::size_t code_bits = HashCode::kCanonicalBits,
                       int ball_cap = kDefaultBallCap);

    std::size_t code_bits() const { return code_bits_; }
    int ball_cap() const { return ball_cap_; }
    std::size_t size() const { return names_.size(); }
    bool empty() const { return names_.empty(); }

    /// Throws DuplicateKey for a known name, InvalidInput for a width
    /// mismatch, and std::logic_error once frozen.
    void insert(std::string name, const HashCode& code);
    void freeze() { frozen_ = true; }
    bool frozen() const { return frozen_; }

    /// nullptr when absent.
    const HashCode* find(std::string_view name) const;
    /// Throws NotFound when absent.
    const HashCode& lookup(std::string_view name) const;

    /// Every stored name within distance r (0 <= r <= B), ordered by
    /// distance then name.
    std::vector<Neighbor> query_radius(const HashCode& query, int radius) const;

    /// The two strategies behind query_radius, exposed for cross-checking.
    /// query_radius_ball throws RadiusTooLarge above the ball cap.
    std::vector<Neighbor> query_radius_ball(const HashCode& query, int radius) const;
    std::vector<Neighbor> query_radius_mih(const HashCode& query, int radius) const;

    /// The k nearest names (fewer if the table is smaller), same ordering.
    std::vector<Neighbor> query_knn(const HashCode& query, std::size_t k) const;

    /// Consistency check of buckets and block tables against the name map.
    /// Returns one message per violation; empty means consistent.
    std::vector<std::string> audit() const;

    /// Names sorted lexicographically, paired with their codes.
    std::vector<std::pair<std::string, HashCode>> sorted_entries() const;

private:
    using Id = std::uint32_t;

    std::uint32_t block_key(const HashCode& code, std::size_t block) const {
        return code.extract(block * block_bits_, block_bits_);
    }
    void check_query(const HashCode& query, int radius) const;
    std::vector<Neighbor> finish(std::vector<std::pair<int, Id>> hits) const;
    std::vector<Neighbor> scan(const HashCode& query, int radius) const;

    std::size_t code_bits_;
    std::size_t block_bits_;
    int ball_cap_;
    bool frozen_ = false;

    std::vector<std::string> names_;
    std::vector<HashCode> codes_;
    std::unordered_map<std::string, Id> by_name_;
    std::unordered_map<HashCode, std::vector<Id>, HashCodeHash> buckets_;
    std::array<std::unordered_map<std::uint32_t, std::vector<Id>>, kBlocks> blocks_;
};

/// Code store file: "HQCT", u16 version, u32 B, u64 count, then per record
/// u16 name length, UTF-8 name, B/8 code bytes. Records are written in name
/// order so identical tables give identical files.
std::vector<std::uint8_t> serialize_code_table(const CodeTable& table);
CodeTable deserialize_code_table(std::span<const std::uint8_t> bytes);

void save_code_table(const CodeTable& table, const std::filesystem::path& path);
/// The returned table is frozen.
CodeTable load_code_table(const std::filesystem::path& path);

} // namespace hashcube
