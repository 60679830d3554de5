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

#include <algorithm>
#include <stdexcept>

#include "hashcube/detail/file_io.hpp"
#include "hashcube/detail/le_io.hpp"
#include "hashcube/error.hpp"

namespace hashcube {

bool neighbor_less(const Neighbor& a, const Neighbor& b) {
    if (a.distance != b.distance) return a.distance < b.distance;
    return a.patch_name < b.patch_name;
}

CodeTable::CodeTable(std::size_t code_bits, int ball_cap)
        : code_bits_(code_bits), block_bits_(code_bits / kBlocks), ball_cap_(ball_cap) {
    if (code_bits < 8 || code_bits > HashCode::kMaxBits || code_bits % 8 != 0) {
        throw InvalidInput("code table width must be a multiple of 8 in [8, 128], got " +
                           std::to_string(code_bits));
    }
    if (ball_cap < 0) {
        throw InvalidInput("ball enumeration cap must be non-negative");
    }
}

void CodeTable::insert(std::string name, const HashCode& code) {
    if (frozen_) {
        throw std::logic_error("insert into a frozen code table");
    }
    if (code.bits() != code_bits_) {
        throw InvalidInput("code width " + std::to_string(code.bits()) +
                           " does not match table width " + std::to_string(code_bits_));
    }
    if (by_name_.contains(name)) {
        throw DuplicateKey(name);
    }
    const Id id = static_cast<Id>(names_.size());
    by_name_.emplace(name, id);
    names_.push_back(std::move(name));
    codes_.push_back(code);
    buckets_[code].push_back(id);
    for (std::size_t b = 0; b < kBlocks; ++b) {
        blocks_[b][block_key(code, b)].push_back(id);
    }
}

const HashCode* CodeTable::find(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    return it == by_name_.end() ? nullptr : &codes_[it->second];
}

const HashCode& CodeTable::lookup(std::string_view name) const {
    const HashCode* code = find(name);
    if (code == nullptr) {
        throw NotFound("unknown patch: " + std::string(name));
    }
    return *code;
}

void CodeTable::check_query(const HashCode& query, int radius) const {
    if (query.bits() != code_bits_) {
        throw InvalidInput("query code width " + std::to_string(query.bits()) +
                           " does not match table width " + std::to_string(code_bits_));
    }
    if (radius < 0 || static_cast<std::size_t>(radius) > code_bits_) {
        throw InvalidInput("radius must be in [0, " + std::to_string(code_bits_) + "]");
    }
}

std::vector<Neighbor> CodeTable::finish(std::vector<std::pair<int, Id>> hits) const {
    std::vector<Neighbor> out;
    out.reserve(hits.size());
    for (const auto& [d, id] : hits) {
        out.push_back({names_[id], d});
    }
    std::sort(out.begin(), out.end(), neighbor_less);
    return out;
}

std::vector<Neighbor> CodeTable::query_radius(const HashCode& query, int radius) const {
    check_query(query, radius);
    if (radius <= ball_cap_) {
        return query_radius_ball(query, radius);
    }
    return query_radius_mih(query, radius);
}

std::vector<Neighbor> CodeTable::query_radius_ball(const HashCode& query, int radius) const {
    check_query(query, radius);
    std::vector<std::pair<int, Id>> hits;
    if (names_.empty()) return {};
    for (const HashCode& probe : enumerate_ball(query, radius, ball_cap_)) {
        auto it = buckets_.find(probe);
        if (it == buckets_.end()) continue;
        const int d = hamming_distance(query, probe);
        for (Id id : it->second) hits.emplace_back(d, id);
    }
    return finish(std::move(hits));
}

std::vector<Neighbor> CodeTable::query_radius_mih(const HashCode& query, int radius) const {
    check_query(query, radius);
    if (names_.empty()) return {};
    const int sub = radius / static_cast<int>(kBlocks);
    std::vector<Id> candidates;
    for (std::size_t b = 0; b < kBlocks; ++b) {
        const auto& table = blocks_[b];
        const std::uint32_t key = block_key(query, b);
        auto take = [&](std::uint32_t probe) {
            auto it = table.find(probe);
            if (it != table.end()) {
                candidates.insert(candidates.end(), it->second.begin(), it->second.end());
            }
        };
        if (ball_size(block_bits_, sub) <= table.size()) {
            for_each_in_ball(key, block_bits_, sub, take);
        } else {
            for (const auto& [k, ids] : table) {
                if (std::popcount(k ^ key) <= sub) {
                    candidates.insert(candidates.end(), ids.begin(), ids.end());
                }
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    std::vector<std::pair<int, Id>> hits;
    for (Id id : candidates) {
        const int d = hamming_distance(query, codes_[id]);
        if (d <= radius) hits.emplace_back(d, id);
    }
    return finish(std::move(hits));
}

std::vector<Neighbor> CodeTable::scan(const HashCode& query, int radius) const {
    std::vector<std::pair<int, Id>> hits;
    for (Id id = 0; id < codes_.size(); ++id) {
        const int d = hamming_distance(query, codes_[id]);
        if (d <= radius) hits.emplace_back(d, id);
    }
    return finish(std::move(hits));
}

std::vector<Neighbor> CodeTable::query_knn(const HashCode& query, std::size_t k) const {
    if (k == 0) {
        throw InvalidInput("k must be at least 1");
    }
    check_query(query, 0);
    const int max_radius = static_cast<int>(code_bits_);
    auto done = [&](std::vector<Neighbor>& found) {
        if (found.size() < k) return false;
        found.resize(k);
        return true;
    };
    int r = 0;
    for (; r <= std::min(ball_cap_, max_radius); ++r) {
        auto found = query_radius_ball(query, r);
        if (done(found)) return found;
    }
    // MIH while the per-block sub-balls are smaller than the table.
    for (; r <= max_radius; ++r) {
        const int sub = r / static_cast<int>(kBlocks);
        if (ball_size(block_bits_, sub) * kBlocks >= names_.size()) break;
        auto found = query_radius_mih(query, r);
        if (done(found)) return found;
    }
    auto all = scan(query, max_radius);
    if (all.size() > k) all.resize(k);
    return all;
}

std::vector<std::string> CodeTable::audit() const {
    std::vector<std::string> problems;
    if (by_name_.size() != names_.size() || codes_.size() != names_.size()) {
        problems.push_back("name map size differs from record count");
    }
    std::vector<int> bucket_hits(names_.size(), 0);
    std::size_t bucketed = 0;
    for (const auto& [code, ids] : buckets_) {
        for (Id id : ids) {
            ++bucketed;
            if (id >= names_.size()) {
                problems.push_back("bucket holds out-of-range id");
                continue;
            }
            ++bucket_hits[id];
            if (!(codes_[id] == code)) {
                problems.push_back("'" + names_[id] + "' sits in a bucket for another code");
            }
        }
    }
    for (Id id = 0; id < names_.size(); ++id) {
        if (bucket_hits[id] != 1) {
            problems.push_back("'" + names_[id] + "' appears in " +
                               std::to_string(bucket_hits[id]) + " buckets");
        }
        auto it = by_name_.find(names_[id]);
        if (it == by_name_.end() || it->second != id) {
            problems.push_back("'" + names_[id] + "' does not resolve to its own record");
        }
    }
    if (bucketed != names_.size()) {
        problems.push_back("bucket total " + std::to_string(bucketed) + " != record count " +
                           std::to_string(names_.size()));
    }
    for (std::size_t b = 0; b < kBlocks; ++b) {
        std::size_t total = 0;
        for (const auto& [key, ids] : blocks_[b]) {
            for (Id id : ids) {
                ++total;
                if (id >= codes_.size() || block_key(codes_[id], b) != key) {
                    problems.push_back("block table " + std::to_string(b) +
                                       " disagrees with the name map");
                }
            }
        }
        if (total != names_.size()) {
            problems.push_back("block table " + std::to_string(b) + " holds " +
                               std::to_string(total) + " entries, expected " +
                               std::to_string(names_.size()));
        }
    }
    return problems;
}

std::vector<std::pair<std::string, HashCode>> CodeTable::sorted_entries() const {
    std::vector<std::pair<std::string, HashCode>> out;
    out.reserve(names_.size());
    for (Id id = 0; id < names_.size(); ++id) out.emplace_back(names_[id], codes_[id]);
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

namespace {

constexpr char kStoreMagic[4] = {'H', 'Q', 'C', 'T'};
constexpr std::uint16_t kStoreVersion = 1;

} // namespace

std::vector<std::uint8_t> serialize_code_table(const CodeTable& table) {
    detail::ByteWriter out;
    out.raw(std::string_view(kStoreMagic, 4));
    out.put<std::uint16_t>(kStoreVersion);
    out.put<std::uint32_t>(static_cast<std::uint32_t>(table.code_bits()));
    out.put<std::uint64_t>(table.size());
    for (const auto& [name, code] : table.sorted_entries()) {
        if (name.size() > 0xffff) {
            throw InvalidInput("patch name longer than 65535 bytes: " + name.substr(0, 32));
        }
        out.put<std::uint16_t>(static_cast<std::uint16_t>(name.size()));
        out.raw(name);
        out.raw(code.to_bytes());
    }
    return std::move(out.bytes());
}

CodeTable deserialize_code_table(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes, "codes");
    auto magic = in.raw(4);
    if (!std::equal(magic.begin(), magic.end(), kStoreMagic)) {
        throw ParseError("codes@0", "bad magic, expected HQCT");
    }
    const auto version = in.get<std::uint16_t>();
    if (version != kStoreVersion) {
        throw ParseError("codes@4", "unsupported code store version " + std::to_string(version));
    }
    const auto bits = in.get<std::uint32_t>();
    const auto count = in.get<std::uint64_t>();
    CodeTable table(bits);
    for (std::uint64_t i = 0; i < count; ++i) {
        const auto len = in.get<std::uint16_t>();
        auto name = in.raw(len);
        auto code = in.raw(bits / 8);
        table.insert(std::string(name.begin(), name.end()), HashCode::from_bytes(code, bits));
    }
    if (!in.done()) {
        throw ParseError("codes@" + std::to_string(in.offset()), "trailing bytes");
    }
    table.freeze();
    return table;
}

void save_code_table(const CodeTable& table, const std::filesystem::path& path) {
    detail::write_file_bytes(path, serialize_code_table(table));
}

CodeTable load_code_table(const std::filesystem::path& path) {
    return deserialize_code_table(detail::read_file_bytes(path));
}

} // namespace hashcube
