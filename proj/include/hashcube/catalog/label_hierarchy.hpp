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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hashcube {

/// A set of leaf labels in compact form: one printable ASCII character per
/// leaf, sorted ascending, no repeats. Equality and ordering are those of
/// the underlying string.
class LabelSet {
public:
    LabelSet() = default;

    /// Sorts and deduplicates.
    static LabelSet from_chars(std::string chars);

    const std::string& chars() const { return chars_; }
    std::size_t size() const { return chars_.size(); }
    bool empty() const { return chars_.empty(); }
    bool contains(char c) const;

    bool intersects(const LabelSet& other) const;
    bool includes(const LabelSet& other) const;

    friend bool operator==(const LabelSet&, const LabelSet&) = default;
    friend auto operator<=>(const LabelSet&, const LabelSet&) = default;

private:
    std::string chars_;
};

/// Three-level land-cover nomenclature. Level-1 groups contain level-2
/// groups, which contain level-3 leaves; records are labelled with leaves
/// only. Leaves are assigned consecutive characters from '!' in
/// lexicographic name order.
///
/// Text format, one node per line, TAB-separated:
///
///     <code>\t<name>[\t#rrggbb]
///
/// where the code's dot count gives the level ("3", "3.1", "3.1.2") and its
/// prefix names the parent. Blank lines and lines starting with '#' are
/// ignored. The optional color applies to leaves.
class LabelHierarchy {
public:
    static constexpr std::size_t kMaxLeaves = 94;
    static constexpr char kFirstChar = '!';

    struct Node {
        std::string code;
        std::string name;
        int level = 0;                      // 1, 2 or 3
        std::optional<std::size_t> parent;  // index into nodes()
        std::vector<std::size_t> children;
        std::string color;                  // leaves only, "#rrggbb"
    };

    static LabelHierarchy parse(std::string_view text, std::string_view source = "hierarchy");

    /// The representative CORINE-style nomenclature shipped with the library.
    static const LabelHierarchy& builtin();
    static std::string_view builtin_text();

    std::string to_text() const;

    std::span<const Node> nodes() const { return nodes_; }
    std::span<const std::size_t> roots() const { return roots_; }

    std::size_t leaf_count() const { return leaves_.size(); }
    /// Leaf names in character order.
    const std::vector<std::string>& leaf_names() const { return leaves_; }

    /// Node by code or name; a name shared across levels resolves to the
    /// shallowest node.
    std::optional<std::size_t> find_node(std::string_view id) const;

    /// Union of leaf descendants. Throws UnknownLabel.
    LabelSet expand_selection(std::span<const std::string> ids) const;

    /// Throws UnknownLabel for names that are not leaves.
    char leaf_char(std::string_view leaf) const;
    const std::string& leaf_name(char c) const;
    const std::string& leaf_color(char c) const;
    bool is_leaf(std::string_view name) const { return leaf_index_.contains(std::string(name)); }

    LabelSet encode(std::span<const std::string> leaves) const;
    std::vector<std::string> decode(const LabelSet& set) const;

private:
    void finalize();

    std::vector<Node> nodes_;
    std::vector<std::size_t> roots_;
    std::vector<std::string> leaves_;
    std::vector<std::string> leaf_colors_;
    std::unordered_map<std::string, std::size_t> leaf_index_;
    std::unordered_map<std::string, std::size_t> by_code_;
    std::unordered_map<std::string, std::size_t> by_name_;
};

/// Encodes leaf names through the hierarchy's compaction table.
LabelSet encode_labels(const LabelHierarchy& h, std::span<const std::string> leaves);

} // namespace hashcube
