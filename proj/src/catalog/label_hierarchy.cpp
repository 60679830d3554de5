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

#include "hashcube/catalog/label_hierarchy.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "hashcube/error.hpp"

namespace hashcube {

namespace {

// CORINE-style three-level land cover nomenclature (the 43 leaf classes used
// by multi-label Sentinel patch archives) with the customary CLC colors.
constexpr std::string_view kBuiltin = R"(# code	name	color
1	Artificial surfaces
1.1	Urban fabric
1.1.1	Continuous urban fabric	#e6004d
1.1.2	Discontinuous urban fabric	#ff0000
1.2	Industrial, commercial and transport units
1.2.1	Industrial or commercial units	#cc4df2
1.2.2	Road and rail networks and associated land	#cc0000
1.2.3	Port areas	#e6cccc
1.2.4	Airports	#e6cce6
1.3	Mine, dump and construction sites
1.3.1	Mineral extraction sites	#a600cc
1.3.2	Dump sites	#a64d00
1.3.3	Construction sites	#ff4dff
1.4	Artificial, non-agricultural vegetated areas
1.4.1	Green urban areas	#ffa6ff
1.4.2	Sport and leisure facilities	#ffe6ff
2	Agricultural areas
2.1	Arable land
2.1.1	Non-irrigated arable land	#ffffa8
2.1.2	Permanently irrigated land	#ffff00
2.1.3	Rice fields	#e6e600
2.2	Permanent crops
2.2.1	Vineyards	#e68000
2.2.2	Fruit trees and berry plantations	#f2a64d
2.2.3	Olive groves	#e6a600
2.3	Pastures
2.3.1	Pastures	#e6e64d
2.4	Heterogeneous agricultural areas
2.4.1	Annual crops associated with permanent crops	#ffe6a6
2.4.2	Complex cultivation patterns	#ffe64d
2.4.3	Land principally occupied by agriculture, with significant areas of natural vegetation	#e6cc4d
2.4.4	Agro-forestry areas	#f2cca6
3	Forest and semi natural areas
3.1	Forest
3.1.1	Broad-leaved forest	#80ff00
3.1.2	Coniferous forest	#00a600
3.1.3	Mixed forest	#4dff00
3.2	Scrub and/or herbaceous vegetation associations
3.2.1	Natural grassland	#ccf24d
3.2.2	Moors and heathland	#a6ff80
3.2.3	Sclerophyllous vegetation	#a6e64d
3.2.4	Transitional woodland/shrub	#a6f200
3.3	Open spaces with little or no vegetation
3.3.1	Beaches, dunes, sands	#e6e6e6
3.3.2	Bare rock	#cccccc
3.3.3	Sparsely vegetated areas	#ccffcc
3.3.4	Burnt areas	#000000
4	Wetlands
4.1	Inland wetlands
4.1.1	Inland marshes	#a6a6ff
4.1.2	Peatbogs	#4d4dff
4.2	Maritime wetlands
4.2.1	Salt marshes	#ccccff
4.2.2	Salines	#e6e6ff
4.2.3	Intertidal flats	#a6a6e6
5	Water bodies
5.1	Inland waters
5.1.1	Water courses	#00ccf2
5.1.2	Water bodies	#80f2e6
5.2	Marine waters
5.2.1	Coastal lagoons	#00ffa6
5.2.2	Estuaries	#a6ffe6
5.2.3	Sea and ocean	#e6f2ff
)";

// Used for leaves whose line carries no color, indexed by leaf character.
constexpr std::array<std::string_view, 12> kFallbackPalette = {
        "#e6004d", "#cc4df2", "#ffa6ff", "#ffff00", "#e68000", "#e6e64d",
        "#00a600", "#a6f200", "#cccccc", "#a6a6ff", "#00ccf2", "#e6f2ff"};

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        out.push_back(line.substr(start, tab - start));
        if (tab == std::string_view::npos) break;
        start = tab + 1;
    }
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

bool valid_color(std::string_view c) {
    if (c.size() != 7 || c[0] != '#') return false;
    return std::all_of(c.begin() + 1, c.end(), [](char ch) {
        return (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f') || (ch >= 'A' && ch <= 'F');
    });
}

} // namespace

LabelSet LabelSet::from_chars(std::string chars) {
    std::sort(chars.begin(), chars.end());
    chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
    LabelSet s;
    s.chars_ = std::move(chars);
    return s;
}

bool LabelSet::contains(char c) const {
    return std::binary_search(chars_.begin(), chars_.end(), c);
}

bool LabelSet::intersects(const LabelSet& other) const {
    auto a = chars_.begin();
    auto b = other.chars_.begin();
    while (a != chars_.end() && b != other.chars_.end()) {
        if (*a == *b) return true;
        if (*a < *b) {
            ++a;
        } else {
            ++b;
        }
    }
    return false;
}

bool LabelSet::includes(const LabelSet& other) const {
    return std::includes(chars_.begin(), chars_.end(), other.chars_.begin(), other.chars_.end());
}

LabelHierarchy LabelHierarchy::parse(std::string_view text, std::string_view source) {
    LabelHierarchy h;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const std::string where = std::string(source) + ":" + std::to_string(line_no);
        if (trim(line).empty() || trim(line).front() == '#') continue;

        const auto fields = split_tabs(line);
        if (fields.size() < 2 || fields.size() > 3) {
            throw ParseError(where, "expected <code>\\t<name>[\\t<color>]");
        }
        Node node;
        node.code = std::string(trim(fields[0]));
        node.name = std::string(trim(fields[1]));
        if (node.code.empty() || node.name.empty()) {
            throw ParseError(where, "empty code or name");
        }
        for (char c : node.code) {
            if (!(c == '.' || (c >= '0' && c <= '9'))) {
                throw ParseError(where, "code must be dot-separated digits: " + node.code);
            }
        }
        node.level = 1 + static_cast<int>(std::count(node.code.begin(), node.code.end(), '.'));
        if (node.level > 3) {
            throw ParseError(where, "hierarchy has at most three levels: " + node.code);
        }
        if (fields.size() == 3) {
            const auto color = trim(fields[2]);
            if (!valid_color(color)) {
                throw ParseError(where, "color must be #rrggbb");
            }
            if (node.level != 3) {
                throw ParseError(where, "only leaves carry colors");
            }
            node.color = std::string(color);
            std::transform(node.color.begin(), node.color.end(), node.color.begin(),
                           [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
        }
        if (h.by_code_.contains(node.code)) {
            throw ParseError(where, "duplicate code " + node.code);
        }
        const std::size_t index = h.nodes_.size();
        if (node.level > 1) {
            const std::string parent_code = node.code.substr(0, node.code.rfind('.'));
            auto it = h.by_code_.find(parent_code);
            if (it == h.by_code_.end()) {
                throw ParseError(where, "parent " + parent_code + " of " + node.code +
                                        " must appear earlier");
            }
            node.parent = it->second;
            h.nodes_[it->second].children.push_back(index);
        } else {
            h.roots_.push_back(index);
        }
        if (node.level == 3 && h.leaf_index_.contains(node.name)) {
            throw ParseError(where, "duplicate leaf name " + node.name);
        }
        if (node.level == 3) h.leaf_index_.emplace(node.name, 0);
        h.by_code_.emplace(node.code, index);
        auto [name_it, inserted] = h.by_name_.emplace(node.name, index);
        if (!inserted && h.nodes_[name_it->second].level == node.level) {
            throw ParseError(where, "duplicate level-" + std::to_string(node.level) +
                                    " name " + node.name);
        }
        h.nodes_.push_back(std::move(node));
    }
    for (const auto& n : h.nodes_) {
        if (n.level < 3 && n.children.empty()) {
            throw ParseError(std::string(source), "group " + n.code + " has no children");
        }
    }
    if (h.leaf_index_.size() > kMaxLeaves) {
        throw ParseError(std::string(source), "more than 94 leaves do not fit printable ASCII");
    }
    h.finalize();
    return h;
}

void LabelHierarchy::finalize() {
    leaves_.clear();
    for (const auto& n : nodes_) {
        if (n.level == 3) leaves_.push_back(n.name);
    }
    std::sort(leaves_.begin(), leaves_.end());
    leaf_colors_.assign(leaves_.size(), {});
    for (std::size_t i = 0; i < leaves_.size(); ++i) leaf_index_[leaves_[i]] = i;
    for (const auto& n : nodes_) {
        if (n.level != 3) continue;
        const std::size_t i = leaf_index_.at(n.name);
        leaf_colors_[i] = n.color.empty() ? std::string(kFallbackPalette[i % kFallbackPalette.size()])
                                          : n.color;
    }
}

const LabelHierarchy& LabelHierarchy::builtin() {
    static const LabelHierarchy h = parse(kBuiltin, "builtin");
    return h;
}

std::string_view LabelHierarchy::builtin_text() { return kBuiltin; }

std::string LabelHierarchy::to_text() const {
    std::ostringstream out;
    out << "# code\tname\tcolor\n";
    for (const auto& n : nodes_) {
        out << n.code << '\t' << n.name;
        if (!n.color.empty()) out << '\t' << n.color;
        out << '\n';
    }
    return out.str();
}

std::optional<std::size_t> LabelHierarchy::find_node(std::string_view id) const {
    const std::string key(id);
    if (auto it = by_code_.find(key); it != by_code_.end()) return it->second;
    if (auto it = by_name_.find(key); it != by_name_.end()) return it->second;
    return std::nullopt;
}

LabelSet LabelHierarchy::expand_selection(std::span<const std::string> ids) const {
    std::string chars;
    std::vector<std::size_t> stack;
    for (const auto& id : ids) {
        const auto node = find_node(id);
        if (!node) throw UnknownLabel(id);
        stack.push_back(*node);
        while (!stack.empty()) {
            const Node& n = nodes_[stack.back()];
            stack.pop_back();
            if (n.level == 3) {
                chars.push_back(leaf_char(n.name));
            } else {
                stack.insert(stack.end(), n.children.begin(), n.children.end());
            }
        }
    }
    return LabelSet::from_chars(std::move(chars));
}

char LabelHierarchy::leaf_char(std::string_view leaf) const {
    auto it = leaf_index_.find(std::string(leaf));
    if (it == leaf_index_.end()) throw UnknownLabel(std::string(leaf));
    return static_cast<char>(kFirstChar + static_cast<int>(it->second));
}

const std::string& LabelHierarchy::leaf_name(char c) const {
    const int i = c - kFirstChar;
    if (i < 0 || static_cast<std::size_t>(i) >= leaves_.size()) {
        throw UnknownLabel(std::string(1, c));
    }
    return leaves_[static_cast<std::size_t>(i)];
}

const std::string& LabelHierarchy::leaf_color(char c) const {
    leaf_name(c);
    return leaf_colors_[static_cast<std::size_t>(c - kFirstChar)];
}

LabelSet LabelHierarchy::encode(std::span<const std::string> leaves) const {
    std::string chars;
    chars.reserve(leaves.size());
    for (const auto& l : leaves) chars.push_back(leaf_char(l));
    return LabelSet::from_chars(std::move(chars));
}

std::vector<std::string> LabelHierarchy::decode(const LabelSet& set) const {
    std::vector<std::string> out;
    out.reserve(set.size());
    for (char c : set.chars()) out.push_back(leaf_name(c));
    return out;
}

LabelSet encode_labels(const LabelHierarchy& h, std::span<const std::string> leaves) {
    return h.encode(leaves);
}

} // namespace hashcube
