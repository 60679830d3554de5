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

#include "hashcube/catalog/label_hierarchy.hpp"
#include "hashcube/error.hpp"

namespace hashcube {
namespace {

constexpr const char* kToy =
        "1\tA\n"
        "1.1\tA1\n"
        "1.1.1\tapple\n"
        "1.1.2\tbanana\n"
        "1.2\tA2\n"
        "1.2.1\tcherry\n"
        "2\tB\n"
        "2.1\tB1\n"
        "2.1.1\tdate\n"
        "2.1.2\telder\n"
        "2.1.3\tfig\t#123456\n";

std::vector<std::string> names(const LabelHierarchy& h, const LabelSet& s) { return h.decode(s); }

TEST(LabelHierarchy, BuiltinHasFortyThreeLeaves) {
    const auto& h = LabelHierarchy::builtin();
    EXPECT_EQ(h.leaf_count(), 43u);
    EXPECT_EQ(h.roots().size(), 5u);
    for (const auto& n : h.nodes()) {
        if (n.level == 3) {
            ASSERT_TRUE(n.parent.has_value());
            const auto& l2 = h.nodes()[*n.parent];
            EXPECT_EQ(l2.level, 2);
            ASSERT_TRUE(l2.parent.has_value());
            EXPECT_EQ(h.nodes()[*l2.parent].level, 1);
            EXPECT_EQ(n.color.size(), 7u);
        }
    }
}

TEST(LabelHierarchy, ForestExpandsToThreeForestLeaves) {
    const auto& h = LabelHierarchy::builtin();
    const std::vector<std::string> picked = {"Forest"};
    const auto leaves = names(h, h.expand_selection(picked));
    EXPECT_EQ(leaves, (std::vector<std::string>{"Broad-leaved forest", "Coniferous forest",
                                                "Mixed forest"}));
}

TEST(LabelHierarchy, LeafExpandsToItself) {
    const auto& h = LabelHierarchy::builtin();
    const std::vector<std::string> picked = {"Airports"};
    EXPECT_EQ(names(h, h.expand_selection(picked)), std::vector<std::string>{"Airports"});
}

TEST(LabelHierarchy, LevelOneIsUnionOfChildren) {
    const auto& h = LabelHierarchy::builtin();
    for (std::size_t root : h.roots()) {
        const auto& node = h.nodes()[root];
        const std::vector<std::string> one = {node.name};
        std::set<std::string> expected;
        for (std::size_t child : node.children) {
            const std::vector<std::string> c = {h.nodes()[child].code};
            for (const auto& leaf : names(h, h.expand_selection(c))) expected.insert(leaf);
        }
        const auto got = names(h, h.expand_selection(one));
        EXPECT_EQ(std::set<std::string>(got.begin(), got.end()), expected) << node.name;
    }
}

TEST(LabelHierarchy, CodesAndNamesBothResolve) {
    const auto& h = LabelHierarchy::builtin();
    const std::vector<std::string> by_code = {"3.1"};
    const std::vector<std::string> by_name = {"Forest"};
    EXPECT_EQ(h.expand_selection(by_code), h.expand_selection(by_name));
    // "Pastures" names both a level-2 group and its single leaf.
    ASSERT_TRUE(h.find_node("Pastures"));
    EXPECT_EQ(h.nodes()[*h.find_node("Pastures")].level, 2);
    EXPECT_TRUE(h.is_leaf("Pastures"));
}

TEST(LabelHierarchy, UnknownIdThrows) {
    const auto& h = LabelHierarchy::builtin();
    const std::vector<std::string> picked = {"Forest", "Moon dust"};
    EXPECT_THROW(h.expand_selection(picked), UnknownLabel);
    EXPECT_THROW(h.leaf_char("Forest"), UnknownLabel);
    EXPECT_THROW(h.leaf_name('~'), UnknownLabel);
}

TEST(LabelHierarchy, CharactersFollowSortedNames) {
    const auto h = LabelHierarchy::parse(kToy);
    EXPECT_EQ(h.leaf_char("apple"), '!');
    EXPECT_EQ(h.leaf_char("banana"), '"');
    EXPECT_EQ(h.leaf_char("fig"), '&');
    EXPECT_EQ(h.leaf_color('&'), "#123456");
    EXPECT_EQ(h.leaf_color('!').size(), 7u);
}

TEST(LabelHierarchy, EncodeEmptyIsEmpty) {
    const std::vector<std::string> none;
    EXPECT_EQ(encode_labels(LabelHierarchy::builtin(), none).chars(), "");
}

TEST(LabelHierarchy, EncodeIsInjectiveOverAllToySubsets) {
    const auto h = LabelHierarchy::parse(kToy);
    ASSERT_EQ(h.leaf_count(), 6u);
    std::set<std::string> seen;
    for (unsigned mask = 0; mask < 64; ++mask) {
        std::vector<std::string> subset;
        for (unsigned i = 0; i < 6; ++i) {
            if (mask & (1u << i)) subset.push_back(h.leaf_names()[i]);
        }
        const LabelSet s = encode_labels(h, subset);
        EXPECT_TRUE(seen.insert(s.chars()).second) << mask;
        EXPECT_EQ(h.decode(s), subset);
        EXPECT_TRUE(std::is_sorted(s.chars().begin(), s.chars().end()));
    }
    EXPECT_EQ(seen.size(), 64u);
}

TEST(LabelHierarchy, EncodeIsOrderInsensitive) {
    const auto h = LabelHierarchy::parse(kToy);
    const std::vector<std::string> a = {"fig", "apple", "date"};
    const std::vector<std::string> b = {"date", "fig", "apple", "fig"};
    EXPECT_EQ(h.encode(a), h.encode(b));
}

TEST(LabelHierarchy, TextRoundTrips) {
    const auto& h = LabelHierarchy::builtin();
    const auto again = LabelHierarchy::parse(h.to_text());
    EXPECT_EQ(again.to_text(), h.to_text());
    EXPECT_EQ(again.leaf_names(), h.leaf_names());
}

TEST(LabelHierarchy, ParseErrorsCiteLines) {
    try {
        LabelHierarchy::parse("1\tA\n1.1\tA1\n1.2.1\torphan\n", "h.txt");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.location, "h.txt:3");
    }
    EXPECT_THROW(LabelHierarchy::parse("1\tA\n", "h"), ParseError);           // childless group
    EXPECT_THROW(LabelHierarchy::parse("1\tA\n1.1\tB\n1.1.1\tx\t#zzzzzz\n"), ParseError);
    EXPECT_THROW(LabelHierarchy::parse("1 A\n"), ParseError);
    EXPECT_THROW(LabelHierarchy::parse("1\tA\n1.1\tB\n1.1.1\tx\n1.1.2\tx\n"), ParseError);
    EXPECT_THROW(LabelHierarchy::parse("1\tA\n1.1\tB\n1.1.1.1\tx\n"), ParseError);
}

TEST(LabelHierarchy, RejectsMoreThanNinetyFourLeaves) {
    std::string text = "1\tA\n1.1\tB\n";
    for (int i = 0; i < 95; ++i) text += "1.1." + std::to_string(i + 1) + "\tleaf" + std::to_string(i) + "\n";
    EXPECT_THROW(LabelHierarchy::parse(text), ParseError);
    text = "1\tA\n1.1\tB\n";
    for (int i = 0; i < 94; ++i) text += "1.1." + std::to_string(i + 1) + "\tleaf" + std::to_string(i) + "\n";
    const auto h = LabelHierarchy::parse(text);
    EXPECT_EQ(h.leaf_char(h.leaf_names().back()), '~');
}

} // namespace
} // namespace hashcube
