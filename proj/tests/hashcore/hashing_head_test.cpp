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

#include "hashcube/hashcore/hashing_head.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <random>

#include "hashcube/detail/file_io.hpp"
#include "hashcube/error.hpp"

using namespace hashcube;

TEST(ForwardTest, ZeroHeadGivesZeroSoftCode) {
    HashingHead head(5, 16);
    const SoftCode s = forward(head, FeatureVector{1, -2, 3, 100, -7});
    ASSERT_EQ(s.size(), 16u);
    for (double v : s) EXPECT_EQ(v, 0.0);
}

TEST(ForwardTest, ScalarTanh) {
    HashingHead head(1, 1);
    head.weight(0, 0) = 1.0;
    const SoftCode s = forward(head, FeatureVector{0.5});
    // tanh(0.5) = (e - 1) / (e + 1)
    const double e = std::exp(1.0);
    EXPECT_NEAR(s[0], (e - 1.0) / (e + 1.0), 1e-15);
    EXPECT_NEAR(s[0], 0.4621, 1e-4);
}

TEST(ForwardTest, SaturatesAtLargeInputs) {
    HashingHead head(4, 4);
    for (std::size_t i = 0; i < 4; ++i) head.weight(i, i) = 1.0;
    const SoftCode s = forward(head, FeatureVector{50, 80, 1e3, 1e6});
    for (double v : s) EXPECT_NEAR(v, 1.0, 1e-6);
}

TEST(ForwardTest, DimensionMismatch) {
    HashingHead head(3, 8);
    EXPECT_THROW(forward(head, FeatureVector{1, 2}), DimensionMismatch);
    EXPECT_THROW(infer_code(head, FeatureVector{1, 2, 3, 4}), DimensionMismatch);
}

TEST(ForwardTest, EntriesStrictlyInsideUnitInterval) {
    HashingHead head = HashingHead::random(16, 32, 3);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g(0.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        FeatureVector x(16);
        for (double& v : x) v = g(rng);
        for (double s : forward(head, x)) {
            EXPECT_GT(s, -1.0);
            EXPECT_LT(s, 1.0);
        }
    }
}

TEST(SignBinarizeTest, MixedSigns) {
    const HashCode c = sign_binarize(SoftCode{0.3, -0.2, 0.0, -5.0});
    EXPECT_TRUE(c.test(0));
    EXPECT_FALSE(c.test(1));
    EXPECT_TRUE(c.test(2));
    EXPECT_FALSE(c.test(3));
}

TEST(SignBinarizeTest, UniformSigns) {
    EXPECT_EQ(sign_binarize(SoftCode(128, 0.9)), HashCode::ones(128));
    EXPECT_EQ(sign_binarize(SoftCode(128, -0.9)), HashCode(128));
}

TEST(SignBinarizeTest, ScaleInvariantOnSignDefiniteInputs) {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        SoftCode s(64);
        for (double& v : s) {
            do { v = u(rng); } while (v == 0.0);
        }
        SoftCode half = s;
        for (double& v : half) v *= 0.5;
        EXPECT_EQ(sign_binarize(s), sign_binarize(half));
    }
}

TEST(InferCodeTest, ZeroHeadTiesToOnes) {
    HashingHead head(8, 128);
    EXPECT_EQ(infer_code(head, FeatureVector(8, 3.0)), HashCode::ones(128));
}

TEST(InferCodeTest, DeterministicAndComposed) {
    HashingHead head = HashingHead::random(32, 128, 17);
    FeatureVector x(32);
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(static_cast<double>(i));
    EXPECT_EQ(infer_code(head, x), infer_code(head, x));
    EXPECT_EQ(infer_code(head, x), sign_binarize(forward(head, x)));
}

TEST(HashingHeadTest, DefaultsAndValidation) {
    HashingHead head(128, 128);
    EXPECT_DOUBLE_EQ(head.margin(), 16.0);
    EXPECT_DOUBLE_EQ(HashingHead(4, 16).margin(), 2.0);
    EXPECT_DOUBLE_EQ(head.loss_weights().triplet, 1.0);
    EXPECT_DOUBLE_EQ(head.loss_weights().bit_balance, 0.5);
    EXPECT_DOUBLE_EQ(head.loss_weights().quantization, 0.5);
    EXPECT_THROW(head.set_margin(0.0), InvalidInput);
    EXPECT_THROW(head.set_loss_weights({-1.0, 0.0, 0.0}), InvalidInput);
    EXPECT_THROW(HashingHead(0, 8), InvalidInput);
    EXPECT_THROW(HashingHead(8, 129), InvalidInput);
    head.weights()[3] = std::nan("");
    EXPECT_THROW(head.validate(), InvalidInput);
}

TEST(HeadFileTest, LayoutMatchesFormat) {
    HashingHead head(2, 3);
    head.weight(1, 0) = 1.5;
    head.bias()[2] = -0.25;
    const auto bytes = serialize_head(head);
    // magic + version + D + B + (6 + 3 + 4) doubles
    ASSERT_EQ(bytes.size(), 4u + 2 + 4 + 4 + 13 * 8);
    EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "HQHD");
    EXPECT_EQ(bytes[4], 1);
    EXPECT_EQ(bytes[5], 0);
    EXPECT_EQ(bytes[6], 2);
    EXPECT_EQ(bytes[10], 3);
    double w;
    std::memcpy(&w, bytes.data() + 14 + 2 * 8, 8);
    EXPECT_EQ(w, 1.5);
    double margin;
    std::memcpy(&margin, bytes.data() + bytes.size() - 8, 8);
    EXPECT_EQ(margin, HashingHead::default_margin(3));
}

TEST(HeadFileTest, SaveLoadRoundtrip) {
    HashingHead head = HashingHead::random(7, 24, 99);
    head.set_loss_weights({0.7, 0.2, 0.1});
    head.set_margin(1.25);
    const auto path = std::filesystem::temp_directory_path() / "hashcube_head_test.bin";
    save_head(head, path);
    EXPECT_EQ(load_head(path), head);
    std::filesystem::remove(path);
}

TEST(HeadFileTest, RejectsCorruptFiles) {
    auto bytes = serialize_head(HashingHead(2, 8));
    auto bad_magic = bytes;
    bad_magic[0] = 'X';
    EXPECT_THROW(deserialize_head(bad_magic), ParseError);
    auto truncated = bytes;
    truncated.pop_back();
    EXPECT_THROW(deserialize_head(truncated), ParseError);
    auto trailing = bytes;
    trailing.push_back(0);
    EXPECT_THROW(deserialize_head(trailing), ParseError);
}
