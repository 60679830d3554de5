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

#include <png.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

#include "hashcube/detail/zip.hpp"
#include "hashcube/error.hpp"
#include "hashcube/ingest/image_io.hpp"

namespace hashcube {
namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) { return {s.begin(), s.end()}; }

struct DecodedPng {
    std::size_t width = 0, height = 0;
    std::vector<std::uint8_t> rgb;
};

// Reads an 8-bit RGB PNG with libpng's simplified API.
DecodedPng decode_png(const std::vector<std::uint8_t>& bytes) {
    png_image image;
    std::memset(&image, 0, sizeof image);
    image.version = PNG_IMAGE_VERSION;
    EXPECT_TRUE(png_image_begin_read_from_memory(&image, bytes.data(), bytes.size()));
    image.format = PNG_FORMAT_RGB;
    DecodedPng out;
    out.width = image.width;
    out.height = image.height;
    out.rgb.resize(PNG_IMAGE_SIZE(image));
    EXPECT_TRUE(png_image_finish_read(&image, nullptr, out.rgb.data(), 0, nullptr));
    return out;
}

BandGrid random_band(std::size_t w, std::size_t h, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    BandGrid b{"B", w, h, std::vector<double>(w * h)};
    for (double& v : b.values) v = static_cast<double>(rng() % 65536);
    return b;
}

TEST(Pgm, SixteenBitRoundTrip) {
    const BandGrid band = random_band(7, 5, 3);
    const auto bytes = encode_pgm(band);
    const BandGrid back = decode_pgm(bytes, "B");
    EXPECT_EQ(back.width, 7u);
    EXPECT_EQ(back.height, 5u);
    EXPECT_EQ(back.values, band.values);
}

TEST(Pgm, EncodeRoundsAndClamps) {
    BandGrid band{"B", 3, 1, {-5.0, 2.6, 70000.0}};
    const BandGrid back = decode_pgm(encode_pgm(band), "B");
    EXPECT_EQ(back.values, (std::vector<double>{0.0, 3.0, 65535.0}));
}

TEST(Pgm, EightBitAndPlainVariants) {
    std::string p5 = "P5\n# comment\n2 2\n255\n";
    p5 += std::string{'\x00', '\x7f', '\x80', '\xff'};
    EXPECT_EQ(decode_pgm(bytes_of(p5), "B").values, (std::vector<double>{0, 127, 128, 255}));

    const std::string p2 = "P2\n3 1\n1000\n0 500\n1000\n";
    EXPECT_EQ(decode_pgm(bytes_of(p2), "B").values, (std::vector<double>{0, 500, 1000}));
}

TEST(Pgm, MalformedInputIsRejected) {
    EXPECT_THROW(decode_pgm(bytes_of("P6\n1 1\n255\n\x01"), "B"), ParseError);
    EXPECT_THROW(decode_pgm(bytes_of("P5\n2 2\n255\n\x01\x02"), "B"), ParseError);
    EXPECT_THROW(decode_pgm(bytes_of("P5\n0 2\n255\n"), "B"), ParseError);
    EXPECT_THROW(decode_pgm(bytes_of("P5\n1 1\n70000\n\x01\x02"), "B"), ParseError);
    EXPECT_THROW(decode_pgm(bytes_of("P2\n2 1\n10\n3 11\n"), "B"), ParseError);
    EXPECT_THROW(decode_pgm(bytes_of("P2\n2 1\n10\n3\n"), "B"), ParseError);
    EXPECT_THROW(decode_pgm(bytes_of(""), "B"), ParseError);
}

TEST(RgbPng, PixelsAreIndependentMinMaxStretches) {
    const BandGrid r = random_band(9, 4, 11), g = random_band(9, 4, 12);
    BandGrid b{"B", 9, 4, std::vector<double>(36, 17.0)};
    const auto png = render_rgb_png(r, g, b);
    ASSERT_GE(png.size(), 8u);
    EXPECT_EQ(std::memcmp(png.data(), "\x89PNG\r\n\x1a\n", 8), 0);

    const DecodedPng img = decode_png(png);
    ASSERT_EQ(img.width, 9u);
    ASSERT_EQ(img.height, 4u);
    auto expected = [](const BandGrid& band, std::size_t i) -> int {
        const double lo = *std::min_element(band.values.begin(), band.values.end());
        const double hi = *std::max_element(band.values.begin(), band.values.end());
        if (hi == lo) return 0;
        return static_cast<int>(std::lround((band.values[i] - lo) / (hi - lo) * 255.0));
    };
    for (std::size_t i = 0; i < 36; ++i) {
        EXPECT_EQ(img.rgb[3 * i], expected(r, i));
        EXPECT_EQ(img.rgb[3 * i + 1], expected(g, i));
        EXPECT_EQ(img.rgb[3 * i + 2], 0);
    }
}

TEST(RgbPng, MismatchedSizesThrow) {
    EXPECT_THROW(render_rgb_png(random_band(2, 2, 1), random_band(2, 3, 2), random_band(2, 2, 3)),
                 InvalidInput);
}

TEST(Zip, RoundTripAndDeterminism) {
    std::vector<detail::ZipEntry> entries = {
            {"a/B04.pgm", encode_pgm(random_band(4, 4, 1))},
            {"empty.txt", {}},
            {"check.txt", bytes_of("123456789")},
    };
    const auto zip = detail::zip_store(entries);
    EXPECT_EQ(zip, detail::zip_store(entries));
    const auto back = detail::zip_read(zip);
    ASSERT_EQ(back.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(back[i].name, entries[i].name);
        EXPECT_EQ(back[i].data, entries[i].data);
    }
    // CRC-32 check value of "123456789", little-endian, in the local header
    // of the third entry and again in the central directory.
    const std::uint8_t crc[] = {0x26, 0x39, 0xf4, 0xcb};
    std::size_t hits = 0;
    for (std::size_t i = 0; i + 4 <= zip.size(); ++i) hits += std::memcmp(zip.data() + i, crc, 4) == 0;
    EXPECT_EQ(hits, 2u);
    EXPECT_EQ(zip[0], 'P');
    EXPECT_EQ(zip[1], 'K');
    EXPECT_EQ(zip[2], 3);
    EXPECT_EQ(zip[3], 4);
}

TEST(Zip, CorruptionIsDetected) {
    std::vector<detail::ZipEntry> entries = {{"x.bin", bytes_of("payload bytes")}};
    auto zip = detail::zip_store(entries);
    const auto at = std::search(zip.begin(), zip.end(), entries[0].data.begin(), entries[0].data.end());
    ASSERT_NE(at, zip.end());
    *at ^= 0x01;
    EXPECT_THROW(detail::zip_read(zip), ParseError);
    EXPECT_THROW(detail::zip_read(std::vector<std::uint8_t>(zip.begin(), zip.begin() + 10)), ParseError);
}

} // namespace
} // namespace hashcube
