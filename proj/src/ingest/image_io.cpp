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

#include "hashcube/ingest/image_io.hpp"

#include <png.h>

#include <algorithm>
#include <cmath>

#include "hashcube/detail/file_io.hpp"
#include "hashcube/error.hpp"

namespace hashcube {

namespace {

class PgmCursor {
public:
    PgmCursor(std::span<const std::uint8_t> bytes, const std::string& source)
            : bytes_(bytes), source_(source) {}

    void skip_space() {
        while (pos_ < bytes_.size()) {
            const char c = static_cast<char>(bytes_[pos_]);
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
                ++pos_;
            } else {
                break;
            }
        }
    }

    std::size_t number(const char* what) {
        skip_space();
        std::size_t v = 0;
        const std::size_t start = pos_;
        while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 1u << 30) fail(std::string(what) + " too large");
            ++pos_;
        }
        if (pos_ == start) fail(std::string("expected ") + what);
        return v;
    }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(source_ + "@" + std::to_string(pos_), msg);
    }

    std::size_t pos_ = 0;
    std::span<const std::uint8_t> bytes_;
    const std::string& source_;
};

struct PngWriteState {
    std::vector<std::uint8_t>* out;
};

void png_append(png_structp png, png_bytep data, png_size_t len) {
    auto* state = static_cast<PngWriteState*>(png_get_io_ptr(png));
    state->out->insert(state->out->end(), data, data + len);
}

void png_flush_noop(png_structp) {}

std::vector<std::uint8_t> stretch(const BandGrid& band) {
    const auto [lo, hi] = std::minmax_element(band.values.begin(), band.values.end());
    const double span = *hi - *lo;
    std::vector<std::uint8_t> out(band.values.size(), 0);
    if (!(span > 0.0)) return out;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(std::lround((band.values[i] - *lo) / span * 255.0));
    }
    return out;
}

} // namespace

BandGrid decode_pgm(std::span<const std::uint8_t> bytes, std::string band_name,
                    const std::string& source) {
    PgmCursor cur(bytes, source);
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '2')) {
        cur.fail("not a PGM (expected P5 or P2)");
    }
    const bool binary = bytes[1] == '5';
    cur.pos_ = 2;
    BandGrid band;
    band.name = std::move(band_name);
    band.width = cur.number("width");
    band.height = cur.number("height");
    const std::size_t maxval = cur.number("maxval");
    if (band.width == 0 || band.height == 0) cur.fail("empty image");
    if (maxval == 0 || maxval > 65535) cur.fail("maxval must be in [1, 65535]");
    const std::size_t count = band.width * band.height;
    band.values.resize(count);
    if (binary) {
        if (cur.pos_ >= bytes.size()) cur.fail("missing raster");
        ++cur.pos_;   // single whitespace after maxval
        const std::size_t bpp = maxval > 255 ? 2 : 1;
        if (bytes.size() - cur.pos_ < count * bpp) cur.fail("truncated raster");
        for (std::size_t i = 0; i < count; ++i) {
            const std::uint8_t* p = bytes.data() + cur.pos_ + i * bpp;
            band.values[i] = bpp == 2 ? (p[0] << 8 | p[1]) : p[0];
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const std::size_t v = cur.number("sample");
            if (v > maxval) cur.fail("sample exceeds maxval");
            band.values[i] = static_cast<double>(v);
        }
    }
    return band;
}

BandGrid read_pgm(const std::filesystem::path& path, std::string band_name) {
    return decode_pgm(detail::read_file_bytes(path), std::move(band_name), path.string());
}

std::vector<std::uint8_t> encode_pgm(const BandGrid& band) {
    band.validate();
    const std::string header = "P5\n" + std::to_string(band.width) + " " +
                               std::to_string(band.height) + "\n65535\n";
    std::vector<std::uint8_t> out(header.begin(), header.end());
    out.reserve(out.size() + band.values.size() * 2);
    for (double v : band.values) {
        const auto q = static_cast<std::uint16_t>(std::clamp(std::lround(v), 0L, 65535L));
        out.push_back(static_cast<std::uint8_t>(q >> 8));
        out.push_back(static_cast<std::uint8_t>(q & 0xff));
    }
    return out;
}

std::vector<std::uint8_t> render_rgb_png(const BandGrid& r, const BandGrid& g, const BandGrid& b) {
    r.validate();
    g.validate();
    b.validate();
    if (g.width != r.width || b.width != r.width || g.height != r.height || b.height != r.height) {
        throw InvalidInput("RGB bands must share one size");
    }
    const auto rs = stretch(r), gs = stretch(g), bs = stretch(b);
    std::vector<std::uint8_t> rgb(r.values.size() * 3);
    for (std::size_t i = 0; i < r.values.size(); ++i) {
        rgb[3 * i] = rs[i];
        rgb[3 * i + 1] = gs[i];
        rgb[3 * i + 2] = bs[i];
    }

    std::vector<std::uint8_t> out;
    PngWriteState state{&out};
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (png == nullptr) throw IoError("png_create_write_struct failed");
    png_infop info = png_create_info_struct(png);
    if (info == nullptr) {
        png_destroy_write_struct(&png, nullptr);
        throw IoError("png_create_info_struct failed");
    }
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        throw IoError("PNG encoding failed");
    }
    png_set_write_fn(png, &state, png_append, png_flush_noop);
    png_set_IHDR(png, info, static_cast<png_uint_32>(r.width), static_cast<png_uint_32>(r.height),
                 8, PNG_COLOR_TYPE_RGB, PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT,
                 PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::size_t row = 0; row < r.height; ++row) {
        png_write_row(png, rgb.data() + row * r.width * 3);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return out;
}

} // namespace hashcube
