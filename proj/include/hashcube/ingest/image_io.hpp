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

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "hashcube/hashcore/features.hpp"

namespace hashcube {

/// Netpbm graymap, binary (P5, 8- or 16-bit big-endian) or plain (P2).
/// Throws ParseError on malformed data.
BandGrid decode_pgm(std::span<const std::uint8_t> bytes, std::string band_name,
                    const std::string& source = "pgm");
BandGrid read_pgm(const std::filesystem::path& path, std::string band_name);

/// 16-bit P5. Values are rounded and clamped to [0, 65535].
std::vector<std::uint8_t> encode_pgm(const BandGrid& band);

/// 8-bit RGB PNG from three equally sized bands, each min-max stretched to
/// [0, 255] independently (a constant band maps to 0).
std::vector<std::uint8_t> render_rgb_png(const BandGrid& r, const BandGrid& g, const BandGrid& b);

} // namespace hashcube
