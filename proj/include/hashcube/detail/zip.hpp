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
#include <span>
#include <string>
#include <vector>

namespace hashcube::detail {

struct ZipEntry {
    std::string name;
    std::vector<std::uint8_t> data;
};

/// Uncompressed (stored) zip archive with a fixed timestamp, so equal
/// inputs give equal bytes. At most 65535 entries of < 4 GiB each.
std::vector<std::uint8_t> zip_store(std::span<const ZipEntry> entries);

/// Reads archives written by zip_store (stored entries only). Checks CRCs;
/// throws ParseError.
std::vector<ZipEntry> zip_read(std::span<const std::uint8_t> bytes);

} // namespace hashcube::detail
