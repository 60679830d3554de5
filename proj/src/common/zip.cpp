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

#include "hashcube/detail/zip.hpp"

#include <zlib.h>

#include "hashcube/detail/le_io.hpp"
#include "hashcube/error.hpp"

namespace hashcube::detail {

namespace {

constexpr std::uint32_t kLocalSig = 0x04034b50;
constexpr std::uint32_t kCentralSig = 0x02014b50;
constexpr std::uint32_t kEndSig = 0x06054b50;
constexpr std::uint16_t kVersion = 20;
constexpr std::uint16_t kDosTime = 0;
constexpr std::uint16_t kDosDate = (2018 - 1980) << 9 | 1 << 5 | 1;   // 2018-01-01
constexpr std::uint16_t kUtf8Flag = 1 << 11;

std::uint32_t crc_of(std::span<const std::uint8_t> data) {
    uLong crc = crc32(0L, Z_NULL, 0);
    std::size_t off = 0;
    while (off < data.size()) {
        const auto n = static_cast<uInt>(std::min<std::size_t>(data.size() - off, 1u << 30));
        crc = crc32(crc, data.data() + off, n);
        off += n;
    }
    return static_cast<std::uint32_t>(crc);
}

} // namespace

std::vector<std::uint8_t> zip_store(std::span<const ZipEntry> entries) {
    if (entries.size() > 0xffff) throw InvalidInput("zip holds at most 65535 entries");
    ByteWriter out;
    ByteWriter central;
    for (const auto& e : entries) {
        if (e.name.empty() || e.name.size() > 0xffff) throw InvalidInput("bad zip entry name");
        if (e.data.size() >= 0xffffffffull) throw InvalidInput("zip entry too large");
        const auto offset = static_cast<std::uint32_t>(out.bytes().size());
        const std::uint32_t crc = crc_of(e.data);
        const auto size = static_cast<std::uint32_t>(e.data.size());
        const auto name_len = static_cast<std::uint16_t>(e.name.size());

        out.put<std::uint32_t>(kLocalSig);
        out.put<std::uint16_t>(kVersion);
        out.put<std::uint16_t>(kUtf8Flag);
        out.put<std::uint16_t>(0);   // stored
        out.put<std::uint16_t>(kDosTime);
        out.put<std::uint16_t>(kDosDate);
        out.put<std::uint32_t>(crc);
        out.put<std::uint32_t>(size);
        out.put<std::uint32_t>(size);
        out.put<std::uint16_t>(name_len);
        out.put<std::uint16_t>(0);
        out.raw(e.name);
        out.raw(e.data);

        central.put<std::uint32_t>(kCentralSig);
        central.put<std::uint16_t>(kVersion);
        central.put<std::uint16_t>(kVersion);
        central.put<std::uint16_t>(kUtf8Flag);
        central.put<std::uint16_t>(0);
        central.put<std::uint16_t>(kDosTime);
        central.put<std::uint16_t>(kDosDate);
        central.put<std::uint32_t>(crc);
        central.put<std::uint32_t>(size);
        central.put<std::uint32_t>(size);
        central.put<std::uint16_t>(name_len);
        central.put<std::uint16_t>(0);   // extra
        central.put<std::uint16_t>(0);   // comment
        central.put<std::uint16_t>(0);   // disk
        central.put<std::uint16_t>(0);   // internal attrs
        central.put<std::uint32_t>(0);   // external attrs
        central.put<std::uint32_t>(offset);
        central.raw(e.name);
    }
    const auto central_offset = static_cast<std::uint32_t>(out.bytes().size());
    const auto central_size = static_cast<std::uint32_t>(central.bytes().size());
    out.raw(central.bytes());
    out.put<std::uint32_t>(kEndSig);
    out.put<std::uint16_t>(0);
    out.put<std::uint16_t>(0);
    out.put<std::uint16_t>(static_cast<std::uint16_t>(entries.size()));
    out.put<std::uint16_t>(static_cast<std::uint16_t>(entries.size()));
    out.put<std::uint32_t>(central_size);
    out.put<std::uint32_t>(central_offset);
    out.put<std::uint16_t>(0);
    return std::move(out.bytes());
}

std::vector<ZipEntry> zip_read(std::span<const std::uint8_t> bytes) {
    std::vector<ZipEntry> entries;
    ByteReader in(bytes, "zip");
    while (!in.done()) {
        const std::size_t at = in.offset();
        const auto sig = in.get<std::uint32_t>();
        if (sig == kCentralSig || sig == kEndSig) break;
        if (sig != kLocalSig) throw ParseError("zip@" + std::to_string(at), "bad local header");
        in.get<std::uint16_t>();
        in.get<std::uint16_t>();
        const auto method = in.get<std::uint16_t>();
        if (method != 0) throw ParseError("zip@" + std::to_string(at), "compressed entry");
        in.get<std::uint16_t>();
        in.get<std::uint16_t>();
        const auto crc = in.get<std::uint32_t>();
        const auto csize = in.get<std::uint32_t>();
        in.get<std::uint32_t>();
        const auto name_len = in.get<std::uint16_t>();
        const auto extra_len = in.get<std::uint16_t>();
        const auto name = in.raw(name_len);
        in.raw(extra_len);
        const auto data = in.raw(csize);
        ZipEntry e{{name.begin(), name.end()}, {data.begin(), data.end()}};
        if (crc_of(e.data) != crc) throw ParseError("zip:" + e.name, "CRC mismatch");
        entries.push_back(std::move(e));
    }
    return entries;
}

} // namespace hashcube::detail
