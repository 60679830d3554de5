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

#include "hashcube/ingest/manifest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <unordered_map>

#include "hashcube/catalog/json_codec.hpp"
#include "hashcube/detail/file_io.hpp"
#include "hashcube/error.hpp"
#include "hashcube/ingest/image_io.hpp"

namespace hashcube {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kEntryKeys[] = {"patch_name", "bounds",   "labels",
                                           "acquisition_date", "season", "satellite",
                                           "country",    "features", "bands", "rgb"};

std::string join_errors(const ValidationError& e) {
    std::string out;
    for (const auto& f : e.fields) {
        if (!out.empty()) out += "; ";
        out += f.field + ": " + f.message;
    }
    return out;
}

ManifestEntry parse_entry(const Json& j, const LabelHierarchy& h, const std::string& where) {
    if (!j.is_object()) throw ParseError(where, "entry must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (std::find(std::begin(kEntryKeys), std::end(kEntryKeys), key) == std::end(kEntryKeys)) {
            throw ParseError(where, "unknown field '" + key + "'");
        }
    }
    ManifestEntry e;
    try {
        e.record = record_from_json(j, h);
    } catch (const ValidationError& err) {
        throw ParseError(where, join_errors(err));
    }
    if (auto it = j.find("features"); it != j.end() && !it->is_null()) {
        if (!it->is_array() || it->empty()) {
            throw ParseError(where, "features: must be a non-empty array of numbers");
        }
        FeatureVector f;
        f.reserve(it->size());
        for (const auto& v : *it) {
            if (!v.is_number()) throw ParseError(where, "features: must be numbers");
            f.push_back(v.get<double>());
            if (!std::isfinite(f.back())) throw ParseError(where, "features: must be finite");
        }
        e.features = std::move(f);
    }
    if (auto it = j.find("bands"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) throw ParseError(where, "bands: must be an array");
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& b = (*it)[i];
            const std::string field = "bands[" + std::to_string(i) + "]";
            if (!b.is_object() || !b.contains("band") || !b["band"].is_string() ||
                !b.contains("path") || !b["path"].is_string()) {
                throw ParseError(where, field + ": must be {\"band\": name, \"path\": file}");
            }
            BandRef ref{b["band"].get<std::string>(), fs::path(b["path"].get<std::string>())};
            if (ref.band.empty() || ref.band.find('/') != std::string::npos) {
                throw ParseError(where, field + ".band: must be a plain non-empty name");
            }
            for (const auto& prev : e.bands) {
                if (prev.band == ref.band) throw ParseError(where, field + ": duplicate band " + ref.band);
            }
            e.bands.push_back(std::move(ref));
        }
    }
    if (auto it = j.find("rgb"); it != j.end() && !it->is_null()) {
        if (!it->is_array() || it->size() != 3) {
            throw ParseError(where, "rgb: must name three bands");
        }
        std::array<std::string, 3> rgb;
        for (std::size_t i = 0; i < 3; ++i) {
            if (!(*it)[i].is_string()) throw ParseError(where, "rgb: must name three bands");
            rgb[i] = (*it)[i].get<std::string>();
            const bool known = std::any_of(e.bands.begin(), e.bands.end(),
                                           [&](const BandRef& b) { return b.band == rgb[i]; });
            if (!known) throw ParseError(where, "rgb: band " + rgb[i] + " is not listed in bands");
        }
        e.rgb = std::move(rgb);
    }
    return e;
}

// Days since 1970-01-01 and back (proleptic Gregorian).
long days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const long era = (y >= 0 ? y : y - 399) / 400;
    const long yoe = y - era * 400;
    const long doy = (153 * (m > 2 ? m - 3 : m + 9) + 2) / 5 + d - 1;
    const long doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

Date civil_from_days(long z) {
    z += 719468;
    const long era = (z >= 0 ? z : z - 146096) / 146097;
    const long doe = z - era * 146097;
    const long yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const long doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const long mp = (5 * doy + 2) / 153;
    const int d = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    const int m = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    return {static_cast<int>(yoe + era * 400 + (m <= 2)), m, d};
}

struct Country {
    const char* name;
    const char* code;
    GeoRect box;
};

// Approximate national extents, clipped to lon [-10, 30] x lat [35, 70].
constexpr Country kCountries[] = {
        {"Austria", "AT", {9.53, 46.37, 17.16, 49.02}},
        {"Belgium", "BE", {2.54, 49.50, 6.41, 51.50}},
        {"Finland", "FI", {20.55, 59.81, 30.0, 70.0}},
        {"Ireland", "IE", {-10.0, 51.42, -5.99, 55.39}},
        {"Kosovo", "XK", {20.01, 41.86, 21.79, 43.27}},
        {"Lithuania", "LT", {20.93, 53.90, 26.84, 56.45}},
        {"Luxembourg", "LU", {5.73, 49.45, 6.53, 50.18}},
        {"Portugal", "PT", {-9.50, 36.96, -6.19, 42.15}},
        {"Serbia", "RS", {18.82, 42.23, 23.01, 46.19}},
        {"Switzerland", "CH", {5.96, 45.82, 10.49, 47.81}},
};

constexpr double kPatchDegrees = 1200.0 / (kEarthRadiusM * 3.14159265358979323846 / 180.0);
constexpr const char* kSyntheticBands[3] = {"B04", "B03", "B02"};

std::vector<std::size_t> bundle_order(std::uint64_t seed, std::size_t leaves) {
    std::vector<std::size_t> order(leaves);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    std::shuffle(order.begin(), order.end(), rng);
    return order;
}

} // namespace

std::optional<std::size_t> Manifest::feature_dim() const {
    for (const auto& e : entries) {
        if (e.features) return e.features->size();
    }
    return std::nullopt;
}

Manifest parse_manifest(std::string_view text, const LabelHierarchy& h, const std::string& source) {
    Manifest m;
    std::unordered_map<std::string, std::size_t> first_line;
    std::optional<std::pair<std::size_t, std::size_t>> dim;   // (dimension, line)
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() : nl + 1;
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
        const std::string where = source + ":" + std::to_string(line_no);
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::parse_error& e) {
            throw ParseError(where, std::string("invalid JSON: ") + e.what());
        }
        ManifestEntry e = parse_entry(j, h, where);
        auto [it, fresh] = first_line.emplace(e.record.patch_name, line_no);
        if (!fresh) {
            throw ParseError(where, "duplicate patch_name '" + e.record.patch_name +
                                    "' on lines " + std::to_string(it->second) + " and " +
                                    std::to_string(line_no));
        }
        if (e.features) {
            if (!dim) {
                dim = {e.features->size(), line_no};
            } else if (dim->first != e.features->size()) {
                throw ParseError(where, "features: dimension mismatch: expected " +
                                        std::to_string(dim->first) + " (as on line " +
                                        std::to_string(dim->second) + "), got " +
                                        std::to_string(e.features->size()));
            }
        }
        m.entries.push_back(std::move(e));
    }
    return m;
}

Manifest load_manifest(const fs::path& path, const LabelHierarchy& h) {
    Manifest m = parse_manifest(detail::read_file_text(path), h, path.string());
    m.base_dir = path.parent_path();
    return m;
}

std::string manifest_line(const ManifestEntry& e, const LabelHierarchy& h) {
    Json j = record_to_json(e.record, h);
    if (e.features) j["features"] = *e.features;
    if (!e.bands.empty()) {
        Json bands = Json::array();
        for (const auto& b : e.bands) bands.push_back({{"band", b.band}, {"path", b.path.generic_string()}});
        j["bands"] = bands;
    }
    if (e.rgb) j["rgb"] = *e.rgb;
    return j.dump();
}

std::string format_manifest(const Manifest& m, const LabelHierarchy& h) {
    std::string out;
    for (const auto& e : m.entries) {
        out += manifest_line(e, h);
        out += '\n';
    }
    return out;
}

void save_manifest(const Manifest& m, const LabelHierarchy& h, const fs::path& path) {
    detail::write_file_text(path, format_manifest(m, h));
}

LabelSet synthetic_bundle(std::uint64_t seed, std::size_t cluster, std::size_t clusters,
                          const LabelHierarchy& h) {
    const std::size_t leaves = h.leaf_count();
    const std::size_t size = std::clamp<std::size_t>(leaves / std::max<std::size_t>(clusters, 1), 1, 3);
    const auto order = bundle_order(seed, leaves);
    std::string chars;
    for (std::size_t i = 0; i < size; ++i) {
        const std::size_t leaf = order[(cluster * size + i) % leaves];
        chars.push_back(static_cast<char>(LabelHierarchy::kFirstChar + static_cast<int>(leaf)));
    }
    return LabelSet::from_chars(std::move(chars));
}

Manifest generate_synthetic(const SyntheticOptions& o, const LabelHierarchy& h) {
    if (o.clusters < 1 || o.count < o.clusters) {
        throw InvalidInput("synthetic archive needs count >= clusters >= 1");
    }
    if (o.feature_dim == 0) throw InvalidInput("feature dimension must be positive");
    if (h.leaf_count() == 0) throw InvalidInput("hierarchy has no leaves");

    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<FeatureVector> centers(o.clusters, FeatureVector(o.feature_dim));
    for (auto& c : centers) {
        for (double& v : c) v = gauss(rng);
    }
    std::vector<LabelSet> bundles;
    for (std::size_t k = 0; k < o.clusters; ++k) bundles.push_back(synthetic_bundle(o.seed, k, o.clusters, h));

    const long first_day = days_from_civil(2017, 6, 1);
    const std::size_t n_countries = std::size(kCountries);
    Manifest m;
    m.entries.reserve(o.count);
    if (o.band_dir) {
        m.base_dir = *o.band_dir;
        fs::create_directories(*o.band_dir);
    }
    for (std::size_t i = 0; i < o.count; ++i) {
        const std::size_t k = i % o.clusters;
        ManifestEntry e;
        PatchRecord& r = e.record;
        const Country& country = kCountries[rng() % n_countries];
        r.satellite = rng() % 2 == 0 ? Satellite::S1 : Satellite::S2;
        char name[64];
        std::snprintf(name, sizeof name, "%s_%s_%07zu", std::string(to_string(r.satellite)).c_str(),
                      country.code, i);
        r.patch_name = name;
        r.country = country.name;
        const double lat_size = kPatchDegrees;
        const double lat = country.box.min_lat + unit(rng) * (country.box.max_lat - country.box.min_lat - lat_size);
        const double lon_size = kPatchDegrees / std::cos((lat + lat_size / 2) * 3.14159265358979323846 / 180.0);
        const double lon = country.box.min_lon + unit(rng) * (country.box.max_lon - country.box.min_lon - lon_size);
        r.bounds = {lon, lat, lon + lon_size, lat + lat_size};
        r.acquisition_date = civil_from_days(first_day + static_cast<long>(rng() % 365));
        r.season = season_of(r.acquisition_date);
        std::string chars = bundles[k].chars();
        if (unit(rng) < 0.25) {
            chars.push_back(static_cast<char>(LabelHierarchy::kFirstChar +
                                              static_cast<int>(rng() % h.leaf_count())));
        }
        r.labels = LabelSet::from_chars(std::move(chars));
        FeatureVector f(o.feature_dim);
        for (std::size_t d = 0; d < o.feature_dim; ++d) f[d] = centers[k][d] + o.noise * gauss(rng);
        if (o.band_dir) {
            const fs::path dir = *o.band_dir / r.patch_name;
            fs::create_directories(dir);
            for (int b = 0; b < 3; ++b) {
                BandGrid grid{kSyntheticBands[b], o.band_size, o.band_size, {}};
                grid.values.resize(o.band_size * o.band_size);
                for (std::size_t p = 0; p < grid.values.size(); ++p) {
                    const double v = f[(p + 7 * static_cast<std::size_t>(b)) % o.feature_dim];
                    grid.values[p] = std::clamp(4000.0 + 1200.0 * v + 300.0 * gauss(rng), 0.0, 65535.0);
                }
                const fs::path file = dir / (std::string(kSyntheticBands[b]) + ".pgm");
                detail::write_file_bytes(file, encode_pgm(grid));
                e.bands.push_back({kSyntheticBands[b], fs::path(r.patch_name) / file.filename()});
            }
            e.rgb = std::array<std::string, 3>{kSyntheticBands[0], kSyntheticBands[1], kSyntheticBands[2]};
        }
        e.features = std::move(f);
        m.entries.push_back(std::move(e));
    }
    return m;
}

Manifest generate_synthetic(std::uint64_t seed, std::size_t count, std::size_t clusters,
                            const LabelHierarchy& h) {
    SyntheticOptions o;
    o.seed = seed;
    o.count = count;
    o.clusters = clusters;
    return generate_synthetic(o, h);
}

} // namespace hashcube
