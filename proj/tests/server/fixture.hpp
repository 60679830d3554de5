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

#include <memory>

#include "../ingest/temp_dir.hpp"
#include "hashcube/ingest/archive.hpp"
#include "hashcube/server/service.hpp"

namespace hashcube::testing {

inline BuildConfig fast_build_config() {
    BuildConfig c;
    c.train_sample = 300;
    c.triplets_per_anchor = 5;
    c.steps = 60;
    return c;
}

/// 1,001 synthetic entries with band files, built once per process.
struct SharedStore {
    TempDir bands;
    TempDir dir;
    Manifest manifest;
    std::shared_ptr<const ArchiveStore> store;

    static SharedStore& get() {
        static SharedStore s;
        return s;
    }

private:
    SharedStore() {
        SyntheticOptions o;
        o.seed = 31;
        o.count = 1001;
        o.clusters = 10;
        o.band_dir = bands.path();
        o.band_size = 4;
        manifest = generate_synthetic(o, LabelHierarchy::builtin());
        build_archive(manifest, LabelHierarchy::builtin(), std::nullopt, fast_build_config(), dir.path());
        store = ArchiveStore::open(dir.path());
    }
};

inline Json body_json(const Response& r) { return Json::parse(r.body); }

} // namespace hashcube::testing
