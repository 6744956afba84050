// Copyright 2026 The quest Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quest/store.hpp"

namespace quest {

enum class Scale : uint8_t { Tiny, Small, Medium };
Scale scale_from_string(std::string_view s);
std::string_view to_string(Scale s);

struct GenOptions {
    Scale scale = Scale::Tiny;
    uint64_t seed = 1;
    /// Fraction of marker-field instances holding the "1" marker value.
    double sel_high = 0.05;
    /// Fraction holding either marker value ("1" or "2").
    double sel_low = 0.10;
};

/// Instance counts of the top-level entities for a preset.
struct GenCounts {
    uint64_t persons = 0;
    uint64_t documents = 0;
    uint64_t messages = 0;
    uint64_t forums = 0;
    uint64_t tags = 0;
};
GenCounts preset_counts(Scale s);

/// Writes R.csv, S.ndjson and G/*.csv with their schema files plus
/// workload.json into `dir`. Output bytes depend only on the options.
void generate(const std::filesystem::path& dir, const GenOptions& opts);

/// The 11 workload queries: {name, R, D, G, selectivity, depth, query}.
nlohmann::json workload();

/// Reads every `<name>.schema.json` / `<name>.graph.json` in `dir` with its
/// data file(s).
std::vector<SchemaData> ingest_directory(const std::filesystem::path& dir, std::vector<std::string>* warnings = nullptr);

}  // namespace quest
