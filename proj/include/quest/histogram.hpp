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
#include <utility>
#include <vector>

#include <json.hpp>

#include "quest/column.hpp"

namespace quest {

constexpr int kHistogramBuckets = 64;

/// Equi-depth histogram plus a short most-common-value list, built in one
/// pass over a sorted copy of the column at ingest.
struct ColumnStats {
    uint64_t count = 0;
    uint64_t nulls = 0;
    uint64_t distinct = 0;
    /// bounds[k] is the smallest value of bucket k; the last entry is the max.
    std::vector<Value> bounds;
    std::vector<std::pair<Value, uint64_t>> frequent;

    double selectivity(CompareOp op, const std::vector<Value>& operands) const;
};

ColumnStats build_stats(const PrimitiveColumn& column, int buckets = kHistogramBuckets);

nlohmann::json stats_to_json(const ColumnStats& s);
ColumnStats stats_from_json(const nlohmann::json& j, PrimitiveKind kind);

}  // namespace quest
