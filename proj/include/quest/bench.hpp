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

#include <filesystem>

#include "quest/engine.hpp"

namespace quest {

struct BenchSample {
    ResultSet rs;
    CostEstimate cost;
    // Simplified cost split into its scan and bitset terms, for calibration.
    double scan_units = 0, bitset_units = 0;
};

/// One cold evaluation on a fresh Store so every file is read again.
BenchSample bench_once(const std::filesystem::path& store_dir, const Query& q, bool skiptree, double timeout_s = 0);

struct BenchPair {
    // Index 0 is skip index on, 1 is off.
    std::vector<double> walls[2];
    BenchSample last[2];
    bool timed_out[2] = {false, false};
};

/// Runs both modes `reps` times, interleaved and alternating which goes
/// first, so allocator and page cache warm-up do not favor either side.
BenchPair bench_pair(const std::filesystem::path& store_dir, const Query& q, int reps, double timeout_s = 0);

double median(std::vector<double> v);

}  // namespace quest
