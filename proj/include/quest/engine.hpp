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

#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "quest/delivery.hpp"
#include "quest/optimizer.hpp"
#include "quest/query.hpp"
#include "quest/skiptree.hpp"
#include "quest/store.hpp"

namespace quest {

/// Counters of one evaluation, taken from the instrumented read paths.
struct ExecStats {
    uint64_t columns_read = 0;
    uint64_t values_decoded = 0;
    uint64_t value_bytes = 0;
    uint64_t blocks_touched = 0;
    uint64_t metadata_reads = 0;
    uint64_t metadata_units_up = 0;
    uint64_t metadata_units_down = 0;
    /// Units of upward mappings per query node (RollUp side of C_IO).
    std::map<QNodeId, uint64_t> up_units;
    uint64_t bitset_ops = 0;
    uint64_t pruning_violations = 0;
    uint64_t join_hash_entries = 0;
    uint64_t bytes_read = 0;
    uint64_t files_read = 0;
    double wall_ms = 0;
    uint64_t metadata_bytes(uint64_t m) const { return (metadata_units_up + metadata_units_down) * m; }
    nlohmann::json to_json(uint64_t meta_unit = 8) const;
};

struct QueryPlan {
    QueryTree tree;
    /// Filter query nodes in evaluation order (O_F).
    std::vector<QNodeId> filter_order;
    /// O_F with fetch fields, path ends and join roots merged in; the walk
    /// visits these and then returns to the root.
    std::vector<QNodeId> walk_order;
    WanderingSequence wandering;
    CostParams params;
    CostEstimate cost;
    /// Predicates per filter node.
    std::map<QNodeId, std::vector<const Predicate*>> predicates;
    nlohmann::json to_json() const;
};

struct ResultSet {
    std::vector<std::string> columns;
    std::vector<std::vector<Value>> rows;
    /// Surviving instances at the host root.
    uint64_t matched = 0;
    ExecStats stats;
    void write_csv(std::ostream& out) const;
    void write_ndjson(std::ostream& out) const;
    nlohmann::json to_json() const;
};

struct ExecOptions {
    bool use_skiptree = true;
    /// Seconds; 0 disables the limit.
    double timeout_s = 0;
};

class Timeout : public Error {
public:
    using Error::Error;
};

/// Simplified-model constants from `<store>/calibration.json`, if present.
void load_calibration(const std::filesystem::path& store_dir, CostParams& params);

class Engine {
public:
    explicit Engine(Store& store) : store_(store) {}

    /// Resolves and orders a query without reading any column.
    QueryPlan plan(const Query& q) const;
    ResultSet evaluate(const Query& q, const ExecOptions& opts = {});
    ResultSet evaluate(const Query& q, const QueryPlan& plan, const ExecOptions& opts = {});

    Store& store() { return store_; }
    const SkipTree& skiptree(const std::string& schema);

private:
    Store& store_;
    std::map<std::string, std::unique_ptr<SkipTree>> trees_;
};

}  // namespace quest
