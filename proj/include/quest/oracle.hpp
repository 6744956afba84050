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
#include <string>
#include <vector>

#include <json.hpp>

#include "quest/engine.hpp"
#include "quest/store.hpp"

namespace quest {

struct EdgeRecord {
    /// Endpoint keys (first property of each vertex label).
    Value src;
    Value dst;
    std::vector<Value> properties;
    friend bool operator==(const EdgeRecord&, const EdgeRecord&) = default;
};

/// Row-oriented view of one schema: documents, table rows or vertex/edge lists.
struct MaterializedRecords {
    Schema schema;
    std::vector<nlohmann::json> documents;
    std::vector<std::vector<Value>> rows;
    std::optional<GraphManifest> graph;
    /// Properties in declaration order, per label.
    std::map<std::string, std::vector<std::vector<Value>>> vertices;
    std::map<std::string, std::vector<EdgeRecord>> edges;
};

/// Rebuilds records from columns, Counters and Indicators.
MaterializedRecords materialize_records(const SchemaData& data);
MaterializedRecords materialize_records(Store& store, const std::string& schema);

/// Fills absent fields: null primitives, empty arrays, records of nulls.
nlohmann::json canonical_document(const Schema& schema, const nlohmann::json& doc);

/// Structural equality: documents after canonicalization, tables row by row,
/// graphs as vertex lists plus edge multisets.
bool same_records(const MaterializedRecords& a, const MaterializedRecords& b, std::string* why = nullptr);

/// The oracle refuses inputs larger than this many instances in total.
inline constexpr uint64_t kOracleMaxInstances = 100000;

/// Records, nested array elements, table rows, vertices and edges.
uint64_t instance_count(const MaterializedRecords& r);

/// Nested-loop evaluation over materialized records. Rows come back sorted.
ResultSet oracle_evaluate(const Query& q, const std::map<std::string, MaterializedRecords>& records);

/// Rows sorted by their text form, for multiset comparison.
std::vector<std::vector<Value>> sorted_rows(std::vector<std::vector<Value>> rows);

NodeId naive_lca(const TreeShape& tree, NodeId u, NodeId v);

}  // namespace quest
