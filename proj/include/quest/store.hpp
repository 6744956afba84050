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

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quest/column.hpp"
#include "quest/histogram.hpp"
#include "quest/schema.hpp"

namespace quest {

/// All instance data of one schema, in memory. Produced by ingestion and by
/// Store::load_all.
struct SchemaData {
    Schema schema;
    std::optional<GraphManifest> graph;
    /// Instance count of each node's domain (G_v), indexed by node id.
    std::vector<uint64_t> cardinality;
    std::map<NodeId, PrimitiveColumn> values;
    /// Array nodes (including repeated primitive leaves).
    std::map<NodeId, CounterArray> counters;
    /// Linked records (edge -> vertex) and Indicator leaves.
    std::map<NodeId, IndicatorArray> indicators;

    /// Checks every Counter/Indicator/value length against the cardinalities.
    void validate() const;
    friend bool operator==(const SchemaData&, const SchemaData&);
};

struct SchemaEntry {
    Schema schema;
    std::optional<GraphManifest> graph;
    std::vector<uint64_t> cardinality;
    std::map<NodeId, std::string> value_files;
    std::map<NodeId, std::string> link_files;
    std::map<NodeId, double> unit_size;
    std::map<NodeId, ColumnStats> stats;

    uint64_t root_cardinality() const { return cardinality.empty() ? 0 : cardinality[0]; }
};

struct StoreManifest {
    uint32_t version = 1;
    uint64_t block_size = 4096;
    uint64_t meta_unit = 8;
    std::vector<SchemaEntry> schemas;

    const SchemaEntry& schema(const std::string& name) const;
    bool has_schema(const std::string& name) const;
    nlohmann::json to_json() const;
    static StoreManifest from_json(const nlohmann::json& j);
};

/// Physical file loads. Each file is read at most once per Store instance.
struct IoStats {
    std::atomic<uint64_t> columns_read{0};
    std::atomic<uint64_t> metadata_reads{0};
    std::atomic<uint64_t> bytes_read{0};
};

/// Writes `<dir>/manifest.json` and one directory of `.col` files per schema.
/// Schemas already present in `dir` with other names are kept.
void write_store(const std::filesystem::path& dir, const std::vector<SchemaData>& schemas,
                 uint64_t block_size = 4096, uint64_t meta_unit = 8);

/// Read side of a store directory. Files are loaded lazily, checksum-verified
/// and cached.
class Store {
public:
    explicit Store(std::filesystem::path dir);

    const std::filesystem::path& dir() const { return dir_; }
    const StoreManifest& manifest() const { return manifest_; }
    const SchemaEntry& entry(const std::string& schema) const { return manifest_.schema(schema); }

    const PrimitiveColumn& values(const std::string& schema, NodeId v);
    const CounterArray& counter(const std::string& schema, NodeId v);
    const IndicatorArray& indicator(const std::string& schema, NodeId v);
    /// Mapping from the parent's domain to v's domain for a node with a link.
    const Relation& link(const std::string& schema, NodeId v);

    /// Raw bytes of a file relative to the store root; counted in io().
    std::string read_file(const std::string& rel);

    /// Loads every file of one schema into memory.
    SchemaData load_all(const std::string& schema);

    IoStats& io() { return io_; }

private:
    std::filesystem::path dir_;
    StoreManifest manifest_;
    IoStats io_;
    std::mutex mu_;
    std::map<std::string, std::unique_ptr<PrimitiveColumn>> value_cache_;
    std::map<std::string, std::unique_ptr<CounterArray>> counter_cache_;
    std::map<std::string, std::unique_ptr<IndicatorArray>> indicator_cache_;
    std::map<std::string, std::unique_ptr<Relation>> link_cache_;
};

std::string read_text_file(const std::filesystem::path& p);
void write_text_file(const std::filesystem::path& p, const std::string& data);

}  // namespace quest
