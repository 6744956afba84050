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

#include <istream>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "quest/store.hpp"

namespace quest {

/// Empty column set shaped for `schema`.
SchemaData empty_schema_data(const Schema& schema);

/// Reads a table whose header names exactly the schema's columns.
SchemaData ingest_csv(std::istream& in, const Schema& table);

/// Shreds documents one at a time, appending values in document order and
/// one Counter boundary per parent instance.
class DocumentShredder {
public:
    explicit DocumentShredder(const Schema& schema);
    void add(const nlohmann::json& doc);
    SchemaData finish();

private:
    void fill_record(NodeId rec, const nlohmann::json& obj, std::string& path);
    void fill_field(NodeId v, const nlohmann::json* val, std::string& path);
    void append_value(NodeId v, const nlohmann::json* val, const std::string& path);
    [[noreturn]] void fail(const std::string& path, const std::string& msg) const;

    SchemaData data_;
    std::vector<uint64_t> count_;
    std::vector<std::vector<uint64_t>> pointers_;
    uint64_t ordinal_ = 0;
};

/// Newline-delimited JSON documents; blank lines are skipped.
SchemaData ingest_json(std::istream& in, const Schema& schema);

/// Vertex files hold the declared properties as columns; the first property
/// is the vertex key. Edge files hold `src,dst` keys followed by the edge's
/// properties. Keys are matched as text.
SchemaData ingest_graph(const GraphManifest& graph, std::map<std::string, std::istream*> vertex_files,
                        std::map<std::string, std::istream*> edge_files, std::vector<std::string>* warnings = nullptr);

}  // namespace quest
