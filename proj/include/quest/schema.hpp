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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "quest/tree.hpp"
#include "quest/value.hpp"

namespace quest {

enum class FieldKind : uint8_t { Record, Array, Primitive, Indicator };
enum class ModelTag : uint8_t { Relational, Document, Graph };

std::string_view to_string(FieldKind k);
std::string_view to_string(ModelTag m);
ModelTag model_from_string(std::string_view s);

/// One field of the unified nested schema.
///
/// Only Array, Primitive and Indicator nodes own stored instances. A Record
/// shares the instance domain of its parent, except for a `linked` Record:
/// a graph vertex reached through an edge array, whose instances are the
/// vertices themselves and which is reached through a per-edge pointer.
/// An Array without children carrying `primitive` is a repeated primitive
/// leaf (e.g. `Word*`): it owns both a Counter and a value column.
struct SchemaNode {
    NodeId id = kNoNode;
    std::string name;
    FieldKind kind = FieldKind::Record;
    PrimitiveKind primitive = PrimitiveKind::Null;
    bool repeated_leaf = false;
    bool linked = false;
    NodeId target = kNoNode;
    NodeId parent = kNoNode;
    std::vector<NodeId> children;
    int32_t depth = 0;
    ModelTag model = ModelTag::Document;
    /// Vertex or edge label for graph-derived nodes.
    std::string label;

    bool is_leaf() const { return children.empty(); }
    bool has_values() const { return kind == FieldKind::Primitive || repeated_leaf; }
};

/// Immutable nested-tree schema. Node ids equal preorder positions.
class Schema {
public:
    Schema() = default;
    /// Validates and indexes `nodes`, which must be listed in preorder with
    /// parent/children links filled in.
    Schema(std::string name, ModelTag model, std::vector<SchemaNode> nodes);

    const std::string& name() const { return name_; }
    ModelTag model() const { return model_; }
    int32_t size() const { return static_cast<int32_t>(nodes_.size()); }
    const SchemaNode& node(NodeId id) const { return nodes_.at(id); }
    const std::vector<SchemaNode>& nodes() const { return nodes_; }
    const TreeShape& shape() const { return shape_; }
    NodeId root() const { return 0; }
    int32_t max_depth() const { return shape_.max_depth(); }

    SubtreeInterval subtree_interval(NodeId v) const { return shape_.interval(v); }

    std::optional<NodeId> child(NodeId parent, std::string_view name) const;
    /// Resolves dotted names below the root ("" is the root itself).
    std::optional<NodeId> find(std::string_view dotted) const;
    /// Dotted path below the root; the root is "".
    std::string path_of(NodeId v) const;

    /// Nearest ancestor-or-self owning its own instance domain.
    NodeId domain_of(NodeId v) const { return domain_[v]; }
    bool owns_domain(NodeId v) const { return domain_[v] == v; }
    /// A Counter (Array) or pointer array (linked Record) ties v's domain to
    /// its parent's.
    bool has_link(NodeId v) const {
        const auto& n = nodes_[v];
        return v != 0 && (n.kind == FieldKind::Array || (n.kind == FieldKind::Record && n.linked));
    }
    /// Nodes with a stored instance column (values, counter, or pointers).
    std::vector<NodeId> stored_nodes() const;

    friend bool operator==(const Schema& a, const Schema& b);

private:
    std::string name_;
    ModelTag model_ = ModelTag::Document;
    std::vector<SchemaNode> nodes_;
    std::vector<NodeId> domain_;
    TreeShape shape_;
};

/// Parses `{name, model, root: {name, kind, primitive?, target?, linked?,
/// label?, children: [...]}}`. Also accepts the relational shorthand
/// `{name, model: "relational", columns: [{name, type}]}`.
Schema parse_schema(const nlohmann::json& manifest);
nlohmann::json serialize_schema(const Schema& schema);

struct PropertyDecl {
    std::string name;
    PrimitiveKind type = PrimitiveKind::String;
};
struct VertexLabel {
    std::string label;
    std::vector<PropertyDecl> properties;
};
struct EdgeLabel {
    std::string label;
    std::string from;
    std::string to;
    std::vector<PropertyDecl> properties;
};
struct GraphManifest {
    std::string name;
    std::string root;
    std::vector<VertexLabel> vertices;
    std::vector<EdgeLabel> edges;
};

GraphManifest parse_graph_manifest(const nlohmann::json& j);
nlohmann::json serialize_graph_manifest(const GraphManifest& g);

/// Depth-first expansion of a property graph into a nested tree rooted at
/// `root`. Edge labels are visited in declaration order; each edge label
/// becomes an Array `<label>#`; a target vertex becomes a linked Record on its
/// first visit and an Indicator leaf `#<label>` afterwards. Edge labels that
/// cannot be reached are dropped and reported through `warnings`.
Schema expand_graph_schema(const GraphManifest& graph, std::vector<std::string>* warnings = nullptr);

/// Relational table: a Record root with one Primitive child per column.
Schema table_schema(const std::string& name, const std::vector<PropertyDecl>& columns);

/// Cross-schema equi-join between two primitive leaves.
struct JoinLink {
    std::string left_schema;
    NodeId left = kNoNode;
    std::string right_schema;
    NodeId right = kNoNode;
};

}  // namespace quest
