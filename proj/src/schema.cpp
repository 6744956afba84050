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

#include "quest/schema.hpp"

#include <functional>
#include <map>
#include <set>

namespace quest {

using nlohmann::json;

std::string_view to_string(FieldKind k) {
    switch (k) {
        case FieldKind::Record: return "record";
        case FieldKind::Array: return "array";
        case FieldKind::Primitive: return "primitive";
        case FieldKind::Indicator: return "indicator";
    }
    return "?";
}

std::string_view to_string(ModelTag m) {
    switch (m) {
        case ModelTag::Relational: return "relational";
        case ModelTag::Document: return "document";
        case ModelTag::Graph: return "graph";
    }
    return "?";
}

ModelTag model_from_string(std::string_view s) {
    if (s == "relational") return ModelTag::Relational;
    if (s == "document") return ModelTag::Document;
    if (s == "graph") return ModelTag::Graph;
    throw SchemaError("unknown model '" + std::string(s) + "'");
}

static FieldKind kind_from_string(std::string_view s) {
    if (s == "record") return FieldKind::Record;
    if (s == "array") return FieldKind::Array;
    if (s == "primitive") return FieldKind::Primitive;
    if (s == "indicator") return FieldKind::Indicator;
    throw SchemaError("unknown field kind '" + std::string(s) + "'");
}

static std::vector<NodeId> parents_of(const std::vector<SchemaNode>& nodes) {
    std::vector<NodeId> p;
    p.reserve(nodes.size());
    for (const auto& n : nodes) p.push_back(n.parent);
    return p;
}

Schema::Schema(std::string name, ModelTag model, std::vector<SchemaNode> nodes)
    : name_(std::move(name)), model_(model), nodes_(std::move(nodes)) {
    if (nodes_.empty()) throw SchemaError("schema '" + name_ + "' has no root");
    if (nodes_[0].kind != FieldKind::Record || nodes_[0].parent != kNoNode)
        throw SchemaError("schema '" + name_ + "': root must be a record");
    shape_ = TreeShape(parents_of(nodes_));
    domain_.assign(nodes_.size(), 0);
    for (NodeId v = 0; v < size(); ++v) {
        auto& n = nodes_[v];
        if (n.id != v) throw SchemaError("schema '" + name_ + "': node ids must be dense");
        if (shape_.preorder(v) != v) throw SchemaError("schema '" + name_ + "': nodes must be listed in preorder");
        n.depth = shape_.depth(v);
        std::set<std::string_view> seen;
        for (NodeId c : n.children) {
            if (nodes_[c].parent != v) throw SchemaError("schema '" + name_ + "': inconsistent child link");
            if (!seen.insert(nodes_[c].name).second)
                throw SchemaError("schema '" + name_ + "': duplicate sibling name '" + nodes_[c].name + "' under '" +
                                  path_of(v) + "'");
        }
        switch (n.kind) {
            case FieldKind::Primitive:
                if (!n.children.empty()) throw SchemaError("primitive field '" + n.name + "' cannot have children");
                break;
            case FieldKind::Indicator:
                if (!n.children.empty()) throw SchemaError("indicator field '" + n.name + "' cannot have children");
                if (n.target < 0 || n.target >= size())
                    throw SchemaError("indicator '" + n.name + "' has an unresolved target");
                if (nodes_[n.target].kind != FieldKind::Array && nodes_[n.target].kind != FieldKind::Record)
                    throw SchemaError("indicator '" + n.name + "' must target a record or array");
                break;
            case FieldKind::Array:
                if (n.children.empty()) {
                    if (n.primitive == PrimitiveKind::Null && !n.repeated_leaf)
                        throw SchemaError("array '" + n.name + "' needs children or an element primitive kind");
                    n.repeated_leaf = true;
                } else if (n.repeated_leaf) {
                    throw SchemaError("repeated primitive '" + n.name + "' cannot have children");
                }
                break;
            case FieldKind::Record:
                if (n.linked && v == 0) throw SchemaError("root record cannot be linked");
                break;
        }
        if (v == 0 || n.kind == FieldKind::Array || (n.kind == FieldKind::Record && n.linked))
            domain_[v] = v;
        else
            domain_[v] = domain_[n.parent];
    }
}

std::optional<NodeId> Schema::child(NodeId parent, std::string_view name) const {
    for (NodeId c : nodes_[parent].children)
        if (nodes_[c].name == name) return c;
    return std::nullopt;
}

std::optional<NodeId> Schema::find(std::string_view dotted) const {
    NodeId cur = 0;
    while (!dotted.empty()) {
        auto dot = dotted.find('.');
        auto part = dotted.substr(0, dot);
        auto c = child(cur, part);
        if (!c) return std::nullopt;
        cur = *c;
        dotted = dot == std::string_view::npos ? std::string_view{} : dotted.substr(dot + 1);
    }
    return cur;
}

std::string Schema::path_of(NodeId v) const {
    std::vector<std::string_view> parts;
    for (NodeId u = v; u != 0; u = nodes_[u].parent) parts.push_back(nodes_[u].name);
    std::string out;
    for (auto it = parts.rbegin(); it != parts.rend(); ++it) {
        if (!out.empty()) out += '.';
        out += *it;
    }
    return out;
}

std::vector<NodeId> Schema::stored_nodes() const {
    std::vector<NodeId> out;
    for (const auto& n : nodes_)
        if (n.kind != FieldKind::Record || n.linked) out.push_back(n.id);
    return out;
}

bool operator==(const Schema& a, const Schema& b) {
    if (a.name_ != b.name_ || a.model_ != b.model_ || a.nodes_.size() != b.nodes_.size()) return false;
    for (size_t i = 0; i < a.nodes_.size(); ++i) {
        const auto& x = a.nodes_[i];
        const auto& y = b.nodes_[i];
        if (x.name != y.name || x.kind != y.kind || x.parent != y.parent || x.children != y.children ||
            x.target != y.target || x.linked != y.linked || x.repeated_leaf != y.repeated_leaf ||
            x.label != y.label || x.model != y.model)
            return false;
        if ((x.kind == FieldKind::Primitive || x.repeated_leaf) && x.primitive != y.primitive) return false;
    }
    return true;
}

namespace {

struct Builder {
    ModelTag model;
    std::vector<SchemaNode> nodes;
    std::vector<std::pair<NodeId, std::string>> pending_targets;

    NodeId add(const json& j, NodeId parent) {
        if (!j.is_object()) throw SchemaError("schema node must be an object");
        SchemaNode n;
        n.id = static_cast<NodeId>(nodes.size());
        n.name = j.at("name").get<std::string>();
        n.kind = kind_from_string(j.value("kind", std::string("record")));
        n.parent = parent;
        n.model = model;
        n.linked = j.value("linked", false);
        n.label = j.value("label", std::string());
        if (j.contains("primitive")) n.primitive = primitive_kind_from_string(j.at("primitive").get<std::string>());
        if (n.kind == FieldKind::Primitive && !j.contains("primitive"))
            throw SchemaError("primitive field '" + n.name + "' needs a primitive kind");
        if (n.kind == FieldKind::Indicator) {
            if (!j.contains("target")) throw SchemaError("indicator '" + n.name + "' has an unresolved target");
            pending_targets.emplace_back(n.id, j.at("target").get<std::string>());
        }
        nodes.push_back(n);
        if (parent != kNoNode) nodes[parent].children.push_back(n.id);
        if (j.contains("children"))
            for (const auto& c : j.at("children")) add(c, n.id);
        return n.id;
    }
};

}  // namespace

Schema parse_schema(const json& manifest) {
    try {
        auto name = manifest.at("name").get<std::string>();
        if (manifest.contains("vertices")) return expand_graph_schema(parse_graph_manifest(manifest));
        auto model = model_from_string(manifest.value("model", std::string("document")));
        if (manifest.contains("columns")) {
            std::vector<PropertyDecl> cols;
            for (const auto& c : manifest.at("columns"))
                cols.push_back({c.at("name").get<std::string>(),
                                primitive_kind_from_string(c.at("type").get<std::string>())});
            return table_schema(name, cols);
        }
        Builder b{model, {}, {}};
        b.add(manifest.at("root"), kNoNode);
        // Resolve targets against a provisional schema view of the names.
        for (auto& [id, target] : b.pending_targets) {
            NodeId cur = 0;
            std::string_view rest = target;
            bool ok = true;
            while (!rest.empty() && ok) {
                auto dot = rest.find('.');
                auto part = rest.substr(0, dot);
                ok = false;
                for (NodeId c : b.nodes[cur].children)
                    if (b.nodes[c].name == part) {
                        cur = c;
                        ok = true;
                        break;
                    }
                rest = dot == std::string_view::npos ? std::string_view{} : rest.substr(dot + 1);
            }
            if (!ok) throw SchemaError("indicator '" + b.nodes[id].name + "' has an unresolved target '" + target + "'");
            b.nodes[id].target = cur;
        }
        return Schema(name, model, std::move(b.nodes));
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed schema manifest: ") + e.what());
    }
}

json serialize_schema(const Schema& schema) {
    std::function<json(NodeId)> emit = [&](NodeId v) {
        const auto& n = schema.node(v);
        json j;
        j["name"] = n.name;
        j["kind"] = std::string(to_string(n.kind));
        if (n.kind == FieldKind::Primitive || n.repeated_leaf) j["primitive"] = std::string(to_string(n.primitive));
        if (n.kind == FieldKind::Indicator) j["target"] = schema.path_of(n.target);
        if (n.linked) j["linked"] = true;
        if (!n.label.empty()) j["label"] = n.label;
        json children = json::array();
        for (NodeId c : n.children) children.push_back(emit(c));
        j["children"] = std::move(children);
        return j;
    };
    json out;
    out["name"] = schema.name();
    out["model"] = std::string(to_string(schema.model()));
    out["root"] = emit(0);
    return out;
}

static std::vector<PropertyDecl> parse_props(const json& j) {
    std::vector<PropertyDecl> out;
    if (!j.is_array()) return out;
    for (const auto& p : j) {
        if (p.is_string()) out.push_back({p.get<std::string>(), PrimitiveKind::String});
        else
            out.push_back({p.at("name").get<std::string>(),
                           primitive_kind_from_string(p.value("type", std::string("string")))});
    }
    return out;
}

static json emit_props(const std::vector<PropertyDecl>& props) {
    json a = json::array();
    for (const auto& p : props) a.push_back({{"name", p.name}, {"type", std::string(to_string(p.type))}});
    return a;
}

GraphManifest parse_graph_manifest(const json& j) {
    try {
        GraphManifest g;
        g.name = j.at("name").get<std::string>();
        g.root = j.at("root").get<std::string>();
        for (const auto& v : j.at("vertices"))
            g.vertices.push_back({v.at("label").get<std::string>(), parse_props(v.value("properties", json::array()))});
        for (const auto& e : j.value("edges", json::array()))
            g.edges.push_back({e.at("label").get<std::string>(), e.at("from").get<std::string>(),
                               e.at("to").get<std::string>(), parse_props(e.value("properties", json::array()))});
        return g;
    } catch (const json::exception& e) {
        throw SchemaError(std::string("malformed graph manifest: ") + e.what());
    }
}

json serialize_graph_manifest(const GraphManifest& g) {
    json j;
    j["name"] = g.name;
    j["model"] = "graph";
    j["root"] = g.root;
    j["vertices"] = json::array();
    for (const auto& v : g.vertices) j["vertices"].push_back({{"label", v.label}, {"properties", emit_props(v.properties)}});
    j["edges"] = json::array();
    for (const auto& e : g.edges)
        j["edges"].push_back(
            {{"label", e.label}, {"from", e.from}, {"to", e.to}, {"properties", emit_props(e.properties)}});
    return j;
}

Schema expand_graph_schema(const GraphManifest& graph, std::vector<std::string>* warnings) {
    std::map<std::string, const VertexLabel*> vertex;
    for (const auto& v : graph.vertices) vertex[v.label] = &v;
    if (!vertex.count(graph.root)) throw SchemaError("graph root label '" + graph.root + "' is not a vertex label");
    for (const auto& e : graph.edges)
        if (!vertex.count(e.from) || !vertex.count(e.to))
            throw SchemaError("edge label '" + e.label + "' references an unknown vertex label");

    std::vector<SchemaNode> nodes;
    std::map<std::string, NodeId> record_of;
    std::set<std::string> used_edges;

    auto push = [&](SchemaNode n, NodeId parent) {
        n.id = static_cast<NodeId>(nodes.size());
        n.parent = parent;
        n.model = ModelTag::Graph;
        nodes.push_back(n);
        if (parent != kNoNode) nodes[parent].children.push_back(n.id);
        return n.id;
    };

    std::function<void(const std::string&, NodeId)> visit = [&](const std::string& label, NodeId parent) {
        SchemaNode rec;
        rec.name = label;
        rec.kind = FieldKind::Record;
        rec.linked = parent != kNoNode;
        rec.label = label;
        NodeId id = push(rec, parent);
        record_of[label] = id;
        for (const auto& p : vertex[label]->properties) {
            SchemaNode prim;
            prim.name = p.name;
            prim.kind = FieldKind::Primitive;
            prim.primitive = p.type;
            push(prim, id);
        }
        for (const auto& e : graph.edges) {
            if (e.from != label) continue;
            used_edges.insert(e.label);
            SchemaNode arr;
            arr.name = e.label + "#";
            arr.kind = FieldKind::Array;
            arr.label = e.label;
            NodeId aid = push(arr, id);
            for (const auto& p : e.properties) {
                SchemaNode prim;
                prim.name = p.name;
                prim.kind = FieldKind::Primitive;
                prim.primitive = p.type;
                push(prim, aid);
            }
            if (auto it = record_of.find(e.to); it != record_of.end()) {
                SchemaNode ind;
                ind.name = "#" + e.to;
                ind.kind = FieldKind::Indicator;
                ind.target = it->second;
                ind.label = e.to;
                push(ind, aid);
            } else {
                visit(e.to, aid);
            }
        }
    };
    visit(graph.root, kNoNode);

    for (const auto& e : graph.edges)
        if (!used_edges.count(e.label) && warnings)
            warnings->push_back("edge label '" + e.label + "' is unreachable from '" + graph.root + "' and was excluded");
    return Schema(graph.name, ModelTag::Graph, std::move(nodes));
}

Schema table_schema(const std::string& name, const std::vector<PropertyDecl>& columns) {
    std::vector<SchemaNode> nodes(1);
    nodes[0].id = 0;
    nodes[0].name = name;
    nodes[0].kind = FieldKind::Record;
    nodes[0].model = ModelTag::Relational;
    for (const auto& c : columns) {
        SchemaNode n;
        n.id = static_cast<NodeId>(nodes.size());
        n.name = c.name;
        n.kind = FieldKind::Primitive;
        n.primitive = c.type;
        n.parent = 0;
        n.model = ModelTag::Relational;
        nodes[0].children.push_back(n.id);
        nodes.push_back(n);
    }
    return Schema(name, ModelTag::Relational, std::move(nodes));
}

}  // namespace quest
