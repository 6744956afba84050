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

#include "quest/oracle.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "quest/relation.hpp"

namespace quest {

using nlohmann::json;

namespace {

json value_json(const Value& v) {
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto s = std::get_if<std::string>(&v)) return *s;
    if (auto b = std::get_if<bool>(&v)) return *b;
    return nullptr;
}

Value json_value(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>();
    return std::monostate{};
}

bool value_less(const Value& a, const Value& b) {
    if (a.index() != b.index()) return a.index() < b.index();
    if (is_null(a)) return false;
    return compare_values(a, b) < 0;
}

bool row_less(const std::vector<Value>& a, const std::vector<Value>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(), value_less);
}

bool edge_less(const EdgeRecord& a, const EdgeRecord& b) {
    if (value_less(a.src, b.src) || value_less(b.src, a.src)) return value_less(a.src, b.src);
    if (value_less(a.dst, b.dst) || value_less(b.dst, a.dst)) return value_less(a.dst, b.dst);
    return row_less(a.properties, b.properties);
}

class DocumentBuilder {
public:
    explicit DocumentBuilder(const SchemaData& d) : d_(d) {}

    json record(NodeId rec, uint64_t inst) const {
        json o = json::object();
        for (NodeId c : d_.schema.node(rec).children) o[d_.schema.node(c).name] = field(c, inst);
        return o;
    }

private:
    json field(NodeId v, uint64_t inst) const {
        const auto& n = d_.schema.node(v);
        switch (n.kind) {
            case FieldKind::Primitive: return value_json(d_.values.at(v).get(inst));
            case FieldKind::Record: return record(v, inst);
            case FieldKind::Indicator: return d_.indicators.at(v).pointers.at(inst);
            case FieldKind::Array: {
                json a = json::array();
                auto [lo, hi] = counter_range(d_.counters.at(v), inst);
                for (uint64_t y = lo; y < hi; ++y) a.push_back(n.repeated_leaf ? value_json(d_.values.at(v).get(y)) : record(v, y));
                return a;
            }
        }
        return nullptr;
    }
    const SchemaData& d_;
};

const std::vector<PropertyDecl>& vertex_props(const GraphManifest& g, const std::string& label) {
    for (const auto& v : g.vertices)
        if (v.label == label) return v.properties;
    throw DataError("graph has no vertex label '" + label + "'");
}

const EdgeLabel& edge_decl(const GraphManifest& g, const std::string& label) {
    for (const auto& e : g.edges)
        if (e.label == label) return e;
    throw DataError("graph has no edge label '" + label + "'");
}

std::optional<NodeId> child_named(const Schema& s, NodeId v, const std::string& name, FieldKind kind) {
    for (NodeId c : s.node(v).children)
        if (s.node(c).name == name && s.node(c).kind == kind) return c;
    return std::nullopt;
}

/// Target child of an edge array: the linked Record or Indicator.
NodeId edge_target(const Schema& s, NodeId arr) {
    for (NodeId c : s.node(arr).children) {
        const auto& n = s.node(c);
        if (n.kind == FieldKind::Indicator || (n.kind == FieldKind::Record && n.linked)) return c;
    }
    throw DataError("edge array " + s.path_of(arr) + " has no target");
}

}  // namespace

MaterializedRecords materialize_records(const SchemaData& d) {
    d.validate();
    MaterializedRecords r;
    r.schema = d.schema;
    const Schema& s = d.schema;
    const uint64_t roots = d.cardinality.empty() ? 0 : d.cardinality[0];
    switch (s.model()) {
        case ModelTag::Document: {
            DocumentBuilder b(d);
            for (uint64_t i = 0; i < roots; ++i) r.documents.push_back(b.record(0, i));
            break;
        }
        case ModelTag::Relational: {
            const auto& cols = s.node(0).children;
            for (uint64_t i = 0; i < roots; ++i) {
                std::vector<Value> row;
                for (NodeId c : cols) row.push_back(d.values.at(c).get(i));
                r.rows.push_back(std::move(row));
            }
            break;
        }
        case ModelTag::Graph: {
            if (!d.graph) throw DataError("graph schema " + s.name() + " has no manifest");
            r.graph = d.graph;
            const GraphManifest& g = *d.graph;
            for (const auto& n : s.nodes()) {
                if (n.kind != FieldKind::Record) continue;
                auto& rows = r.vertices[n.label];
                const auto& props = vertex_props(g, n.label);
                for (uint64_t i = 0; i < d.cardinality[n.id]; ++i) {
                    std::vector<Value> row;
                    for (const auto& p : props) {
                        auto c = child_named(s, n.id, p.name, FieldKind::Primitive);
                        row.push_back(c ? d.values.at(*c).get(i) : Value{});
                    }
                    rows.push_back(std::move(row));
                }
            }
            for (const auto& n : s.nodes()) {
                if (n.kind != FieldKind::Array) continue;
                const EdgeLabel& el = edge_decl(g, n.label);
                const auto& from = r.vertices.at(el.from);
                const auto& to = r.vertices.at(el.to);
                const auto& ptr = d.indicators.at(edge_target(s, n.id)).pointers;
                const auto& counter = d.counters.at(n.id);
                auto& out = r.edges[n.label];
                for (uint64_t src = 0; src < counter.ends.size(); ++src) {
                    auto [lo, hi] = counter_range(counter, src);
                    for (uint64_t j = lo; j < hi; ++j) {
                        EdgeRecord e{from.at(src).at(0), to.at(ptr.at(j)).at(0), {}};
                        for (const auto& p : el.properties) {
                            auto c = child_named(s, n.id, p.name, FieldKind::Primitive);
                            e.properties.push_back(c ? d.values.at(*c).get(j) : Value{});
                        }
                        out.push_back(std::move(e));
                    }
                }
            }
            break;
        }
    }
    return r;
}

MaterializedRecords materialize_records(Store& store, const std::string& schema) {
    return materialize_records(store.load_all(schema));
}

namespace {

json canonical_field(const Schema& s, NodeId v, const json* val);

json canonical_record(const Schema& s, NodeId rec, const json* val) {
    json o = json::object();
    for (NodeId c : s.node(rec).children) {
        const auto& name = s.node(c).name;
        o[name] = canonical_field(s, c, val && val->is_object() && val->contains(name) ? &(*val)[name] : nullptr);
    }
    return o;
}

json canonical_field(const Schema& s, NodeId v, const json* val) {
    const auto& n = s.node(v);
    switch (n.kind) {
        case FieldKind::Primitive:
        case FieldKind::Indicator: return val ? *val : json(nullptr);
        case FieldKind::Record: return canonical_record(s, v, val);
        case FieldKind::Array: {
            json a = json::array();
            if (val && val->is_array())
                for (const auto& e : *val) a.push_back(n.repeated_leaf ? e : canonical_record(s, v, &e));
            return a;
        }
    }
    return nullptr;
}

}  // namespace

json canonical_document(const Schema& schema, const json& doc) { return canonical_record(schema, 0, &doc); }

bool same_records(const MaterializedRecords& a, const MaterializedRecords& b, std::string* why) {
    auto fail = [&](std::string m) {
        if (why) *why = std::move(m);
        return false;
    };
    if (!(a.schema == b.schema)) return fail("schemas differ");
    if (a.documents.size() != b.documents.size()) return fail("document counts differ");
    for (size_t i = 0; i < a.documents.size(); ++i)
        if (canonical_document(a.schema, a.documents[i]) != canonical_document(b.schema, b.documents[i]))
            return fail("document " + std::to_string(i) + " differs");
    if (a.rows != b.rows) return fail("table rows differ");
    if (a.vertices != b.vertices) return fail("vertex lists differ");
    if (a.edges.size() != b.edges.size()) return fail("edge labels differ");
    for (const auto& [label, ea] : a.edges) {
        auto it = b.edges.find(label);
        if (it == b.edges.end()) return fail("edge label " + label + " missing");
        auto x = ea, y = it->second;
        std::sort(x.begin(), x.end(), edge_less);
        std::sort(y.begin(), y.end(), edge_less);
        if (x != y) return fail("edges of " + label + " differ");
    }
    return true;
}

std::vector<std::vector<Value>> sorted_rows(std::vector<std::vector<Value>> rows) {
    std::sort(rows.begin(), rows.end(), row_less);
    return rows;
}

NodeId naive_lca(const TreeShape& tree, NodeId u, NodeId v) { return tree.naive_lca(u, v); }

namespace {

using Pairs = std::vector<std::pair<uint64_t, uint64_t>>;

/// Instances per domain, link pairs and values, rebuilt from records.
struct Model {
    const Schema* schema = nullptr;
    std::vector<uint64_t> count;
    std::vector<Pairs> link;
    std::vector<std::vector<Value>> values;

    explicit Model(const MaterializedRecords& r) : schema(&r.schema) {
        const Schema& s = r.schema;
        count.assign(s.size(), 0);
        link.assign(s.size(), {});
        values.assign(s.size(), {});
        switch (s.model()) {
            case ModelTag::Document:
                for (const auto& doc : r.documents) {
                    uint64_t x = count[0]++;
                    record(0, doc, x);
                }
                break;
            case ModelTag::Relational: {
                count[0] = r.rows.size();
                const auto& cols = s.node(0).children;
                for (size_t k = 0; k < cols.size(); ++k)
                    for (const auto& row : r.rows) values[cols[k]].push_back(row.at(k));
                break;
            }
            case ModelTag::Graph: graph(r); break;
        }
    }

    void put(NodeId v, uint64_t x, Value val) {
        if (values[v].size() <= x) values[v].resize(x + 1);
        values[v][x] = std::move(val);
    }

    void record(NodeId rec, const json& obj, uint64_t x) {
        for (NodeId c : schema->node(rec).children) {
            const auto& name = schema->node(c).name;
            field(c, obj.is_object() && obj.contains(name) ? &obj[name] : nullptr, x);
        }
    }

    void field(NodeId v, const json* val, uint64_t x) {
        const auto& n = schema->node(v);
        switch (n.kind) {
            case FieldKind::Primitive: put(v, x, val ? json_value(*val) : Value{}); break;
            case FieldKind::Record: record(v, val ? *val : json(nullptr), x); break;
            case FieldKind::Indicator:
                if (val && val->is_number_unsigned()) link[v].emplace_back(x, val->get<uint64_t>());
                break;
            case FieldKind::Array:
                if (!val || !val->is_array()) break;
                for (const auto& e : *val) {
                    uint64_t y = count[v]++;
                    link[v].emplace_back(x, y);
                    if (n.repeated_leaf) put(v, y, json_value(e));
                    else record(v, e, y);
                }
                break;
        }
    }

    void graph(const MaterializedRecords& r) {
        const Schema& s = *schema;
        const GraphManifest& g = *r.graph;
        std::map<std::string, std::unordered_map<std::string, uint64_t>> key_index;
        for (const auto& [label, rows] : r.vertices)
            for (uint64_t i = 0; i < rows.size(); ++i) key_index[label][format_value(rows[i].at(0))] = i;
        auto lookup = [&](const std::string& label, const Value& key) {
            auto it = key_index.at(label).find(format_value(key));
            if (it == key_index.at(label).end()) throw DataError("edge endpoint '" + format_value(key) + "' not found");
            return it->second;
        };
        for (const auto& n : s.nodes()) {
            if (n.kind == FieldKind::Record) {
                const auto& rows = r.vertices.at(n.label);
                count[n.id] = rows.size();
                const auto& props = vertex_props(g, n.label);
                for (NodeId c : n.children) {
                    const auto& cn = s.node(c);
                    if (cn.kind != FieldKind::Primitive) continue;
                    for (size_t k = 0; k < props.size(); ++k)
                        if (props[k].name == cn.name)
                            for (const auto& row : rows) values[c].push_back(row[k]);
                }
            } else if (n.kind == FieldKind::Array) {
                const EdgeLabel& el = edge_decl(g, n.label);
                const auto& edges = r.edges.at(n.label);
                count[n.id] = edges.size();
                NodeId tgt = edge_target(s, n.id);
                for (uint64_t j = 0; j < edges.size(); ++j) {
                    link[n.id].emplace_back(lookup(el.from, edges[j].src), j);
                    link[tgt].emplace_back(j, lookup(el.to, edges[j].dst));
                }
                for (NodeId c : n.children) {
                    const auto& cn = s.node(c);
                    if (cn.kind != FieldKind::Primitive) continue;
                    for (size_t k = 0; k < el.properties.size(); ++k)
                        if (el.properties[k].name == cn.name)
                            for (const auto& e : edges) values[c].push_back(e.properties[k]);
                }
            }
        }
    }
};

}  // namespace

uint64_t instance_count(const MaterializedRecords& r) {
    std::function<uint64_t(const json&)> walk = [&](const json& j) -> uint64_t {
        uint64_t n = 0;
        if (j.is_object()) {
            n = 1;
            for (const auto& [k, v] : j.items()) n += walk(v);
        } else if (j.is_array()) {
            for (const auto& v : j) n += v.is_object() ? walk(v) : 1;
        }
        return n;
    };
    uint64_t n = r.rows.size();
    for (const auto& d : r.documents) n += walk(d);
    for (const auto& [label, vs] : r.vertices) n += vs.size();
    for (const auto& [label, es] : r.edges) n += es.size();
    return n;
}

ResultSet oracle_evaluate(const Query& q, const std::map<std::string, MaterializedRecords>& records) {
    uint64_t total = 0;
    for (const auto& [name, r] : records) total += instance_count(r);
    if (total > kOracleMaxInstances)
        throw Error("oracle input has " + std::to_string(total) + " instances; the limit is " +
                    std::to_string(kOracleMaxInstances));
    std::map<std::string, const Schema*> schemas;
    std::map<std::string, Model> models;
    for (const auto& [name, r] : records) {
        schemas[name] = &r.schema;
        models.emplace(name, Model(r));
    }
    QueryTree t = QueryTree::build(q, schemas);
    const int n = t.size();
    const TreeShape& sh = t.shape();
    auto model = [&](QNodeId x) -> const Model& { return models.at(t.schema_name(x)); };
    auto value = [&](QNodeId x, uint64_t inst) -> const Value& {
        static const Value null;
        const auto& col = model(x).values[t.node(x).node];
        return inst < col.size() ? col[inst] : null;
    };

    // Pattern over domain query nodes.
    std::vector<uint64_t> card(n, 0);
    std::vector<QNodeId> up(n, -1);
    std::vector<std::vector<std::vector<uint64_t>>> down_adj(n), up_adj(n);
    std::vector<std::vector<QNodeId>> kids(n);
    for (QNodeId d = 0; d < n; ++d) {
        if (t.domain_of(d) != d) continue;
        card[d] = model(d).count[t.node(d).node];
    }
    for (QNodeId d = 1; d < n; ++d) {
        if (t.domain_of(d) != d) continue;
        QNodeId pd = t.domain_of(sh.parent(d));
        up[d] = pd;
        kids[pd].push_back(d);
        Pairs pairs;
        if (t.is_segment_root(d)) {
            const Segment& seg = t.segment(t.node(d).segment);
            if (seg.attach == AttachKind::Indicator) {
                pairs = model(seg.parent).link[t.node(seg.parent).node];
            } else {
                QNodeId right = seg.parent;
                for (uint64_t r = 0; r < card[pd]; ++r) {
                    const Value& rv = value(right, r);
                    if (is_null(rv)) continue;
                    for (uint64_t l = 0; l < card[d]; ++l) {
                        const Value& lv = value(seg.join_key, l);
                        if (!is_null(lv) && lv.index() == rv.index() && compare_values(lv, rv) == 0) pairs.emplace_back(r, l);
                    }
                }
            }
        } else {
            pairs = model(d).link[t.node(d).node];
        }
        down_adj[d].assign(card[pd], {});
        up_adj[d].assign(card[d], {});
        for (auto [a, b] : pairs) {
            if (a >= card[pd] || b >= card[d]) throw DataError("oracle: link pair out of range at " + t.label(d));
            down_adj[d][a].push_back(b);
            up_adj[d][b].push_back(a);
        }
    }
    std::vector<std::vector<const Predicate*>> preds(n);
    for (size_t i = 0; i < q.filters.size(); ++i) preds[t.filters()[i]].push_back(&q.filters[i]);

    std::map<std::pair<QNodeId, QNodeId>, std::vector<char>> memo;
    // sat(d, from)[x]: x satisfies everything reachable from d without
    // passing through `from`.
    std::function<const std::vector<char>&(QNodeId, QNodeId)> sat = [&](QNodeId d, QNodeId from) -> const std::vector<char>& {
        if (auto it = memo.find({d, from}); it != memo.end()) return it->second;
        std::vector<char> ok(card[d], 1);
        for (QNodeId f = 0; f < n; ++f) {
            if (t.domain_of(f) != d) continue;
            for (const Predicate* p : preds[f])
                for (uint64_t x = 0; x < card[d]; ++x)
                    if (ok[x] && !value_matches(value(f, x), p->op, p->operands)) ok[x] = 0;
        }
        auto require = [&](QNodeId nb, const std::vector<std::vector<uint64_t>>& adj) {
            const auto& s = sat(nb, d);
            for (uint64_t x = 0; x < card[d]; ++x) {
                if (!ok[x]) continue;
                bool any = false;
                for (uint64_t y : adj[x]) any = any || s[y];
                ok[x] = any;
            }
        };
        if (up[d] >= 0 && up[d] != from) require(up[d], up_adj[d]);
        for (QNodeId c : kids[d])
            if (c != from) require(c, down_adj[c]);
        return memo.emplace(std::make_pair(d, from), std::move(ok)).first->second;
    };

    ResultSet rs;
    rs.columns = q.fetch;
    for (char c : sat(0, -1)) rs.matched += c != 0;
    if (t.fetch_chain().empty()) return rs;

    const auto& doms = t.fetch_domains();
    std::vector<QNodeId> path;
    for (QNodeId x : sh.path_up(doms.back(), doms.front()))
        if (t.domain_of(x) == x) path.push_back(x);
    std::reverse(path.begin(), path.end());
    std::vector<size_t> at;
    for (QNodeId f : t.fetch()) at.push_back(std::find(path.begin(), path.end(), t.domain_of(f)) - path.begin());

    std::set<std::vector<uint64_t>> seen;
    std::vector<uint64_t> inst(path.size());
    std::function<void(size_t)> walk = [&](size_t i) {
        if (i + 1 == path.size()) {
            std::vector<uint64_t> key;
            for (QNodeId dd : doms) key.push_back(inst[std::find(path.begin(), path.end(), dd) - path.begin()]);
            if (!seen.insert(key).second) return;
            std::vector<Value> row;
            for (size_t c = 0; c < at.size(); ++c) row.push_back(value(t.fetch()[c], inst[at[c]]));
            rs.rows.push_back(std::move(row));
            return;
        }
        const auto& s = sat(path[i + 1], path[i]);
        for (uint64_t y : down_adj[path[i + 1]][inst[i]]) {
            if (!s[y]) continue;
            inst[i + 1] = y;
            walk(i + 1);
        }
    };
    const auto& top = sat(path[0], -1);
    for (uint64_t x = 0; x < card[path[0]]; ++x) {
        if (!top[x]) continue;
        inst[0] = x;
        walk(0);
    }
    rs.rows = sorted_rows(std::move(rs.rows));
    return rs;
}

}  // namespace quest
