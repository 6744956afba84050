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

#include "quest/ingest.hpp"

#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "quest/csv.hpp"

namespace quest {

using nlohmann::json;

SchemaData empty_schema_data(const Schema& schema) {
    SchemaData d;
    d.schema = schema;
    d.cardinality.assign(schema.size(), 0);
    for (const auto& n : schema.nodes()) {
        if (n.has_values()) d.values.emplace(n.id, PrimitiveColumn(n.primitive));
        if (n.kind == FieldKind::Array) d.counters.emplace(n.id, CounterArray{});
        if (n.kind == FieldKind::Indicator || (n.kind == FieldKind::Record && n.linked))
            d.indicators.emplace(n.id, IndicatorArray{});
    }
    return d;
}

SchemaData ingest_csv(std::istream& in, const Schema& table) {
    for (NodeId c : table.node(0).children)
        if (table.node(c).kind != FieldKind::Primitive || !table.node(c).children.empty())
            throw SchemaError("table schema '" + table.name() + "' must be flat");
    SchemaData d = empty_schema_data(table);
    CsvReader reader(in);
    CsvRow row;
    if (!reader.next(row)) {
        d.validate();
        return d;
    }
    const auto& cols = table.node(0).children;
    std::vector<NodeId> order;
    for (const auto& h : row) {
        auto c = table.child(0, h.value_or(""));
        if (!c) throw DataError("CSV header column '" + h.value_or("") + "' is not in table '" + table.name() + "'");
        order.push_back(*c);
    }
    {
        auto sorted = order;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end() || sorted.size() != cols.size())
            throw DataError("CSV header does not match the columns of table '" + table.name() + "'");
    }
    uint64_t rows = 0;
    while (reader.next(row)) {
        if (row.size() != order.size())
            throw DataError("row " + std::to_string(rows + 1) + " (line " + std::to_string(reader.line()) +
                            ") has " + std::to_string(row.size()) + " fields, expected " +
                            std::to_string(order.size()));
        for (size_t k = 0; k < row.size(); ++k) {
            const auto& n = table.node(order[k]);
            Value v;
            if (row[k]) {
                auto parsed = parse_value(*row[k], n.primitive);
                if (!parsed)
                    throw DataError("row " + std::to_string(rows + 1) + " column '" + n.name + "': cannot parse '" +
                                    *row[k] + "' as " + std::string(to_string(n.primitive)));
                v = *parsed;
            }
            d.values.at(order[k]).append(v);
        }
        ++rows;
    }
    std::fill(d.cardinality.begin(), d.cardinality.end(), rows);
    d.validate();
    return d;
}

DocumentShredder::DocumentShredder(const Schema& schema) : data_(empty_schema_data(schema)) {
    for (const auto& n : schema.nodes())
        if (n.kind == FieldKind::Record && n.linked)
            throw SchemaError("document schema '" + schema.name() + "' cannot contain linked records");
    count_.assign(schema.size(), 0);
    pointers_.assign(schema.size(), {});
}

void DocumentShredder::fail(const std::string& path, const std::string& msg) const {
    throw DataError("document " + std::to_string(ordinal_) + " at '" + path + "': " + msg);
}

void DocumentShredder::add(const json& doc) {
    ++ordinal_;
    if (!doc.is_object()) fail("", "a document must be a JSON object");
    ++count_[0];
    std::string path;
    fill_record(0, doc, path);
}

void DocumentShredder::fill_record(NodeId rec, const json& obj, std::string& path) {
    const auto& s = data_.schema;
    if (!obj.is_null() && !obj.is_object()) fail(path, "expected an object");
    if (obj.is_object())
        for (const auto& [key, _] : obj.items())
            if (!s.child(rec, key)) fail(path, "unknown field '" + key + "'");
    for (NodeId c : s.node(rec).children) {
        const json* val = nullptr;
        if (obj.is_object())
            if (auto it = obj.find(s.node(c).name); it != obj.end()) val = &*it;
        size_t keep = path.size();
        if (!path.empty()) path += '.';
        path += s.node(c).name;
        fill_field(c, val, path);
        path.resize(keep);
    }
}

void DocumentShredder::append_value(NodeId v, const json* val, const std::string& path) {
    const auto& n = data_.schema.node(v);
    auto& col = data_.values.at(v);
    if (!val || val->is_null()) return col.append_null();
    switch (n.primitive) {
        case PrimitiveKind::Number:
            if (!val->is_number()) fail(path, "expected a number");
            return col.append(val->get<double>());
        case PrimitiveKind::String:
            if (!val->is_string()) fail(path, "expected a string");
            return col.append(val->get<std::string>());
        case PrimitiveKind::Boolean:
            if (!val->is_boolean()) fail(path, "expected a boolean");
            return col.append(val->get<bool>());
        case PrimitiveKind::Null:
            fail(path, "expected null");
    }
}

void DocumentShredder::fill_field(NodeId v, const json* val, std::string& path) {
    const auto& n = data_.schema.node(v);
    switch (n.kind) {
        case FieldKind::Primitive:
            append_value(v, val, path);
            return;
        case FieldKind::Indicator: {
            if (!val || val->is_null()) fail(path, "indicator value is required");
            if (!val->is_number_unsigned()) fail(path, "indicator value must be a non-negative offset");
            pointers_[v].push_back(val->get<uint64_t>());
            return;
        }
        case FieldKind::Record:
            fill_record(v, val ? *val : json(nullptr), path);
            return;
        case FieldKind::Array: {
            if (val && !val->is_null() && !val->is_array()) fail(path, "expected an array");
            if (val && val->is_array()) {
                for (const auto& elem : *val) {
                    ++count_[v];
                    if (n.repeated_leaf) append_value(v, &elem, path);
                    else fill_record(v, elem, path);
                }
            }
            data_.counters.at(v).ends.push_back(count_[v]);
            return;
        }
    }
}

SchemaData DocumentShredder::finish() {
    const auto& s = data_.schema;
    for (NodeId v = 0; v < s.size(); ++v) data_.cardinality[v] = count_[s.domain_of(v)];
    for (auto& [v, ind] : data_.indicators) {
        ind.pointers = std::move(pointers_[v]);
        ind.target_cardinality = data_.cardinality[s.node(v).target];
    }
    data_.validate();
    return std::move(data_);
}

SchemaData ingest_json(std::istream& in, const Schema& schema) {
    DocumentShredder shredder(schema);
    std::string line;
    uint64_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        json doc;
        try {
            doc = json::parse(line);
        } catch (const json::parse_error& e) {
            throw DataError("line " + std::to_string(lineno) + ": invalid JSON: " + e.what());
        }
        shredder.add(doc);
    }
    return shredder.finish();
}

namespace {

struct VertexTable {
    std::vector<PropertyDecl> props;
    std::vector<PrimitiveColumn> columns;
    std::unordered_map<std::string, uint64_t> offset;
    uint64_t size = 0;
};

struct EdgeTable {
    std::vector<PropertyDecl> props;
    std::vector<uint64_t> src, dst;
    std::vector<std::vector<Value>> values;  // per property
};

Value parse_or_throw(const std::optional<std::string>& text, const PropertyDecl& p, const std::string& where,
                     uint64_t row) {
    if (!text) return std::monostate{};
    auto v = parse_value(*text, p.type);
    if (!v)
        throw DataError(where + " row " + std::to_string(row) + " property '" + p.name + "': cannot parse '" + *text +
                        "' as " + std::string(to_string(p.type)));
    return *v;
}

}  // namespace

SchemaData ingest_graph(const GraphManifest& graph, std::map<std::string, std::istream*> vertex_files,
                        std::map<std::string, std::istream*> edge_files, std::vector<std::string>* warnings) {
    Schema schema = expand_graph_schema(graph, warnings);
    std::map<std::string, VertexTable> vt;
    for (const auto& vl : graph.vertices) {
        auto& t = vt[vl.label];
        t.props = vl.properties;
        for (const auto& p : vl.properties) t.columns.emplace_back(p.type);
        auto it = vertex_files.find(vl.label);
        if (it == vertex_files.end()) continue;
        CsvReader reader(*it->second);
        CsvRow row;
        if (!reader.next(row)) continue;
        if (row.size() != t.props.size())
            throw DataError("vertex file for '" + vl.label + "' must have one column per declared property");
        for (size_t k = 0; k < row.size(); ++k)
            if (row[k].value_or("") != t.props[k].name)
                throw DataError("vertex file for '" + vl.label + "' has column '" + row[k].value_or("") +
                                "' where '" + t.props[k].name + "' was expected");
        while (reader.next(row)) {
            if (row.size() != t.props.size())
                throw DataError("vertex file for '" + vl.label + "' line " + std::to_string(reader.line()) +
                                ": wrong number of fields");
            if (t.props.empty()) throw DataError("vertex label '" + vl.label + "' declares no key property");
            if (!row[0]) throw DataError("vertex '" + vl.label + "' line " + std::to_string(reader.line()) + ": empty key");
            if (!t.offset.emplace(*row[0], t.size).second)
                throw DataError("duplicate vertex key '" + *row[0] + "' in '" + vl.label + "'");
            for (size_t k = 0; k < row.size(); ++k)
                t.columns[k].append(parse_or_throw(row[k], t.props[k], "vertex '" + vl.label + "'", t.size + 1));
            ++t.size;
        }
    }

    std::map<std::string, EdgeTable> et;
    for (const auto& el : graph.edges) {
        auto& t = et[el.label];
        t.props = el.properties;
        t.values.assign(t.props.size(), {});
        auto it = edge_files.find(el.label);
        if (it == edge_files.end()) continue;
        CsvReader reader(*it->second);
        CsvRow row;
        if (!reader.next(row)) continue;
        if (row.size() != t.props.size() + 2)
            throw DataError("edge file for '" + el.label + "' must have src,dst and one column per property");
        const auto& from = vt.at(el.from);
        const auto& to = vt.at(el.to);
        std::vector<uint64_t> src, dst;
        std::vector<std::vector<Value>> vals(t.props.size());
        uint64_t rowno = 0;
        while (reader.next(row)) {
            ++rowno;
            if (row.size() != t.props.size() + 2)
                throw DataError("edge file for '" + el.label + "' line " + std::to_string(reader.line()) +
                                ": wrong number of fields");
            auto s = from.offset.find(row[0].value_or(""));
            auto d = to.offset.find(row[1].value_or(""));
            if (s == from.offset.end() || d == to.offset.end())
                throw DataError("edge '" + el.label + "' row " + std::to_string(rowno) + ": dangling endpoint '" +
                                (s == from.offset.end() ? row[0].value_or("") : row[1].value_or("")) + "'");
            src.push_back(s->second);
            dst.push_back(d->second);
            for (size_t k = 0; k < t.props.size(); ++k)
                vals[k].push_back(parse_or_throw(row[k + 2], t.props[k], "edge '" + el.label + "'", rowno));
        }
        // Edges are laid out grouped by source vertex, keeping file order within a source.
        std::vector<uint64_t> perm(src.size());
        std::iota(perm.begin(), perm.end(), 0);
        std::stable_sort(perm.begin(), perm.end(), [&](uint64_t a, uint64_t b) { return src[a] < src[b]; });
        for (uint64_t p : perm) {
            t.src.push_back(src[p]);
            t.dst.push_back(dst[p]);
        }
        for (size_t k = 0; k < t.props.size(); ++k)
            for (uint64_t p : perm) t.values[k].push_back(std::move(vals[k][p]));
    }

    SchemaData d = empty_schema_data(schema);
    d.graph = graph;
    for (const auto& n : schema.nodes()) {
        if (n.kind == FieldKind::Record) {
            const auto& t = vt.at(n.label);
            d.cardinality[n.id] = t.size;
            for (NodeId c : n.children) {
                const auto& cn = schema.node(c);
                if (cn.kind != FieldKind::Primitive) continue;
                for (size_t k = 0; k < t.props.size(); ++k)
                    if (t.props[k].name == cn.name) d.values.at(c) = t.columns[k];
            }
            if (n.linked) {
                const auto& e = et.at(schema.node(n.parent).label);
                d.indicators.at(n.id) = IndicatorArray{e.dst, t.size};
            }
        } else if (n.kind == FieldKind::Array) {
            const auto& e = et.at(n.label);
            uint64_t parents = vt.at(schema.node(n.parent).label).size;
            CounterArray c;
            c.ends.assign(parents, 0);
            for (uint64_t s : e.src) ++c.ends[s];
            std::partial_sum(c.ends.begin(), c.ends.end(), c.ends.begin());
            d.counters.at(n.id) = std::move(c);
            d.cardinality[n.id] = e.src.size();
            for (NodeId ch : n.children) {
                const auto& cn = schema.node(ch);
                if (cn.kind != FieldKind::Primitive) continue;
                auto& col = d.values.at(ch);
                for (size_t k = 0; k < e.props.size(); ++k)
                    if (e.props[k].name == cn.name)
                        for (const auto& v : e.values[k]) col.append(v);
            }
        } else if (n.kind == FieldKind::Indicator) {
            const auto& e = et.at(schema.node(n.parent).label);
            d.cardinality[n.id] = e.src.size();
            d.indicators.at(n.id) = IndicatorArray{e.dst, vt.at(n.label).size};
        } else {
            d.cardinality[n.id] = d.cardinality[n.parent];
        }
    }
    d.validate();
    return d;
}

}  // namespace quest
