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

#include "quest/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace quest {

namespace fs = std::filesystem;
using nlohmann::json;

std::string read_text_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot open " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const fs::path& p, const std::string& data) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write " + p.string());
    out.write(data.data(), static_cast<std::streamsize>(data.size()));
    if (!out) throw DataError("short write to " + p.string());
}

void SchemaData::validate() const {
    const auto& s = schema;
    if (cardinality.size() != static_cast<size_t>(s.size())) throw DataError("cardinality table size mismatch");
    auto fail = [&](NodeId v, const std::string& msg) {
        throw DataError("schema '" + s.name() + "' node '" + s.path_of(v) + "': " + msg);
    };
    for (NodeId v = 0; v < s.size(); ++v) {
        const auto& n = s.node(v);
        if (cardinality[v] != cardinality[s.domain_of(v)]) fail(v, "cardinality differs from its domain");
        if (n.has_values()) {
            auto it = values.find(v);
            if (it == values.end()) fail(v, "missing value column");
            if (it->second.size() != cardinality[v]) fail(v, "value column length mismatch");
        }
        if (n.kind == FieldKind::Array) {
            auto it = counters.find(v);
            if (it == counters.end()) fail(v, "missing counter");
            if (it->second.size() != cardinality[n.parent]) fail(v, "counter length differs from parent cardinality");
            validate_counter(it->second, cardinality[v]);
        }
        if (n.kind == FieldKind::Indicator || (n.kind == FieldKind::Record && n.linked)) {
            auto it = indicators.find(v);
            if (it == indicators.end()) fail(v, "missing indicator");
            const auto& ind = it->second;
            uint64_t want_len = n.kind == FieldKind::Indicator ? cardinality[v] : cardinality[n.parent];
            uint64_t want_target = n.kind == FieldKind::Indicator ? cardinality[n.target] : cardinality[v];
            if (ind.size() != want_len) fail(v, "indicator length mismatch");
            if (ind.target_cardinality != want_target) fail(v, "indicator target cardinality mismatch");
            for (uint64_t p : ind.pointers)
                if (p >= want_target) fail(v, "indicator pointer out of range");
        }
    }
}

bool operator==(const SchemaData& a, const SchemaData& b) {
    return a.schema == b.schema && a.cardinality == b.cardinality && a.values == b.values &&
           a.counters == b.counters && a.indicators == b.indicators;
}

const SchemaEntry& StoreManifest::schema(const std::string& name) const {
    for (const auto& e : schemas)
        if (e.schema.name() == name) return e;
    throw QueryError("unknown schema '" + name + "'");
}

bool StoreManifest::has_schema(const std::string& name) const {
    for (const auto& e : schemas)
        if (e.schema.name() == name) return true;
    return false;
}

json StoreManifest::to_json() const {
    json j;
    j["version"] = version;
    j["block_size"] = block_size;
    j["meta_unit"] = meta_unit;
    j["schemas"] = json::array();
    for (const auto& e : schemas) {
        json s;
        s["schema"] = serialize_schema(e.schema);
        if (e.graph) s["graph"] = serialize_graph_manifest(*e.graph);
        s["root_cardinality"] = e.root_cardinality();
        s["nodes"] = json::array();
        for (NodeId v = 0; v < e.schema.size(); ++v) {
            json n;
            n["id"] = v;
            n["path"] = e.schema.path_of(v);
            n["cardinality"] = e.cardinality[v];
            if (auto it = e.value_files.find(v); it != e.value_files.end()) n["values"] = it->second;
            if (auto it = e.link_files.find(v); it != e.link_files.end()) n["link"] = it->second;
            if (auto it = e.unit_size.find(v); it != e.unit_size.end()) n["unit_size"] = it->second;
            if (auto it = e.stats.find(v); it != e.stats.end()) n["histogram"] = stats_to_json(it->second);
            s["nodes"].push_back(std::move(n));
        }
        j["schemas"].push_back(std::move(s));
    }
    return j;
}

StoreManifest StoreManifest::from_json(const json& j) {
    try {
        StoreManifest m;
        m.version = j.at("version").get<uint32_t>();
        if (m.version != 1) throw DataError("unsupported store version");
        m.block_size = j.at("block_size").get<uint64_t>();
        m.meta_unit = j.at("meta_unit").get<uint64_t>();
        for (const auto& s : j.at("schemas")) {
            SchemaEntry e;
            e.schema = parse_schema(s.at("schema"));
            if (s.contains("graph")) e.graph = parse_graph_manifest(s.at("graph"));
            e.cardinality.assign(e.schema.size(), 0);
            for (const auto& n : s.at("nodes")) {
                NodeId v = n.at("id").get<NodeId>();
                if (v < 0 || v >= e.schema.size()) throw DataError("manifest node id out of range");
                e.cardinality[v] = n.at("cardinality").get<uint64_t>();
                if (n.contains("values")) e.value_files[v] = n.at("values").get<std::string>();
                if (n.contains("link")) e.link_files[v] = n.at("link").get<std::string>();
                if (n.contains("unit_size")) e.unit_size[v] = n.at("unit_size").get<double>();
                if (n.contains("histogram"))
                    e.stats[v] = stats_from_json(n.at("histogram"), e.schema.node(v).primitive);
            }
            m.schemas.push_back(std::move(e));
        }
        return m;
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed store manifest: ") + e.what());
    }
}

static std::string node_file(const Schema& s, NodeId v, const char* suffix) {
    return s.name() + "/" + s.path_of(v) + suffix;
}

void write_store(const fs::path& dir, const std::vector<SchemaData>& schemas, uint64_t block_size,
                 uint64_t meta_unit) {
    StoreManifest m;
    if (fs::exists(dir / "manifest.json")) {
        auto old = StoreManifest::from_json(json::parse(read_text_file(dir / "manifest.json")));
        for (auto& e : old.schemas) {
            bool replaced = false;
            for (const auto& d : schemas) replaced |= d.schema.name() == e.schema.name();
            if (!replaced) m.schemas.push_back(std::move(e));
        }
    }
    m.block_size = block_size;
    m.meta_unit = meta_unit;
    fs::create_directories(dir);
    for (const auto& d : schemas) {
        d.validate();
        const auto& s = d.schema;
        fs::remove_all(dir / s.name());
        SchemaEntry e;
        e.schema = s;
        e.graph = d.graph;
        e.cardinality = d.cardinality;
        for (const auto& [v, col] : d.values) {
            auto rel = node_file(s, v, ".col");
            write_text_file(dir / rel, encode_file(column_kind_for(col.kind()), col.size(), col.encode()));
            e.value_files[v] = rel;
            e.unit_size[v] = col.avg_unit_size();
            e.stats[v] = build_stats(col);
        }
        for (const auto& [v, c] : d.counters) {
            auto rel = node_file(s, v, s.node(v).repeated_leaf ? ".counter.col" : ".col");
            write_text_file(dir / rel, encode_file(ColumnKind::Counter, c.size(), encode_counter(c)));
            e.link_files[v] = rel;
        }
        for (const auto& [v, ind] : d.indicators) {
            auto rel = node_file(s, v, ".col");
            write_text_file(dir / rel, encode_file(ColumnKind::Indicator, ind.size(), encode_indicator(ind)));
            e.link_files[v] = rel;
        }
        m.schemas.push_back(std::move(e));
    }
    std::sort(m.schemas.begin(), m.schemas.end(),
              [](const SchemaEntry& a, const SchemaEntry& b) { return a.schema.name() < b.schema.name(); });
    write_text_file(dir / "manifest.json", m.to_json().dump(1) + "\n");
}

Store::Store(fs::path dir) : dir_(std::move(dir)) {
    auto mpath = dir_ / "manifest.json";
    if (!fs::exists(mpath)) throw DataError("no store at " + dir_.string() + " (manifest.json missing)");
    try {
        manifest_ = StoreManifest::from_json(json::parse(read_text_file(mpath)));
    } catch (const json::parse_error& e) {
        throw DataError(std::string("malformed store manifest: ") + e.what());
    }
}

std::string Store::read_file(const std::string& rel) {
    auto bytes = read_text_file(dir_ / rel);
    io_.bytes_read += bytes.size();
    return bytes;
}

const PrimitiveColumn& Store::values(const std::string& schema, NodeId v) {
    std::lock_guard lock(mu_);
    const auto& e = entry(schema);
    auto it = e.value_files.find(v);
    if (it == e.value_files.end()) throw QueryError("node '" + e.schema.path_of(v) + "' has no value column");
    auto& slot = value_cache_[it->second];
    if (!slot) {
        auto bytes = read_file(it->second);
        auto f = decode_file(bytes, it->second);
        slot = std::make_unique<PrimitiveColumn>(PrimitiveColumn::decode(f.kind, f.cardinality, f.payload));
        ++io_.columns_read;
    }
    return *slot;
}

const CounterArray& Store::counter(const std::string& schema, NodeId v) {
    std::lock_guard lock(mu_);
    const auto& e = entry(schema);
    auto it = e.link_files.find(v);
    if (it == e.link_files.end() || e.schema.node(v).kind != FieldKind::Array)
        throw QueryError("node '" + e.schema.path_of(v) + "' has no counter");
    auto& slot = counter_cache_[it->second];
    if (!slot) {
        auto bytes = read_file(it->second);
        auto f = decode_file(bytes, it->second);
        if (f.kind != ColumnKind::Counter) throw DataError(it->second + " is not a counter file");
        slot = std::make_unique<CounterArray>(decode_counter(f.cardinality, f.payload));
        ++io_.metadata_reads;
    }
    return *slot;
}

const IndicatorArray& Store::indicator(const std::string& schema, NodeId v) {
    std::lock_guard lock(mu_);
    const auto& e = entry(schema);
    auto it = e.link_files.find(v);
    if (it == e.link_files.end() || e.schema.node(v).kind == FieldKind::Array)
        throw QueryError("node '" + e.schema.path_of(v) + "' has no indicator");
    auto& slot = indicator_cache_[it->second];
    if (!slot) {
        auto bytes = read_file(it->second);
        auto f = decode_file(bytes, it->second);
        if (f.kind != ColumnKind::Indicator) throw DataError(it->second + " is not an indicator file");
        slot = std::make_unique<IndicatorArray>(decode_indicator(f.cardinality, f.payload));
        ++io_.metadata_reads;
    }
    return *slot;
}

const Relation& Store::link(const std::string& schema, NodeId v) {
    const auto& e = entry(schema);
    if (!e.schema.has_link(v)) throw QueryError("node '" + e.schema.path_of(v) + "' has no link to its parent");
    const std::string key = schema + "\x1f" + std::to_string(v);
    {
        std::lock_guard lock(mu_);
        if (auto it = link_cache_.find(key); it != link_cache_.end()) return *it->second;
    }
    Relation r = e.schema.node(v).kind == FieldKind::Array ? Relation::range(counter(schema, v))
                                                           : Relation::pointer(indicator(schema, v));
    std::lock_guard lock(mu_);
    auto& slot = link_cache_[key];
    if (!slot) slot = std::make_unique<Relation>(std::move(r));
    return *slot;
}

SchemaData Store::load_all(const std::string& schema) {
    const auto& e = entry(schema);
    SchemaData d;
    d.schema = e.schema;
    d.graph = e.graph;
    d.cardinality = e.cardinality;
    for (const auto& [v, _] : e.value_files) d.values[v] = values(schema, v);
    for (const auto& [v, _] : e.link_files) {
        if (e.schema.node(v).kind == FieldKind::Array) d.counters[v] = counter(schema, v);
        else d.indicators[v] = indicator(schema, v);
    }
    d.validate();
    return d;
}

}  // namespace quest
