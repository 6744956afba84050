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

#include "quest/skiptree.hpp"

#include <json.hpp>

#include "quest/column.hpp"

namespace quest {

namespace fs = std::filesystem;
using nlohmann::json;

int skip_max_height(int max_depth) {
    int h = 0;
    while ((1 << h) < max_depth) ++h;
    return h;
}

int skip_height(int depth, int H) {
    int h = 0;
    for (int i = 1; i <= H; ++i)
        if (depth % (1 << i) == 0) ++h;
    return h;
}

SkipIndex::SkipIndex(const TreeShape& shape) : shape_(shape) {
    const int n = shape.size();
    H_ = skip_max_height(shape.max_depth());
    height_.resize(n);
    ancestors_.assign(n, {});
    for (NodeId v = 0; v < n; ++v) height_[v] = skip_height(shape.depth(v), H_);
    // near[v][j]: nearest ancestor-or-self of v with height >= j. Preorder
    // visits parents first.
    std::vector<std::vector<NodeId>> near(n, std::vector<NodeId>(H_ + 1, kNoNode));
    for (int p = 0; p < n; ++p) {
        NodeId v = shape.at_preorder(p);
        NodeId par = shape.parent(v);
        for (int j = 0; j <= H_; ++j) near[v][j] = height_[v] >= j ? v : (par == kNoNode ? kNoNode : near[par][j]);
        if (par == kNoNode) continue;
        for (int j = 0; j <= height_[v]; ++j) ancestors_[v].push_back(near[par][j]);
    }
}

SkipIndex::Lca SkipIndex::find_lca(NodeId a, NodeId b) const {
    Lca out;
    NodeId v = a, s = b;
    if (shape_.depth(b) > shape_.depth(a)) std::swap(v, s);
    if (shape_.is_ancestor_or_self(s, v)) {
        out.lca = s;
        return out;
    }
    int i = height_[v];
    while (i >= 0) {
        NodeId up = ancestors_[v][i];
        if (shape_.depth(up) == shape_.depth(s)) {
            v = up;
            ++out.steps;
            break;
        }
        if (shape_.depth(up) > shape_.depth(s)) {
            v = up;
            ++out.steps;
            i = height_[v];
        } else {
            --i;
        }
    }
    int j = height_[s];
    while (j >= 0) {
        if (ancestors_[v][j] != ancestors_[s][j]) {
            v = ancestors_[v][j];
            s = ancestors_[s][j];
            ++out.steps;
            j = height_[v];
        } else {
            --j;
        }
    }
    out.lca = ancestors_[v][0];
    return out;
}

std::vector<std::pair<NodeId, int>> SkipIndex::climb(NodeId v, NodeId a) const {
    if (!shape_.is_ancestor_or_self(a, v)) throw Error("climb target is not an ancestor");
    std::vector<std::pair<NodeId, int>> hops;
    const int target = shape_.depth(a);
    while (v != a) {
        const auto& list = ancestors_[v];
        int j = static_cast<int>(list.size()) - 1;
        while (shape_.depth(list[j]) < target) --j;
        hops.emplace_back(v, j);
        v = list[j];
    }
    return hops;
}

uint64_t SkipIndex::entry_count() const {
    uint64_t n = 0;
    for (const auto& l : ancestors_) n += l.size();
    return n;
}

SkipTree SkipTree::build(const Schema& schema, const std::vector<uint64_t>& cardinality,
                         const std::function<const Relation&(NodeId)>& link) {
    SkipTree t;
    t.schema_ = schema;
    t.index_ = SkipIndex(schema.shape());
    const int n = schema.size();
    std::map<std::pair<NodeId, NodeId>, int> slot_of;
    t.entry_.assign(n, {});
    for (NodeId v = 0; v < n; ++v) {
        for (NodeId a : t.index_.skip_ancestors(v)) {
            std::pair<NodeId, NodeId> key{schema.domain_of(a), schema.domain_of(v)};
            auto [it, fresh] = slot_of.emplace(key, static_cast<int>(t.slots_.size()));
            if (fresh) {
                Slot s;
                s.upper_domain = key.first;
                s.lower_domain = key.second;
                s.identity = key.first == key.second;
                s.cardinality = cardinality[key.first];
                t.slots_.push_back(std::move(s));
            }
            t.entry_[v].push_back(it->second);
        }
    }
    // One upward walk per lower domain fills every slot ending there.
    std::map<NodeId, std::vector<int>> by_lower;
    for (size_t k = 0; k < t.slots_.size(); ++k) by_lower[t.slots_[k].lower_domain].push_back(static_cast<int>(k));
    for (const auto& [dv, slots] : by_lower) {
        std::map<NodeId, int> wanted;
        for (int k : slots) wanted[t.slots_[k].upper_domain] = k;
        Relation acc = Relation::identity(cardinality[dv]);
        NodeId u = dv;
        size_t filled = 0;
        while (filled < wanted.size()) {
            if (auto it = wanted.find(u); it != wanted.end()) {
                t.slots_[it->second].rel = std::make_unique<Relation>(acc);
                ++filled;
                if (filled == wanted.size()) break;
            }
            if (schema.has_link(u)) acc = compose(link(u), acc);
            u = schema.node(u).parent;
            if (u == kNoNode) throw Error("skip composite walk left the tree");
        }
    }
    return t;
}

SkipTree SkipTree::build(Store& store, const std::string& schema) {
    const auto& e = store.entry(schema);
    return build(e.schema, e.cardinality, [&](NodeId v) -> const Relation& { return store.link(schema, v); });
}

void SkipTree::save(const fs::path& store_dir) const {
    const fs::path dir = store_dir / schema_.name() / "_skiptree";
    fs::remove_all(dir);
    fs::create_directories(dir);
    json j;
    j["version"] = 1;
    j["schema"] = schema_.name();
    j["H"] = index_.max_height();
    j["nodes"] = json::array();
    for (NodeId v = 0; v < schema_.size(); ++v) {
        j["nodes"].push_back({{"id", v},
                              {"depth", schema_.shape().depth(v)},
                              {"height", index_.height(v)},
                              {"ancestors", index_.skip_ancestors(v)},
                              {"composites", entry_[v]}});
    }
    j["composites"] = json::array();
    for (size_t k = 0; k < slots_.size(); ++k) {
        const auto& s = slots_[k];
        json c = {{"upper", s.upper_domain}, {"lower", s.lower_domain}, {"cardinality", s.cardinality}};
        if (s.identity) {
            c["identity"] = true;
        } else {
            const Relation& r = composite_by_slot(k);
            std::string file = std::to_string(s.upper_domain) + "-" + std::to_string(s.lower_domain) + ".col";
            write_text_file(dir / file, encode_file(ColumnKind::Relation, r.upper, encode_relation(r)));
            c["file"] = file;
            c["units"] = r.units();
        }
        j["composites"].push_back(std::move(c));
    }
    write_text_file(dir / "skiptree.json", j.dump(1) + "\n");
}

bool SkipTree::exists(const fs::path& store_dir, const std::string& schema) {
    return fs::exists(store_dir / schema / "_skiptree" / "skiptree.json");
}

SkipTree SkipTree::load(const fs::path& store_dir, const Schema& schema) {
    const fs::path dir = store_dir / schema.name() / "_skiptree";
    json j;
    try {
        j = json::parse(read_text_file(dir / "skiptree.json"));
    } catch (const json::parse_error& e) {
        throw DataError(std::string("malformed skiptree.json: ") + e.what());
    }
    SkipTree t;
    t.schema_ = schema;
    t.index_ = SkipIndex(schema.shape());
    t.dir_ = dir;
    try {
        if (j.at("H").get<int>() != t.index_.max_height()) throw DataError("skip index does not match the schema");
        for (const auto& c : j.at("composites")) {
            Slot s;
            s.upper_domain = c.at("upper").get<NodeId>();
            s.lower_domain = c.at("lower").get<NodeId>();
            s.cardinality = c.at("cardinality").get<uint64_t>();
            s.identity = c.value("identity", false);
            if (!s.identity) s.file = c.at("file").get<std::string>();
            t.slots_.push_back(std::move(s));
        }
        t.entry_.assign(schema.size(), {});
        for (const auto& n : j.at("nodes")) {
            NodeId v = n.at("id").get<NodeId>();
            if (v < 0 || v >= schema.size()) throw DataError("skiptree.json node out of range");
            if (n.at("ancestors").get<std::vector<NodeId>>() != t.index_.skip_ancestors(v))
                throw DataError("skip ancestors in skiptree.json do not match the schema");
            t.entry_[v] = n.at("composites").get<std::vector<int>>();
            for (int k : t.entry_[v])
                if (k < 0 || static_cast<size_t>(k) >= t.slots_.size()) throw DataError("bad composite reference");
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed skiptree.json: ") + e.what());
    }
    return t;
}

bool SkipTree::is_identity(NodeId v, int j) const { return slots_[entry_[v][j]].identity; }

const Relation& SkipTree::composite_by_slot(size_t k) const {
    const Slot& s = slots_[k];
    std::lock_guard lock(*mu_);
    if (!s.rel) {
        if (s.identity) {
            s.rel = std::make_unique<Relation>(Relation::identity(s.cardinality));
        } else {
            if (dir_.empty()) throw Error("skip composite is not available");
            auto bytes = read_text_file(dir_ / s.file);
            auto f = decode_file(bytes, s.file);
            if (f.kind != ColumnKind::Relation) throw DataError(s.file + " is not a composite file");
            s.rel = std::make_unique<Relation>(decode_relation(f.cardinality, f.payload));
            ++files_loaded_;
            bytes_loaded_ += bytes.size();
        }
    }
    return *s.rel;
}

const Relation& SkipTree::composite(NodeId v, int j) const { return composite_by_slot(entry_[v][j]); }

}  // namespace quest
