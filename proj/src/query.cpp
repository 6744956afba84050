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

#include "quest/query.hpp"

#include <algorithm>
#include <unordered_map>

#include "quest/column.hpp"

namespace quest {

using nlohmann::json;

namespace {

Value json_to_value(const json& j, const std::string& where) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_boolean()) return j.get<bool>();
    throw QueryError(where + ": operand must be a number, string or boolean");
}

json value_to_json(const Value& v) {
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto s = std::get_if<std::string>(&v)) return *s;
    if (auto b = std::get_if<bool>(&v)) return *b;
    return nullptr;
}

std::vector<std::string> string_list(const json& j, const char* what) {
    std::vector<std::string> out;
    if (j.is_string()) return {j.get<std::string>()};
    if (!j.is_array()) throw QueryError(std::string("'") + what + "' must be a list of strings");
    for (const auto& e : j) {
        if (!e.is_string()) throw QueryError(std::string("'") + what + "' must be a list of strings");
        out.push_back(e.get<std::string>());
    }
    return out;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    size_t start = 0;
    while (true) {
        size_t p = s.find(sep, start);
        out.push_back(s.substr(start, p - start));
        if (p == std::string::npos) break;
        start = p + 1;
    }
    return out;
}

bool operand_fits(const Value& v, PrimitiveKind k) {
    switch (k) {
        case PrimitiveKind::Number: return std::holds_alternative<double>(v);
        case PrimitiveKind::String: return std::holds_alternative<std::string>(v);
        case PrimitiveKind::Boolean: return std::holds_alternative<bool>(v);
        case PrimitiveKind::Null: return false;
    }
    return false;
}

}  // namespace

Query parse_query(const json& doc) {
    if (!doc.is_object()) throw QueryError("query must be a JSON object");
    static const char* known[] = {"from", "filters", "fetch", "joins", "graph_paths", "order"};
    for (const auto& [k, _] : doc.items())
        if (std::find_if(std::begin(known), std::end(known), [&](const char* n) { return k == n; }) == std::end(known))
            throw QueryError("unknown query field '" + k + "'");
    Query q;
    if (!doc.contains("from")) throw QueryError("query needs 'from'");
    q.from = string_list(doc["from"], "from");
    if (q.from.empty()) throw QueryError("'from' is empty");
    if (doc.contains("filters")) {
        if (!doc["filters"].is_array()) throw QueryError("'filters' must be a list");
        for (const auto& f : doc["filters"]) {
            if (!f.is_object() || !f.contains("path") || !f["path"].is_string())
                throw QueryError("each filter needs a string 'path'");
            Predicate p;
            p.path = f["path"].get<std::string>();
            std::string op = f.value("op", std::string("="));
            try {
                p.op = compare_op_from_string(op);
            } catch (const Error&) {
                throw QueryError("filter on " + p.path + ": unknown operator '" + op + "'");
            }
            if (!f.contains("value")) throw QueryError("filter on " + p.path + " needs 'value'");
            const json& v = f["value"];
            if (p.op == CompareOp::In) {
                if (!v.is_array() || v.empty()) throw QueryError("filter on " + p.path + ": IN needs a non-empty list");
                for (const auto& e : v) p.operands.push_back(json_to_value(e, "filter on " + p.path));
            } else {
                p.operands.push_back(json_to_value(v, "filter on " + p.path));
            }
            q.filters.push_back(std::move(p));
        }
    }
    if (doc.contains("fetch")) q.fetch = string_list(doc["fetch"], "fetch");
    if (doc.contains("joins")) {
        if (!doc["joins"].is_array()) throw QueryError("'joins' must be a list");
        for (const auto& j : doc["joins"]) {
            if (!j.is_object() || !j.contains("left") || !j.contains("right") || !j["left"].is_string() ||
                !j["right"].is_string())
                throw QueryError("each join needs string 'left' and 'right'");
            q.joins.push_back({j["left"].get<std::string>(), j["right"].get<std::string>()});
        }
    }
    if (doc.contains("graph_paths")) {
        if (!doc["graph_paths"].is_array()) throw QueryError("'graph_paths' must be a list of hop lists");
        for (const auto& p : doc["graph_paths"]) {
            auto hops = string_list(p, "graph_paths");
            if (hops.empty()) throw QueryError("empty graph path");
            q.graph_paths.push_back(std::move(hops));
        }
    }
    if (doc.contains("order")) q.order = string_list(doc["order"], "order");
    if (q.filters.empty() && q.fetch.empty()) throw QueryError("query has neither filters nor fetch fields");
    return q;
}

json query_to_json(const Query& q) {
    json j;
    j["from"] = q.from;
    j["filters"] = json::array();
    for (const auto& f : q.filters) {
        json v;
        if (f.op == CompareOp::In) {
            v = json::array();
            for (const auto& o : f.operands) v.push_back(value_to_json(o));
        } else {
            v = value_to_json(f.operands.at(0));
        }
        j["filters"].push_back({{"path", f.path}, {"op", std::string(to_string(f.op))}, {"value", v}});
    }
    j["fetch"] = q.fetch;
    if (!q.joins.empty()) {
        j["joins"] = json::array();
        for (const auto& jn : q.joins) j["joins"].push_back({{"left", jn.left}, {"right", jn.right}});
    }
    if (!q.graph_paths.empty()) j["graph_paths"] = q.graph_paths;
    if (!q.order.empty()) j["order"] = q.order;
    return j;
}

QNodeId QueryTree::child_of(QNodeId parent, int segment, NodeId node, bool create) {
    auto key = std::make_pair(parent, node);
    if (auto it = child_index_.find(key); it != child_index_.end()) return it->second;
    if (!create) return -1;
    QNodeId q = static_cast<QNodeId>(nodes_.size());
    nodes_.push_back({segment, node});
    parent_.push_back(parent);
    child_index_[key] = q;
    return q;
}

QNodeId QueryTree::attach_segment(QNodeId parent, const std::string& schema, NodeId base, AttachKind kind,
                                  bool create) {
    for (const auto& s : segments_)
        if (s.parent == parent && s.attach == kind && s.schema == schema) return s.root;
    if (!create) return -1;
    Segment s;
    s.schema = schema;
    s.base = base;
    s.attach = kind;
    s.parent = parent;
    s.root = static_cast<QNodeId>(nodes_.size());
    nodes_.push_back({static_cast<int>(segments_.size()), base});
    parent_.push_back(parent);
    segments_.push_back(s);
    return s.root;
}

QNodeId QueryTree::resolve(const std::string& path, bool create) {
    std::string schema = default_schema_, rest = path;
    if (auto colon = path.find(':'); colon != std::string::npos) {
        schema = path.substr(0, colon);
        rest = path.substr(colon + 1);
    }
    auto sit = schemas_.find(schema);
    if (sit == schemas_.end()) throw QueryError("unknown schema '" + schema + "' in path " + path);
    const Schema& s = *sit->second;
    QNodeId cur = -1;
    for (const auto& seg : segments_)
        if (seg.schema == schema && seg.attach != AttachKind::Indicator) cur = seg.root;
    if (cur < 0) throw QueryError("path " + path + " refers to schema '" + schema + "', which is not joined in");
    auto parts = split(rest, '/');
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            const auto& f = s.node(nodes_[cur].node);
            if (f.kind != FieldKind::Indicator)
                throw QueryError("path " + path + ": '/' must follow an indicator field");
            cur = attach_segment(cur, schema, f.target, AttachKind::Indicator, create);
            if (cur < 0) return -1;
        }
        if (parts[i].empty()) continue;
        for (const auto& name : split(parts[i], '.')) {
            auto c = s.child(nodes_[cur].node, name);
            if (!c) throw QueryError("unknown path " + path + " (no field '" + name + "')");
            cur = child_of(cur, nodes_[cur].segment, *c, create);
            if (cur < 0) return -1;
        }
    }
    return cur;
}

std::optional<QNodeId> QueryTree::find(const std::string& path) const {
    try {
        QNodeId q = const_cast<QueryTree*>(this)->resolve(path, false);
        if (q < 0) return std::nullopt;
        return q;
    } catch (const QueryError&) {
        return std::nullopt;
    }
}

bool QueryTree::has_link(QNodeId q) const {
    if (q == 0) return false;
    if (is_segment_root(q)) return true;
    return schema_of(q).has_link(nodes_[q].node);
}

std::string QueryTree::label(QNodeId q) const {
    const Segment& seg = segments_[nodes_[q].segment];
    const Schema& s = *schemas_.at(seg.schema);
    std::string full = s.path_of(nodes_[q].node), base = s.path_of(seg.base);
    std::string rel = full.substr(std::min(full.size(), base.size() + (base.empty() ? 0 : 1)));
    if (full == base) rel.clear();
    if (seg.attach == AttachKind::Indicator) return label(seg.parent) + "/" + rel;
    return seg.schema + ":" + rel;
}

QueryTree QueryTree::build(const Query& q, const std::map<std::string, const Schema*>& schemas) {
    QueryTree t;
    t.schemas_ = schemas;
    if (q.from.empty()) throw QueryError("'from' is empty");
    for (const auto& name : q.from)
        if (!schemas.count(name)) throw QueryError("unknown schema '" + name + "'");
    t.default_schema_ = q.from[0];
    t.segments_.push_back({q.from[0], 0, AttachKind::Host, -1, 0, -1, -1});
    t.nodes_.push_back({0, 0});
    t.parent_.push_back(kNoNode);

    auto value_leaf = [&](QNodeId n, const std::string& path, const char* role) {
        const auto& f = t.field(n);
        if (!f.has_values()) throw QueryError(std::string(role) + " " + path + " is not a primitive field");
        return f.primitive;
    };

    for (size_t i = 0; i < q.joins.size(); ++i) {
        const auto& jn = q.joins[i];
        QNodeId right = t.resolve(jn.right, true);
        PrimitiveKind rk = value_leaf(right, jn.right, "join key");
        auto colon = jn.left.find(':');
        if (colon == std::string::npos) throw QueryError("join left side " + jn.left + " must name its schema");
        std::string ls = jn.left.substr(0, colon);
        if (std::find(q.from.begin(), q.from.end(), ls) == q.from.end())
            throw QueryError("join schema '" + ls + "' is not listed in 'from'");
        for (const auto& seg : t.segments_)
            if (seg.schema == ls && seg.attach != AttachKind::Indicator)
                throw QueryError("schema '" + ls + "' is joined more than once");
        QNodeId root = t.attach_segment(right, ls, 0, AttachKind::Join, true);
        Segment& seg = t.segments_[t.nodes_[root].segment];
        seg.join = static_cast<int>(i);
        QNodeId left = t.resolve(jn.left, true);
        if (t.nodes_[left].segment != t.nodes_[root].segment)
            throw QueryError("join left key " + jn.left + " must not cross an indicator");
        PrimitiveKind lk = value_leaf(left, jn.left, "join key");
        const Schema& lsch = *schemas.at(ls);
        if (lsch.domain_of(t.nodes_[left].node) != 0 || t.field(left).repeated_leaf)
            throw QueryError("join left key " + jn.left + " must be a single-valued field of the root");
        if (lk != rk) throw QueryError("join keys " + jn.left + " and " + jn.right + " have different types");
        t.segments_[t.nodes_[root].segment].join_key = left;
    }
    for (const auto& name : q.from) {
        bool found = false;
        for (const auto& seg : t.segments_) found |= seg.schema == name && seg.attach != AttachKind::Indicator;
        if (!found) throw QueryError("schema '" + name + "' is listed in 'from' but not joined");
    }
    for (const auto& f : q.filters) {
        QNodeId n = t.resolve(f.path, true);
        PrimitiveKind k = value_leaf(n, f.path, "filter");
        for (const auto& v : f.operands)
            if (!operand_fits(v, k))
                throw QueryError("filter on " + f.path + ": operand type does not match " +
                                 std::string(to_string(k)) + " field");
        t.filters_.push_back(n);
    }
    for (const auto& p : q.fetch) {
        QNodeId n = t.resolve(p, true);
        value_leaf(n, p, "fetch field");
        t.fetch_.push_back(n);
    }
    for (const auto& hops : q.graph_paths) {
        std::string first = hops[0], schema = t.default_schema_;
        if (auto colon = first.find(':'); colon != std::string::npos) {
            schema = first.substr(0, colon);
            first = first.substr(colon + 1);
        }
        std::string path = schema + ":";
        const Schema* s = schemas.count(schema) ? schemas.at(schema) : nullptr;
        if (!s) throw QueryError("unknown schema '" + schema + "' in graph path");
        NodeId cur = 0;
        for (size_t i = 0; i < hops.size(); ++i) {
            std::string hop = i == 0 ? first : hops[i];
            if (i > 0) path += s->node(cur).kind == FieldKind::Indicator ? "/" : ".";
            if (s->node(cur).kind == FieldKind::Indicator) cur = s->node(cur).target;
            auto c = s->child(cur, hop);
            if (!c) throw QueryError("graph path: no field '" + hop + "' under " + s->path_of(cur));
            cur = *c;
            path += hop;
        }
        t.path_ends_.push_back(t.resolve(path, true));
    }
    std::vector<NodeId> parents(t.parent_.begin(), t.parent_.end());
    t.shape_ = TreeShape(parents);
    t.domain_.assign(t.nodes_.size(), 0);
    for (int32_t p = 0; p < t.shape_.size(); ++p) {
        QNodeId n = t.shape_.at_preorder(p);
        bool owns = n == 0 || t.is_segment_root(n) || t.schema_of(n).owns_domain(t.nodes_[n].node);
        t.domain_[n] = owns ? n : t.domain_[t.parent_[n]];
    }
    t.fetch_chain_ = t.fetch_;
    std::sort(t.fetch_chain_.begin(), t.fetch_chain_.end());
    t.fetch_chain_.erase(std::unique(t.fetch_chain_.begin(), t.fetch_chain_.end()), t.fetch_chain_.end());
    std::stable_sort(t.fetch_chain_.begin(), t.fetch_chain_.end(),
                     [&](QNodeId a, QNodeId b) { return t.shape_.depth(t.domain_[a]) < t.shape_.depth(t.domain_[b]); });
    for (size_t i = 1; i < t.fetch_chain_.size(); ++i) {
        QNodeId hi = t.domain_[t.fetch_chain_[i - 1]], lo = t.domain_[t.fetch_chain_[i]];
        if (!t.shape_.is_ancestor_or_self(hi, lo))
            throw QueryError("fetch fields " + t.label(t.fetch_chain_[i - 1]) + " and " + t.label(t.fetch_chain_[i]) +
                             " do not lie on one path");
    }
    for (QNodeId f : t.fetch_chain_) {
        QNodeId d = t.domain_[f];
        if (t.fetch_domains_.empty() || t.fetch_domains_.back() != d) t.fetch_domains_.push_back(d);
    }
    return t;
}

JoinIndicator build_join_indicator(const PrimitiveColumn& left_keys, const PrimitiveColumn& right_keys,
                                   const Bitset& left_valid) {
    if (left_valid.size() != left_keys.size()) throw Error("join: left bitset length mismatch");
    if (left_keys.kind() != right_keys.kind()) throw QueryError("join: key types differ");
    auto key_of = [](const PrimitiveColumn& c, uint64_t i) -> std::string {
        switch (c.kind()) {
            case PrimitiveKind::Number: return format_number(c.number(i));
            case PrimitiveKind::Boolean: return c.boolean(i) ? "t" : "f";
            default: return std::string(c.string(i));
        }
    };
    std::unordered_map<std::string, uint64_t> table;
    table.reserve(left_valid.count());
    left_valid.for_each_set([&](uint64_t i) {
        if (left_keys.is_null(i)) return;
        auto [it, fresh] = table.emplace(key_of(left_keys, i), i);
        if (!fresh) throw DataError("duplicate join key '" + it->first + "' on the left side");
    });
    JoinIndicator out;
    out.hash_entries = table.size();
    out.indicator.target_cardinality = left_keys.size();
    out.indicator.pointers.assign(right_keys.size(), kNoTarget);
    out.miss = Bitset(right_keys.size());
    for (uint64_t j = 0; j < right_keys.size(); ++j) {
        auto it = right_keys.is_null(j) ? table.end() : table.find(key_of(right_keys, j));
        if (it == table.end()) out.miss.set(j);
        else out.indicator.pointers[j] = it->second;
    }
    return out;
}

}  // namespace quest
