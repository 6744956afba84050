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

#include "random_queries.hpp"

#include <algorithm>
#include <sstream>

#include "fixtures.hpp"
#include "quest/ingest.hpp"

namespace quest::fixtures {

using nlohmann::json;

namespace {

std::string pick_string(std::mt19937_64& rng) {
    return (rng() % 4 ? "s" : "m") + std::to_string(rng() % 6);
}

std::string maybe(std::mt19937_64& rng, std::string text) { return rng() % 10 == 0 ? "" : text; }

SchemaData random_table(std::mt19937_64& rng) {
    int rows = static_cast<int>(rng() % 8);
    std::vector<int> keys(8);
    for (int i = 0; i < 8; ++i) keys[i] = i;
    std::shuffle(keys.begin(), keys.end(), rng);
    std::ostringstream csv;
    csv << "k,a,b\n";
    for (int i = 0; i < rows; ++i)
        csv << maybe(rng, "s" + std::to_string(keys[i])) << "," << maybe(rng, std::to_string(rng() % 6)) << ","
            << maybe(rng, pick_string(rng)) << "\n";
    std::istringstream in(csv.str());
    return ingest_csv(in, table_schema("T", {{"k", PrimitiveKind::String}, {"a", PrimitiveKind::Number}, {"b", PrimitiveKind::String}}));
}

SchemaData random_graph(std::mt19937_64& rng) {
    GraphManifest g{"G",
                    "P",
                    {{"P", {{"id", PrimitiveKind::String}, {"x", PrimitiveKind::Number}}},
                     {"M", {{"id", PrimitiveKind::String}, {"y", PrimitiveKind::Number}}}},
                    {{"knows", "P", "P", {{"w", PrimitiveKind::Number}}}, {"likes", "P", "M", {}}, {"has", "M", "P", {}}}};
    int np = static_cast<int>(rng() % 8), nm = static_cast<int>(rng() % 6);
    std::ostringstream p, m, knows, likes, has;
    p << "id,x\n";
    for (int i = 0; i < np; ++i) p << "s" << i << "," << maybe(rng, std::to_string(rng() % 6)) << "\n";
    m << "id,y\n";
    for (int i = 0; i < nm; ++i) m << "m" << i << "," << maybe(rng, std::to_string(rng() % 6)) << "\n";
    knows << "src,dst,w\n";
    likes << "src,dst\n";
    has << "src,dst\n";
    auto edges = [&](std::ostringstream& out, const char* a, int na, const char* b, int nb, bool prop) {
        if (!na || !nb) return;
        int ne = static_cast<int>(rng() % 11);
        for (int i = 0; i < ne; ++i) {
            out << a << rng() % na << "," << b << rng() % nb;
            if (prop) out << "," << maybe(rng, std::to_string(rng() % 6));
            out << "\n";
        }
    };
    edges(knows, "s", np, "s", np, true);
    edges(likes, "s", np, "m", nm, false);
    edges(has, "m", nm, "s", np, false);
    std::istringstream pi(p.str()), mi(m.str()), ki(knows.str()), li(likes.str()), hi(has.str());
    return ingest_graph(g, {{"P", &pi}, {"M", &mi}}, {{"knows", &ki}, {"likes", &li}, {"has", &hi}});
}

/// A node of the query space: schema paths with indicator crossings and a
/// joined schema hung under a right key.
struct VNode {
    std::string path;
    int parent = -1;
    int domain = -1;
    const Schema* schema = nullptr;
    NodeId node = kNoNode;
    bool value = false;
    bool repeated = false;
    PrimitiveKind type = PrimitiveKind::Null;
};

class Space {
public:
    std::vector<VNode> nodes;

    int add_root(const Schema& s, const std::string& path, int parent, int crossings) {
        int r = push({path, parent, -1, &s, 0});
        expand(r, crossings);
        return r;
    }

    bool ancestor_or_self(int a, int v) const {
        for (; v >= 0; v = nodes[v].parent)
            if (v == a) return true;
        return false;
    }

    std::vector<int> values(bool strings_only = false) const {
        std::vector<int> out;
        for (size_t i = 0; i < nodes.size(); ++i)
            if (nodes[i].value && (!strings_only || nodes[i].type == PrimitiveKind::String)) out.push_back(static_cast<int>(i));
        return out;
    }

private:
    int push(VNode v) {
        const auto& f = v.schema->node(v.node);
        bool owns = v.parent < 0 || v.node == 0 || v.domain == -2 || v.schema->owns_domain(v.node) ||
                    f.kind == FieldKind::Indicator;
        int id = static_cast<int>(nodes.size());
        // Indicator leaves do not own a domain; segment roots do.
        if (f.kind == FieldKind::Indicator) owns = false;
        v.domain = owns ? id : nodes[v.parent].domain;
        v.value = f.has_values();
        v.repeated = f.repeated_leaf;
        v.type = f.primitive;
        nodes.push_back(std::move(v));
        return id;
    }

    void expand(int v, int crossings) {
        const Schema& s = *nodes[v].schema;
        const SchemaNode& f = s.node(nodes[v].node);
        if (f.kind == FieldKind::Indicator) {
            if (crossings <= 0) return;
            VNode seg{nodes[v].path + "/", v, -2, &s, f.target};
            int r = push(seg);
            expand(r, crossings - 1);
            return;
        }
        for (NodeId c : f.children) {
            std::string base = nodes[v].path;
            char last = base.empty() ? ':' : base.back();
            std::string path = base + (last == ':' || last == '/' ? "" : ".") + s.node(c).name;
            int id = push({path, v, -1, &s, c});
            expand(id, crossings);
        }
    }
};

json operand(std::mt19937_64& rng, PrimitiveKind k) {
    switch (k) {
        case PrimitiveKind::Number: return rng() % 5 ? static_cast<double>(rng() % 6) : 2.5;
        case PrimitiveKind::Boolean: return static_cast<bool>(rng() & 1);
        default: return pick_string(rng);
    }
}

}  // namespace

std::vector<SchemaData> random_multimodel(std::mt19937_64& rng) {
    std::vector<SchemaData> out;
    out.push_back(random_nested(rng, 14, 5, static_cast<int>(rng() % 6)));
    out.push_back(random_table(rng));
    out.push_back(random_graph(rng));
    return out;
}

json random_query(std::mt19937_64& rng, const std::vector<SchemaData>& schemas) {
    const SchemaData& host = schemas[rng() % schemas.size()];
    const std::string hn = host.schema.name();
    Space sp;
    sp.add_root(host.schema, "", -1, 2);
    json q;
    q["from"] = json::array({hn});
    auto right = sp.values(true);
    if (!right.empty() && rng() % 2) {
        std::vector<const SchemaData*> others;
        for (const auto& s : schemas)
            if (s.schema.name() != hn && s.schema.model() != ModelTag::Document) others.push_back(&s);
        const SchemaData& other = *others[rng() % others.size()];
        const std::string on = other.schema.name();
        int rk = right[rng() % right.size()];
        std::string left = on + (other.schema.model() == ModelTag::Relational ? ":k" : ":id");
        q["from"].push_back(on);
        q["joins"] = json::array({{{"left", left}, {"right", sp.nodes[rk].path}}});
        sp.add_root(other.schema, on + ":", rk, 1);
    }
    auto vals = sp.values();
    json filters = json::array();
    int nf = static_cast<int>(rng() % 4);
    static const char* ops[] = {"=", "!=", "<", "<=", ">", ">=", "IN"};
    for (int i = 0; i < nf; ++i) {
        const VNode& v = sp.nodes[vals[rng() % vals.size()]];
        std::string op = ops[rng() % 7];
        json f = {{"path", v.path}, {"op", op}};
        if (op == "IN") {
            json list = json::array();
            for (int k = 0, n = 1 + static_cast<int>(rng() % 3); k < n; ++k) list.push_back(operand(rng, v.type));
            f["value"] = list;
        } else {
            f["value"] = operand(rng, v.type);
        }
        filters.push_back(f);
    }
    json fetch = json::array();
    if (filters.empty() || rng() % 8) {
        int a = vals[rng() % vals.size()];
        fetch.push_back(sp.nodes[a].path);
        if (rng() % 3 == 0) {
            std::vector<int> above;
            for (int b : vals)
                if (b != a && !sp.nodes[b].repeated && sp.ancestor_or_self(sp.nodes[b].domain, a)) above.push_back(b);
            if (!above.empty()) fetch.push_back(sp.nodes[above[rng() % above.size()]].path);
        }
        if (rng() % 2) std::reverse(fetch.begin(), fetch.end());
    }
    if (!filters.empty()) q["filters"] = filters;
    if (!fetch.empty()) q["fetch"] = fetch;
    if (host.schema.model() == ModelTag::Graph && rng() % 4 == 0) {
        const Schema& s = host.schema;
        json hops = json::array();
        NodeId cur = 0;
        for (int i = 0, n = 1 + static_cast<int>(rng() % 4); i < n; ++i) {
            if (s.node(cur).kind == FieldKind::Indicator) cur = s.node(cur).target;
            std::vector<NodeId> next;
            for (NodeId c : s.node(cur).children)
                if (s.node(c).kind != FieldKind::Primitive) next.push_back(c);
            if (next.empty()) break;
            cur = next[rng() % next.size()];
            hops.push_back(s.node(cur).name);
        }
        if (!hops.empty()) q["graph_paths"] = json::array({hops});
    }
    return q;
}

}  // namespace quest::fixtures
