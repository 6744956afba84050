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

#include "fixtures.hpp"

#include <atomic>
#include <unistd.h>

#include "quest/ingest.hpp"

namespace quest::fixtures {

using nlohmann::json;

Schema ad_schema() {
    return parse_schema(json::parse(R"({
      "name": "S", "model": "document",
      "root": {"name": "S", "kind": "record", "children": [
        {"name": "Advertiser", "kind": "array", "children": [
          {"name": "Email", "kind": "primitive", "primitive": "string"},
          {"name": "Campaign", "kind": "array", "children": [
            {"name": "WordSet", "kind": "record", "children": [
              {"name": "Word", "kind": "array", "primitive": "string"}]},
            {"name": "Clicks", "kind": "array", "children": [
              {"name": "Person", "kind": "array", "primitive": "string"}]}]}]}]}
    })"));
}

std::vector<json> ad_documents() {
    return {json::parse(R"({"Advertiser": [
      {"Email": "e1", "Campaign": [
        {"WordSet": {"Word": ["W", "x", "y"]}, "Clicks": [{"Person": ["P1", "P2"]}]},
        {"WordSet": {"Word": ["W", "z"]}, "Clicks": [{"Person": ["P3", "P"]}]}]},
      {"Email": "e2", "Campaign": [
        {"WordSet": {"Word": ["a", "b", "c"]}, "Clicks": [{"Person": ["P4"]}, {"Person": ["P", "P5"]}]}]}]})")};
}

SchemaData ad_data() {
    DocumentShredder sh(ad_schema());
    for (const auto& d : ad_documents()) sh.add(d);
    return sh.finish();
}

TreeShape lifted_tree() {
    std::vector<NodeId> p(18, kNoNode);
    p[1] = 0, p[2] = 1, p[3] = 2;
    p[4] = 0;
    p[5] = 4, p[6] = 5, p[7] = 6;
    p[8] = 7, p[9] = 8, p[10] = 9;
    p[11] = 7, p[12] = 11, p[13] = 12, p[14] = 13;
    p[15] = 4, p[16] = 15, p[17] = 16;
    return TreeShape(p);
}

namespace {

json random_field(std::mt19937_64& rng, int& budget, int depth, int max_depth, const std::string& name) {
    json f = {{"name", name}};
    int roll = static_cast<int>(rng() % 10);
    bool inner = depth < max_depth && budget > 1 && roll < 6;
    if (!inner) {
        f["primitive"] = rng() % 2 ? "number" : "string";
        f["kind"] = roll >= 8 ? "array" : "primitive";
        --budget;
        return f;
    }
    f["kind"] = roll < 4 ? "array" : "record";
    --budget;
    json kids = json::array();
    int want = 1 + static_cast<int>(rng() % 3);
    for (int i = 0; i < want && budget > 0; ++i)
        kids.push_back(random_field(rng, budget, depth + 1, max_depth, name + "_" + std::to_string(i)));
    f["children"] = std::move(kids);
    return f;
}

json random_primitive(std::mt19937_64& rng, PrimitiveKind k) {
    if (rng() % 10 == 0) return nullptr;
    if (k == PrimitiveKind::Number) return static_cast<double>(rng() % 6);
    return "s" + std::to_string(rng() % 4);
}

json random_value(std::mt19937_64& rng, const Schema& s, NodeId v) {
    const auto& n = s.node(v);
    auto object = [&] {
        json o = json::object();
        for (NodeId c : n.children) o[s.node(c).name] = random_value(rng, s, c);
        return o;
    };
    switch (n.kind) {
        case FieldKind::Primitive:
            return random_primitive(rng, n.primitive);
        case FieldKind::Record:
            return object();
        case FieldKind::Array: {
            json a = json::array();
            int len = static_cast<int>(rng() % 4);
            for (int i = 0; i < len; ++i) a.push_back(n.repeated_leaf ? random_primitive(rng, n.primitive) : object());
            return a;
        }
        case FieldKind::Indicator:
            break;
    }
    return nullptr;
}

}  // namespace

Schema random_document_schema(std::mt19937_64& rng, const std::string& name, int max_nodes, int max_depth) {
    int budget = max_nodes - 1;
    json kids = json::array();
    int i = 0;
    while (budget > 0 && (kids.empty() || rng() % 3))
        kids.push_back(random_field(rng, budget, 1, max_depth, "f" + std::to_string(i++)));
    return parse_schema({{"name", name}, {"model", "document"}, {"root", {{"name", name}, {"kind", "record"}, {"children", kids}}}});
}

std::vector<json> random_documents(std::mt19937_64& rng, const Schema& schema, int count) {
    std::vector<json> out;
    for (int i = 0; i < count; ++i) out.push_back(random_value(rng, schema, 0));
    return out;
}

SchemaData random_nested(std::mt19937_64& rng, int max_nodes, int max_depth, int docs) {
    Schema s = random_document_schema(rng, "D", max_nodes, max_depth);
    DocumentShredder sh(s);
    for (const auto& d : random_documents(rng, s, docs)) sh.add(d);
    return sh.finish();
}

Bitset random_bits(std::mt19937_64& rng, uint64_t n) {
    Bitset b(n);
    for (uint64_t i = 0; i < n; ++i) b.assign(i, rng() & 1);
    return b;
}

std::filesystem::path temp_dir(const std::string& tag) {
    static std::atomic<int> seq{0};
    auto p = std::filesystem::temp_directory_path() /
             ("quest_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(seq++));
    std::filesystem::remove_all(p);
    std::filesystem::create_directories(p);
    return p;
}

}  // namespace quest::fixtures
