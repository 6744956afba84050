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

#include "quest/generator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>

#include "quest/column.hpp"
#include "quest/ingest.hpp"

namespace quest {

namespace fs = std::filesystem;
using nlohmann::json;

Scale scale_from_string(std::string_view s) {
    if (s == "tiny") return Scale::Tiny;
    if (s == "small") return Scale::Small;
    if (s == "medium") return Scale::Medium;
    throw QueryError("unknown scale '" + std::string(s) + "' (tiny, small, medium)");
}

std::string_view to_string(Scale s) {
    switch (s) {
        case Scale::Tiny: return "tiny";
        case Scale::Small: return "small";
        case Scale::Medium: return "medium";
    }
    return "?";
}

GenCounts preset_counts(Scale s) {
    uint64_t f = s == Scale::Tiny ? 1 : s == Scale::Small ? 30 : 300;
    return {1000 * f, 50 * f, 2000 * f, 100 * f, 200 * f};
}

namespace {

class Rng {
public:
    explicit Rng(uint64_t seed) : g_(seed) {}
    uint64_t below(uint64_t n) { return n ? g_() % n : 0; }
    uint64_t between(uint64_t lo, uint64_t hi) { return lo + below(hi - lo + 1); }
    double unit() { return static_cast<double>(g_() >> 11) * 0x1.0p-53; }

private:
    std::mt19937_64 g_;
};

/// Marker stream: the i-th instance draws frac(offset + i * phi), so the
/// share of draws below any s stays within a few instances of s * n.
class Marker {
public:
    Marker(Rng& rng, const GenOptions& o) : u_(rng.unit()), hi_(o.sel_high), lo_(o.sel_low) {}
    int next() {
        u_ += 0.6180339887498949;
        u_ -= std::floor(u_);
        return u_ < hi_ ? 1 : u_ < lo_ ? 2 : 0;
    }

private:
    double u_, hi_, lo_;
};

std::string marked(Marker& m, Rng& rng, const std::string& prefix, uint64_t pool) {
    int t = m.next();
    return prefix + std::to_string(t ? t : 3 + rng.below(pool));
}

/// Tier 1 draws from [t1, top], tier 2 from [t2, t1), the rest from [bottom, t2).
uint64_t marked_number(Marker& m, Rng& rng, uint64_t bottom, uint64_t t2, uint64_t t1, uint64_t top) {
    switch (m.next()) {
        case 1: return rng.between(t1, top);
        case 2: return rng.between(t2, t1 - 1);
        default: return rng.between(bottom, t2 - 1);
    }
}

void write_json(const fs::path& p, const json& j) {
    std::ofstream out(p, std::ios::binary);
    out << j.dump(1) << "\n";
    if (!out) throw DataError("cannot write " + p.string());
}

std::ofstream open_out(const fs::path& p) {
    std::ofstream out(p, std::ios::binary);
    if (!out) throw DataError("cannot write " + p.string());
    return out;
}

json document_schema() {
    auto prim = [](const char* n, const char* t) { return json{{"name", n}, {"kind", "primitive"}, {"primitive", t}}; };
    auto rep = [](const char* n) { return json{{"name", n}, {"kind", "array"}, {"primitive", "string"}}; };
    auto node = [](const char* n, const char* kind, json kids) { return json{{"name", n}, {"kind", kind}, {"children", kids}}; };
    json variant = node("Variant", "array", {prim("Format", "string"), prim("Impressions", "number"), rep("Label")});
    json ad = node("Ad", "array", {prim("Kind", "string"), node("Creative", "record", {prim("Title", "string"), variant})});
    json campaign = node("Campaign", "array",
                         {prim("CID", "string"), prim("Budget", "number"), node("WordSet", "record", {rep("Word")}),
                          node("Clicks", "array", {prim("Day", "number"), rep("Person")}),
                          node("AdGroup", "array", {prim("GID", "string"), ad})});
    json adv = node("Advertiser", "array", {prim("AID", "string"), prim("Email", "string"), prim("Region", "string"), campaign});
    return {{"name", "S"}, {"model", "document"}, {"root", node("S", "record", {adv})}};
}

GraphManifest graph_manifest() {
    using P = PrimitiveKind;
    return {"G",
            "Person",
            {{"Person", {{"PID", P::String}, {"age", P::Number}}},
             {"Message", {{"MID", P::String}, {"length", P::Number}, {"lang", P::String}}},
             {"Forum", {{"FID", P::String}, {"title", P::String}}},
             {"Tag", {{"TID", P::String}, {"name", P::String}}}},
            {{"know", "Person", "Person", {{"since", P::Number}}},
             {"like", "Person", "Message", {}},
             {"hasTag", "Message", "Tag", {}},
             {"hasCreator", "Message", "Person", {}},
             {"member", "Person", "Forum", {}},
             {"container", "Forum", "Message", {}}}};
}

std::string pid(uint64_t i) { return "p" + std::to_string(i); }

void gen_table(const fs::path& dir, const GenCounts& c, Rng& rng, const GenOptions& o) {
    write_json(dir / "R.schema.json", {{"name", "R"},
                                       {"model", "relational"},
                                       {"columns", {{{"name", "PID"}, {"type", "string"}},
                                                    {{"name", "credit_score"}, {"type", "number"}},
                                                    {{"name", "balance"}, {"type", "number"}},
                                                    {{"name", "tier"}, {"type", "string"}}}}});
    Marker credit(rng, o), balance(rng, o), tier(rng, o);
    auto out = open_out(dir / "R.csv");
    out << "PID,credit_score,balance,tier\n";
    for (uint64_t i = 0; i < c.persons; ++i) {
        out << pid(i) << "," << marked_number(credit, rng, 300, 750, 800, 850) << ","
            << marked_number(balance, rng, 0, 80000, 90000, 99999) << "," << marked(tier, rng, "g", 8) << "\n";
    }
}

void gen_documents(const fs::path& dir, const GenCounts& c, Rng& rng, const GenOptions& o) {
    write_json(dir / "S.schema.json", document_schema());
    Marker region(rng, o), budget(rng, o), word(rng, o), format(rng, o), label(rng, o);
    auto out = open_out(dir / "S.ndjson");
    uint64_t aid = 0, cid = 0, gid = 0;
    for (uint64_t d = 0; d < c.documents; ++d) {
        json advs = json::array();
        for (uint64_t a = 0, na = rng.between(1, 3); a < na; ++a, ++aid) {
            json camps = json::array();
            for (uint64_t k = 0, nc = rng.between(1, 4); k < nc; ++k, ++cid) {
                json words = json::array();
                for (uint64_t w = 0, nw = rng.between(1, 6); w < nw; ++w) words.push_back(marked(word, rng, "w", 200));
                json clicks = json::array();
                for (uint64_t x = 0, nx = rng.below(5); x < nx; ++x) {
                    json people = json::array();
                    for (uint64_t p = 0, np = rng.between(1, 3); p < np; ++p) people.push_back(pid(rng.below(c.persons)));
                    clicks.push_back({{"Day", rng.between(1, 365)}, {"Person", people}});
                }
                json groups = json::array();
                for (uint64_t g = 0, ng = rng.between(1, 3); g < ng; ++g, ++gid) {
                    json ads = json::array();
                    for (uint64_t y = 0, ny = rng.between(1, 3); y < ny; ++y) {
                        json variants = json::array();
                        for (uint64_t v = 0, nv = rng.between(1, 2); v < nv; ++v) {
                            json labels = json::array();
                            for (uint64_t l = 0, nl = rng.between(1, 3); l < nl; ++l) labels.push_back(marked(label, rng, "l", 50));
                            variants.push_back({{"Format", marked(format, rng, "f", 10)},
                                                {"Impressions", rng.below(100000)},
                                                {"Label", labels}});
                        }
                        ads.push_back({{"Kind", rng.below(2) ? "text" : "image"},
                                       {"Creative", {{"Title", "t" + std::to_string(rng.below(1000))}, {"Variant", variants}}}});
                    }
                    groups.push_back({{"GID", "g" + std::to_string(gid)}, {"Ad", ads}});
                }
                camps.push_back({{"CID", "c" + std::to_string(cid)},
                                 {"Budget", marked_number(budget, rng, 100, 8000, 9000, 9999)},
                                 {"WordSet", {{"Word", words}}},
                                 {"Clicks", clicks},
                                 {"AdGroup", groups}});
            }
            advs.push_back({{"AID", "a" + std::to_string(aid)},
                            {"Email", "e" + std::to_string(aid) + "@ads.example"},
                            {"Region", marked(region, rng, "r", 20)},
                            {"Campaign", camps}});
        }
        out << json{{"Advertiser", advs}}.dump() << "\n";
    }
}

void gen_graph(const fs::path& dir, const GenCounts& c, Rng& rng, const GenOptions& o) {
    write_json(dir / "G.graph.json", serialize_graph_manifest(graph_manifest()));
    fs::create_directories(dir / "G");
    Marker age(rng, o), lang(rng, o), name(rng, o), since(rng, o);
    {
        auto out = open_out(dir / "G" / "Person.csv");
        out << "PID,age\n";
        for (uint64_t i = 0; i < c.persons; ++i) out << pid(i) << "," << marked_number(age, rng, 18, 80, 90, 99) << "\n";
    }
    {
        auto out = open_out(dir / "G" / "Message.csv");
        out << "MID,length,lang\n";
        for (uint64_t i = 0; i < c.messages; ++i)
            out << "m" << i << "," << rng.between(1, 2000) << "," << marked(lang, rng, "x", 12) << "\n";
    }
    {
        auto out = open_out(dir / "G" / "Forum.csv");
        out << "FID,title\n";
        for (uint64_t i = 0; i < c.forums; ++i) out << "fo" << i << ",forum " << rng.below(1000) << "\n";
    }
    {
        auto out = open_out(dir / "G" / "Tag.csv");
        out << "TID,name\n";
        for (uint64_t i = 0; i < c.tags; ++i) out << "tg" << i << "," << marked(name, rng, "t", 100) << "\n";
    }
    {
        auto out = open_out(dir / "G" / "know.edges.csv");
        out << "src,dst,since\n";
        for (uint64_t i = 0; i < c.persons; ++i)
            for (uint64_t k = 0, n = rng.below(9); k < n; ++k)
                out << pid(i) << "," << pid(rng.below(c.persons)) << "," << marked_number(since, rng, 2000, 2023, 2024, 2024)
                    << "\n";
    }
    {
        auto out = open_out(dir / "G" / "like.edges.csv");
        out << "src,dst\n";
        for (uint64_t i = 0; i < c.persons; ++i)
            for (uint64_t k = 0, n = rng.below(5); k < n; ++k) out << pid(i) << ",m" << rng.below(c.messages) << "\n";
    }
    {
        auto tags = open_out(dir / "G" / "hasTag.edges.csv");
        auto creator = open_out(dir / "G" / "hasCreator.edges.csv");
        tags << "src,dst\n";
        creator << "src,dst\n";
        for (uint64_t i = 0; i < c.messages; ++i) {
            for (uint64_t k = 0, n = rng.between(1, 2); k < n; ++k) tags << "m" << i << ",tg" << rng.below(c.tags) << "\n";
            creator << "m" << i << "," << pid(rng.below(c.persons)) << "\n";
        }
    }
    {
        auto out = open_out(dir / "G" / "member.edges.csv");
        out << "src,dst\n";
        for (uint64_t i = 0; i < c.persons; ++i)
            for (uint64_t k = 0, n = rng.below(3); k < n; ++k) out << pid(i) << ",fo" << rng.below(c.forums) << "\n";
    }
    {
        auto out = open_out(dir / "G" / "container.edges.csv");
        out << "src,dst\n";
        for (uint64_t i = 0; i < c.messages; ++i) out << "fo" << rng.below(c.forums) << ",m" << i << "\n";
    }
}

}  // namespace

void generate(const fs::path& dir, const GenOptions& opts) {
    if (!(opts.sel_high >= 0 && opts.sel_high <= opts.sel_low && opts.sel_low <= 1))
        throw QueryError("selectivities must satisfy 0 <= high <= low <= 1");
    fs::create_directories(dir);
    GenCounts c = preset_counts(opts.scale);
    Rng rng(opts.seed);
    gen_table(dir, c, rng, opts);
    gen_documents(dir, c, rng, opts);
    gen_graph(dir, c, rng, opts);
    write_json(dir / "workload.json", workload());
}

json workload() {
    auto str = [](const std::string& path, const std::string& prefix, bool high) {
        if (high) return json{{"path", path}, {"value", prefix + "1"}};
        return json{{"path", path}, {"op", "IN"}, {"value", {prefix + "1", prefix + "2"}}};
    };
    auto num = [](const std::string& path, double t1, double t2, bool high) {
        return json{{"path", path}, {"op", ">="}, {"value", high ? t1 : t2}};
    };
    const std::string word = "Advertiser.Campaign.WordSet.Word";
    const std::string variant = "Advertiser.Campaign.AdGroup.Ad.Creative.Variant";
    const std::string tag = "G:know#.#Person/like#.Message.hasTag#.Tag.name";
    const std::string click = "Advertiser.Campaign.Clicks.Person";
    auto rc = [&](bool h) { return num("R:credit_score", 800, 750, h); };
    auto rb = [&](bool h) { return num("R:balance", 90000, 80000, h); };
    auto rt = [&](bool h) { return str("R:tier", "g", h); };
    auto dw = [&](bool h) { return str(word, "w", h); };
    auto df = [&](bool h) { return str(variant + ".Format", "f", h); };
    auto dl = [&](bool h) { return str(variant + ".Label", "l", h); };
    auto gt = [&](bool h) { return str(tag, "t", h); };
    auto gs = [&](bool h) { return num("G:know#.since", 2024, 2023, h); };
    auto ga = [&](bool h) { return num("G:know#.#Person/age", 90, 80, h); };
    auto gl = [&](bool h) { return str("G:know#.#Person/like#.Message.lang", "x", h); };

    json join_r = {{"left", "R:PID"}, {"right", click}}, join_g = {{"left", "G:PID"}, {"right", click}};
    auto on_s = [&](json filters, bool r, bool g) {
        json q = {{"from", json::array({"S"})}, {"filters", filters}, {"fetch", {"Advertiser.Email"}}};
        json joins = json::array();
        if (r) q["from"].push_back("R"), joins.push_back(join_r);
        if (g) q["from"].push_back("G"), joins.push_back(join_g);
        if (!joins.empty()) q["joins"] = joins;
        return q;
    };
    auto entry = [](const char* name, int r, int d, int g, bool high, bool deep, json q) {
        return json{{"name", name}, {"R", r}, {"D", d}, {"G", g}, {"selectivity", high ? "high" : "low"},
                    {"depth", deep ? "deep" : "shallow"}, {"query", q}};
    };
    json w = json::array();
    w.push_back(entry("Q1", 2, 2, 2, true, true, on_s({rc(true), rb(true), dw(true), dl(true), gt(true), ga(true)}, true, true)));
    w.push_back(entry("Q2", 3, 1, 1, true, true, on_s({rc(true), rb(true), rt(true), dl(true), gt(true)}, true, true)));
    w.push_back(entry("Q3", 1, 3, 1, true, true, on_s({rc(true), dw(true), df(true), dl(true), gt(true)}, true, true)));
    w.push_back(entry("Q4", 1, 1, 3, true, true, on_s({rc(true), dl(true), gt(true), gs(true), ga(true)}, true, true)));
    w.push_back(entry("Q5", 2, 2, 0, true, true, on_s({rc(true), rb(true), dw(true), dl(true)}, true, false)));
    w.push_back(entry("Q6", 2, 0, 2, true, true,
                      {{"from", {"R", "G"}},
                       {"joins", {{{"left", "G:PID"}, {"right", "R:PID"}}}},
                       {"filters", {rc(true), rb(true), gt(true), ga(true)}},
                       {"fetch", {"R:PID"}}}));
    w.push_back(entry("Q7", 0, 2, 2, true, true, on_s({dw(true), dl(true), gt(true), ga(true)}, false, true)));
    w.push_back(entry("Q8", 2, 2, 2, false, true,
                      on_s({rc(false), rb(false), dw(false), dl(false), gt(false), ga(false)}, true, true)));
    w.push_back(entry("Q9", 2, 2, 2, true, false,
                      on_s({rc(true), rb(true), str("Advertiser.Region", "r", true),
                            num("Advertiser.Campaign.Budget", 9000, 8000, true), num("G:age", 90, 80, true),
                            str("G:like#.Message.lang", "x", true)},
                           true, true)));
    w.push_back(entry("Q10", 0, 3, 0, true, true, on_s({dw(true), df(true), dl(true)}, false, false)));
    w.push_back(entry("Q11", 0, 0, 3, true, true,
                      {{"from", {"G"}}, {"filters", {gt(true), gl(true), gs(true)}}, {"fetch", {"G:PID"}}}));
    return w;
}

std::vector<SchemaData> ingest_directory(const fs::path& dir, std::vector<std::string>* warnings) {
    if (!fs::is_directory(dir)) throw DataError("input directory " + dir.string() + " does not exist");
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
    std::sort(files.begin(), files.end());
    auto open_in = [](const fs::path& p) {
        auto in = std::make_unique<std::ifstream>(p, std::ios::binary);
        if (!*in) throw DataError("cannot open " + p.string());
        return in;
    };
    std::vector<SchemaData> out;
    for (const auto& p : files) {
        std::string f = p.filename().string();
        auto ends = [&](const std::string& s) { return f.size() > s.size() && f.compare(f.size() - s.size(), s.size(), s) == 0; };
        json manifest;
        if (ends(".schema.json") || ends(".graph.json")) {
            try {
                manifest = json::parse(read_text_file(p));
            } catch (const json::parse_error& e) {
                throw DataError(p.string() + ": invalid JSON: " + e.what());
            }
        }
        if (ends(".graph.json")) {
            GraphManifest g = parse_graph_manifest(manifest);
            fs::path gdir = dir / g.name;
            std::vector<std::unique_ptr<std::ifstream>> keep;
            std::map<std::string, std::istream*> vs, es;
            for (const auto& v : g.vertices)
                if (fs::exists(gdir / (v.label + ".csv"))) vs[v.label] = keep.emplace_back(open_in(gdir / (v.label + ".csv"))).get();
            for (const auto& e : g.edges)
                if (fs::exists(gdir / (e.label + ".edges.csv")))
                    es[e.label] = keep.emplace_back(open_in(gdir / (e.label + ".edges.csv"))).get();
            out.push_back(ingest_graph(g, vs, es, warnings));
        } else if (ends(".schema.json")) {
            Schema s = parse_schema(manifest);
            if (s.model() == ModelTag::Relational) {
                auto in = open_in(dir / (s.name() + ".csv"));
                out.push_back(ingest_csv(*in, s));
            } else {
                auto in = open_in(dir / (s.name() + ".ndjson"));
                out.push_back(ingest_json(*in, s));
            }
        }
    }
    if (out.empty()) throw DataError("no *.schema.json or *.graph.json files in " + dir.string());
    return out;
}

}  // namespace quest
