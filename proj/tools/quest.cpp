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

#include <CLI11.hpp>

#include <sys/resource.h>

#include <algorithm>
#include <array>
#include <fstream>
#include <iostream>
#include <sstream>

#include "quest/bench.hpp"
#include "quest/engine.hpp"
#include "quest/generator.hpp"
#include "quest/oracle.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace quest;

namespace {

enum Exit { kOk = 0, kFailure = 1, kUsage = 2, kData = 3, kConstraint = 4, kTimeout = 5 };

json read_json_arg(const std::string& text) {
    try {
        if (!text.empty() && (text[0] == '{' || text[0] == '[')) return json::parse(text);
        return json::parse(read_text_file(text));
    } catch (const json::parse_error& e) {
        throw QueryError("query is not valid JSON: " + std::string(e.what()));
    }
}

std::map<std::string, MaterializedRecords> materialize_store(Store& store) {
    std::map<std::string, MaterializedRecords> out;
    for (const auto& e : store.manifest().schemas) out.emplace(e.schema.name(), materialize_records(store, e.schema.name()));
    return out;
}

void print_rows(ResultSet rs, const std::string& format, std::ostream& out) {
    rs.rows = sorted_rows(std::move(rs.rows));
    if (format == "csv") {
        rs.write_csv(out);
    } else if (format == "ndjson") {
        rs.write_ndjson(out);
    } else {
        json j = rs.to_json();
        out << j.dump(1) << "\n";
    }
}

uint64_t peak_rss_kb() {
    rusage u{};
    getrusage(RUSAGE_SELF, &u);
    return static_cast<uint64_t>(u.ru_maxrss);
}

int run_bench(const fs::path& dir, const fs::path& workload_file, int reps, double timeout, const std::string& out_prefix,
              bool calibrate) {
    json w = read_json_arg(workload_file.string());
    json report = json::array();
    std::ostringstream csv;
    csv << "query,skiptree,rows,wall_ms,peak_memory_estimate_kb,columns_read,metadata_reads,metadata_bytes,bytes_read,"
           "bitset_ops,values_decoded,pruning_violations\n";
    std::vector<std::array<double, 3>> samples;
    const uint64_t m = Store(dir).manifest().meta_unit;
    for (const auto& item : w) {
        Query q = parse_query(item.at("query"));
        const std::string name = item.value("name", "query");
        BenchPair runs = bench_pair(dir, q, reps, timeout);
        for (int mode = 0; mode < 2; ++mode) {
            const bool skip = mode == 0;
            const auto& walls = runs.walls[mode];
            const BenchSample& last = runs.last[mode];
            const bool timed_out = runs.timed_out[mode];
            const ExecStats& s = last.rs.stats;
            json entry = {{"query", name},
                          {"skiptree", skip},
                          {"timed_out", timed_out},
                          {"rows", last.rs.rows.size()},
                          {"wall_time_ms", median(walls)},
                          {"wall_samples_ms", walls},
                          {"peak_memory_estimate_kb", peak_rss_kb()},
                          {"stats", s.to_json(m)},
                          {"cost", last.cost.to_json()}};
            report.push_back(entry);
            csv << name << "," << (skip ? "on" : "off") << "," << last.rs.rows.size() << "," << median(walls) << ","
                << peak_rss_kb() << "," << s.columns_read << "," << s.metadata_reads << "," << s.metadata_bytes(m) << ","
                << s.bytes_read << "," << s.bitset_ops << "," << s.values_decoded << "," << s.pruning_violations << "\n";
            if (!timed_out && skip) samples.push_back({last.scan_units, last.bitset_units, median(walls)});
            std::cerr << name << " skiptree=" << (skip ? "on" : "off") << " " << median(walls) << " ms\n";
        }
    }
    write_text_file(out_prefix + ".json", report.dump(1) + "\n");
    write_text_file(out_prefix + ".csv", csv.str());
    if (calibrate) {
        // Least squares for wall = A * scan + B' * bitset, clamped at zero.
        double sxx = 0, sxy = 0, syy = 0, sxw = 0, syw = 0;
        for (auto [x, y, t] : samples) sxx += x * x, sxy += x * y, syy += y * y, sxw += x * t, syw += y * t;
        double det = sxx * syy - sxy * sxy, a = 0, b = 0;
        if (det > 0) {
            a = (sxw * syy - syw * sxy) / det;
            b = (syw * sxx - sxw * sxy) / det;
        }
        if (a < 0 || b < 0 || det <= 0) {
            a = sxx > 0 ? std::max(0.0, sxw / sxx) : 1;
            b = syy > 0 ? std::max(0.0, syw / syy) : 1;
            if (a > 0 && b > 0) a /= 2, b /= 2;
        }
        json cal = {{"A", a}, {"B_prime", b}, {"samples", samples.size()}};
        write_text_file(dir / "calibration.json", cal.dump(1) + "\n");
        std::cerr << "calibration: " << cal.dump() << "\n";
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quest: columnar multi-model query engine"};
    app.require_subcommand(1);
    std::string store_dir, out_dir, input_dir, query_text, format = "csv", stats_file, workload_file, bench_out = "bench";
    std::string scale = "tiny";
    uint64_t seed = 1;
    double sel_high = 0.05, sel_low = 0.10, timeout = 0, bench_timeout = 300;
    bool no_skiptree = false, oracle = false, calibrate = false;
    int reps = 5;

    auto* gen = app.add_subcommand("gen", "Generate a seeded multi-model dataset and workload");
    gen->add_option("--out", out_dir, "Output directory")->required();
    gen->add_option("--scale", scale, "tiny, small or medium")->check(CLI::IsMember({"tiny", "small", "medium"}));
    gen->add_option("--seed", seed, "Random seed");
    gen->add_option("--sel-high", sel_high, "Share of marker instances for high-selectivity predicates");
    gen->add_option("--sel-low", sel_low, "Share of marker instances for low-selectivity predicates");

    auto* ingest = app.add_subcommand("ingest", "Shred a generated or hand-written dataset into a store");
    ingest->add_option("--store", store_dir, "Store directory")->required();
    ingest->add_option("--input", input_dir, "Directory with *.schema.json / *.graph.json and data files")->required();

    auto* index = app.add_subcommand("index", "Build skip indexes for every schema of a store");
    index->add_option("--store", store_dir, "Store directory")->required();

    auto add_query_opts = [&](CLI::App* c) {
        c->add_option("--store", store_dir, "Store directory")->required();
        c->add_option("--query,-q", query_text, "Query JSON text or file")->required();
    };
    auto* query = app.add_subcommand("query", "Evaluate a query");
    add_query_opts(query);
    query->add_flag("--no-skiptree", no_skiptree, "Deliver bitsets layer by layer");
    query->add_flag("--oracle", oracle, "Evaluate with the row-oriented reference evaluator");
    query->add_option("--timeout", timeout, "Seconds before giving up (0 = none)");
    query->add_option("--format", format, "csv, ndjson or json")->check(CLI::IsMember({"csv", "ndjson", "json"}));
    query->add_option("--stats", stats_file, "Write execution counters here instead of stderr");

    auto* explain = app.add_subcommand("explain", "Print the plan without executing");
    add_query_opts(explain);

    auto* bench = app.add_subcommand("bench", "Run a workload with the skip index on and off");
    bench->add_option("--store", store_dir, "Store directory")->required();
    bench->add_option("--workload", workload_file, "Workload JSON (default: the generated workload)")->required();
    bench->add_option("--reps", reps, "Repetitions per configuration")->check(CLI::PositiveNumber);
    bench->add_option("--timeout", bench_timeout, "Per-query timeout in seconds");
    bench->add_option("--out", bench_out, "Report path prefix (.json and .csv are appended)");
    bench->add_flag("--calibrate", calibrate, "Fit the simplified cost constants and save them in the store");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kOk : kUsage;
    }

    try {
        if (*gen) {
            generate(out_dir, GenOptions{scale_from_string(scale), seed, sel_high, sel_low});
            std::cerr << "generated " << scale << " dataset in " << out_dir << "\n";
        } else if (*ingest) {
            std::vector<std::string> warnings;
            auto data = ingest_directory(input_dir, &warnings);
            for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
            write_store(store_dir, data);
            for (const auto& d : data)
                std::cerr << d.schema.name() << ": " << d.schema.size() << " nodes, " << (d.cardinality.empty() ? 0 : d.cardinality[0])
                          << " root instances\n";
        } else if (*index) {
            Store store(store_dir);
            for (const auto& e : store.manifest().schemas) {
                SkipTree t = SkipTree::build(store, e.schema.name());
                t.save(store_dir);
                std::cerr << e.schema.name() << ": skip index with " << t.index().entry_count() << " entries\n";
            }
        } else if (*query) {
            Query q = parse_query(read_json_arg(query_text));
            Store store(store_dir);
            ResultSet rs;
            if (oracle) {
                rs = oracle_evaluate(q, materialize_store(store));
            } else {
                Engine eng(store);
                rs = eng.evaluate(q, ExecOptions{!no_skiptree, timeout});
            }
            json stats = rs.stats.to_json(store.manifest().meta_unit);
            stats["rows"] = rs.rows.size();
            stats["matched"] = rs.matched;
            stats["evaluator"] = oracle ? "oracle" : no_skiptree ? "layered" : "skiptree";
            print_rows(std::move(rs), format, std::cout);
            if (stats_file.empty()) std::cerr << stats.dump() << "\n";
            else write_text_file(stats_file, stats.dump(1) + "\n");
        } else if (*explain) {
            Store store(store_dir);
            Engine eng(store);
            std::cout << eng.plan(parse_query(read_json_arg(query_text))).to_json().dump(1) << "\n";
        } else if (*bench) {
            return run_bench(store_dir, workload_file, reps, bench_timeout, bench_out, calibrate);
        }
    } catch (const Timeout& e) {
        std::cerr << "timeout: " << e.what() << "\n";
        return kTimeout;
    } catch (const ConstraintViolation& e) {
        std::cerr << "constraint violation: " << e.what() << "\n";
        return kConstraint;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    } catch (const SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return kData;
    } catch (const QueryError& e) {
        std::cerr << "query error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
    return kOk;
}
