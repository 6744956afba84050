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

#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "fixtures.hpp"
#include "quest/csv.hpp"
#include "quest/ingest.hpp"
#include "quest/store.hpp"

namespace quest {
namespace {

using nlohmann::json;

Schema person_table() {
    return table_schema("R", {{"PID", PrimitiveKind::String}, {"credit_score", PrimitiveKind::Number}});
}

TEST(Csv, QuotedFieldsAndNulls) {
    std::istringstream in("a,b,c\r\n\"x,1\",,\"\"\n\"multi\nline\",\"q\"\"q\",3\n");
    CsvReader r(in);
    CsvRow row;
    ASSERT_TRUE(r.next(row));
    ASSERT_TRUE(r.next(row));
    ASSERT_EQ(row.size(), 3u);
    EXPECT_EQ(*row[0], "x,1");
    EXPECT_FALSE(row[1].has_value());
    EXPECT_EQ(*row[2], "");
    ASSERT_TRUE(r.next(row));
    EXPECT_EQ(*row[0], "multi\nline");
    EXPECT_EQ(*row[1], "q\"q");
    EXPECT_FALSE(r.next(row));
    std::ostringstream out;
    write_csv_row(out, {std::string("a,b"), std::nullopt, std::string("")});
    EXPECT_EQ(out.str(), "\"a,b\",,\"\"\n");
}

TEST(IngestCsv, TransposesRows) {
    std::istringstream in("PID,credit_score\np1,700\np2,\n");
    SchemaData d = ingest_csv(in, person_table());
    EXPECT_EQ(d.cardinality[0], 2u);
    const auto& score = d.values.at(2);
    EXPECT_EQ(score.size(), 2u);
    EXPECT_EQ(score.number(0), 700.0);
    EXPECT_TRUE(score.is_null(1));
    EXPECT_EQ(d.values.at(1).string(1), "p2");
}

TEST(IngestCsv, EmptyTable) {
    std::istringstream in("PID,credit_score\n");
    SchemaData d = ingest_csv(in, person_table());
    EXPECT_EQ(d.cardinality[0], 0u);
    EXPECT_EQ(d.values.at(1).size(), 0u);
}

TEST(IngestCsv, ReportsBadRow) {
    std::istringstream in("PID,credit_score\np1,700\np2,high\n");
    try {
        ingest_csv(in, person_table());
        FAIL();
    } catch (const DataError& e) {
        EXPECT_NE(std::string(e.what()).find("row 2"), std::string::npos);
    }
}

TEST(IngestJson, AdvertiserCounters) {
    SchemaData d = fixtures::ad_data();
    const auto& s = d.schema;
    EXPECT_EQ(d.counters.at(*s.find("Advertiser.Campaign")).ends, (std::vector<uint64_t>{2, 3}));
    EXPECT_EQ(d.counters.at(*s.find("Advertiser.Campaign.Clicks")).ends, (std::vector<uint64_t>{1, 2, 4}));
    EXPECT_EQ(d.counters.at(*s.find("Advertiser.Campaign.Clicks.Person")).ends, (std::vector<uint64_t>{2, 4, 5, 7}));
    EXPECT_EQ(d.counters.at(*s.find("Advertiser.Campaign.WordSet.Word")).ends, (std::vector<uint64_t>{3, 5, 8}));
}

TEST(IngestJson, EmptyArrayRepeatsBoundary) {
    DocumentShredder sh(fixtures::ad_schema());
    sh.add(json::parse(R"({"Advertiser":[{"Email":"a","Campaign":[]},{"Email":"b","Campaign":[{}]}]})"));
    SchemaData d = sh.finish();
    EXPECT_EQ(d.counters.at(*d.schema.find("Advertiser.Campaign")).ends, (std::vector<uint64_t>{0, 1}));
}

TEST(IngestJson, UnknownFieldAndTypeMismatch) {
    {
        DocumentShredder sh(fixtures::ad_schema());
        EXPECT_THROW(sh.add(json::parse(R"({"Advertiser":[{"Bogus":1}]})")), DataError);
    }
    {
        DocumentShredder sh(fixtures::ad_schema());
        try {
            sh.add(json::parse(R"({"Advertiser":[{"Email":5}]})"));
            FAIL();
        } catch (const DataError& e) {
            EXPECT_NE(std::string(e.what()).find("Advertiser.Email"), std::string::npos);
        }
    }
}

GraphManifest small_graph() {
    return GraphManifest{"G", "V", {{"V", {{"id", PrimitiveKind::String}}}}, {{"e", "V", "V", {}}}};
}

TEST(IngestGraph, CsrFromEdges) {
    std::istringstream v("id\n0\n1\n2\n"), e("src,dst\n0,1\n2,1\n0,2\n");
    SchemaData d = ingest_graph(small_graph(), {{"V", &v}}, {{"e", &e}});
    EXPECT_EQ(d.counters.at(*d.schema.find("e#")).ends, (std::vector<uint64_t>{2, 2, 3}));
    EXPECT_EQ(d.indicators.at(*d.schema.find("e#.#V")).pointers, (std::vector<uint64_t>{1, 2, 1}));
}

TEST(IngestGraph, IsolatedVerticesAndDanglingEdges) {
    std::istringstream v("id\n0\n1\n2\n"), e("src,dst\n1,0\n");
    SchemaData d = ingest_graph(small_graph(), {{"V", &v}}, {{"e", &e}});
    EXPECT_EQ(d.counters.at(*d.schema.find("e#")).ends, (std::vector<uint64_t>{0, 1, 1}));
    std::istringstream v2("id\n0\n"), e2("src,dst\n0,9\n");
    EXPECT_THROW(ingest_graph(small_graph(), {{"V", &v2}}, {{"e", &e2}}), DataError);
}

TEST(Store, WriteReadRoundTrip) {
    auto dir = fixtures::temp_dir("store");
    SchemaData d = fixtures::ad_data();
    write_store(dir, {d});
    Store store(dir);
    EXPECT_EQ(store.load_all("S"), d);
    EXPECT_EQ(store.manifest().block_size, 4096u);
    EXPECT_EQ(store.manifest().meta_unit, 8u);
}

TEST(Store, CounterReadIsCounted) {
    auto dir = fixtures::temp_dir("store");
    write_store(dir, {fixtures::ad_data()});
    Store store(dir);
    NodeId campaign = *store.entry("S").schema.find("Advertiser.Campaign");
    store.counter("S", campaign);
    EXPECT_EQ(store.io().metadata_reads.load(), 1u);
    EXPECT_EQ(store.io().columns_read.load(), 0u);
}

TEST(Store, CorruptTrailerIsDetected) {
    auto dir = fixtures::temp_dir("store");
    write_store(dir, {fixtures::ad_data()});
    auto path = dir / "S" / "Advertiser.Email.col";
    std::string bytes = read_text_file(path);
    bytes.back() ^= 0x5a;
    write_text_file(path, bytes);
    Store store(dir);
    EXPECT_THROW(store.values("S", *store.entry("S").schema.find("Advertiser.Email")), DataError);
    bytes.resize(bytes.size() / 2);
    write_text_file(path, bytes);
    Store store2(dir);
    EXPECT_THROW(store2.values("S", *store2.entry("S").schema.find("Advertiser.Email")), DataError);
}

TEST(Store, DeterministicBytes) {
    auto a = fixtures::temp_dir("store"), b = fixtures::temp_dir("store");
    write_store(a, {fixtures::ad_data()});
    write_store(b, {fixtures::ad_data()});
    for (const auto& f : std::filesystem::recursive_directory_iterator(a)) {
        if (!f.is_regular_file()) continue;
        auto rel = std::filesystem::relative(f.path(), a);
        EXPECT_EQ(read_text_file(f.path()), read_text_file(b / rel)) << rel;
    }
}

TEST(Histogram, EstimatesEqualityAndRanges) {
    PrimitiveColumn c(PrimitiveKind::Number);
    for (int i = 0; i < 1000; ++i) c.append(static_cast<double>(i % 100));
    ColumnStats s = build_stats(c);
    EXPECT_NEAR(s.selectivity(CompareOp::Eq, {5.0}), 0.01, 0.005);
    EXPECT_NEAR(s.selectivity(CompareOp::Lt, {50.0}), 0.5, 0.03);
    EXPECT_NEAR(s.selectivity(CompareOp::Ge, {90.0}), 0.1, 0.03);
    EXPECT_EQ(s.selectivity(CompareOp::Eq, {500.0}), 0.0);
}

}  // namespace
}  // namespace quest
