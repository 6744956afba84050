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

#include <sstream>

#include "fixtures.hpp"
#include "quest/engine.hpp"
#include "quest/ingest.hpp"

namespace quest {
namespace {

using nlohmann::json;

std::filesystem::path ad_store(bool index = true) {
    auto dir = fixtures::temp_dir("engine");
    std::istringstream r("PID,credit_score\nP,720\nP1,500\nP4,810\nQ,600\n");
    SchemaData rd = ingest_csv(r, table_schema("R", {{"PID", PrimitiveKind::String}, {"credit_score", PrimitiveKind::Number}}));
    write_store(dir, {fixtures::ad_data(), rd});
    if (index) {
        Store s(dir);
        for (const char* n : {"S", "R"}) SkipTree::build(s, n).save(dir);
    }
    return dir;
}

std::vector<std::string> column_strings(const ResultSet& rs, size_t c = 0) {
    std::vector<std::string> out;
    for (const auto& r : rs.rows) out.push_back(format_value(r[c]));
    std::sort(out.begin(), out.end());
    return out;
}

const char* kWordPerson = R"({"from":"S","filters":[
    {"path":"Advertiser.Campaign.WordSet.Word","value":"W"},
    {"path":"Advertiser.Campaign.Clicks.Person","value":"P"}],
    "fetch":["Advertiser.Email"]})";

TEST(Engine, WordAndPersonInSameCampaign) {
    auto dir = ad_store();
    Store store(dir);
    Engine eng(store);
    Query q = parse_query(json::parse(kWordPerson));
    for (bool skip : {true, false}) {
        ResultSet rs = eng.evaluate(q, ExecOptions{skip});
        EXPECT_EQ(column_strings(rs), (std::vector<std::string>{"e1"})) << skip;
        EXPECT_EQ(rs.stats.pruning_violations, 0u);
    }
}

TEST(Engine, PlanOrdersByCumulativeSelectivity) {
    auto dir = ad_store();
    Store store(dir);
    Engine eng(store);
    QueryPlan p = eng.plan(parse_query(json::parse(kWordPerson)));
    ASSERT_EQ(p.filter_order.size(), 2u);
    EXPECT_TRUE(check_constraint(p.wandering.W, p.tree.shape()).ok);
    EXPECT_GT(p.cost.total(), 0.0);
}

TEST(Engine, ResultIndependentOfFilterOrder) {
    auto dir = ad_store();
    Store store(dir);
    Engine eng(store);
    json j = json::parse(kWordPerson);
    j["order"] = {"Advertiser.Campaign.Clicks.Person", "Advertiser.Campaign.WordSet.Word"};
    EXPECT_EQ(column_strings(eng.evaluate(parse_query(j))), (std::vector<std::string>{"e1"}));
    j["order"] = {"Advertiser.Campaign.WordSet.Word", "Advertiser.Campaign.Clicks.Person"};
    EXPECT_EQ(column_strings(eng.evaluate(parse_query(j))), (std::vector<std::string>{"e1"}));
}

TEST(Engine, OrderThatReentersASubtreeIsRejected) {
    auto dir = ad_store();
    Store store(dir);
    Engine eng(store);
    json j = json::parse(R"({"from":"S","filters":[
        {"path":"Advertiser.Campaign.WordSet.Word","value":"W"},
        {"path":"Advertiser.Email","value":"e1"},
        {"path":"Advertiser.Campaign.Clicks.Person","value":"P"}],
        "fetch":["Advertiser.Email"],
        "order":["Advertiser.Campaign.WordSet.Word","Advertiser.Email","Advertiser.Campaign.Clicks.Person"]})");
    EXPECT_THROW(eng.plan(parse_query(j)), ConstraintViolation);
}

TEST(Engine, EmptyFilterShortCircuits) {
    auto dir = ad_store();
    Store store(dir);
    Engine eng(store);
    json j = json::parse(R"({"from":"S","filters":[
        {"path":"Advertiser.Email","value":"nobody"},
        {"path":"Advertiser.Campaign.Clicks.Person","value":"P"}],
        "fetch":["Advertiser.Email"],
        "order":["Advertiser.Email","Advertiser.Campaign.Clicks.Person"]})");
    ResultSet rs = eng.evaluate(parse_query(j));
    EXPECT_TRUE(rs.rows.empty());
    EXPECT_EQ(rs.stats.columns_read, 1u);
}

TEST(Engine, FetchDeeperDomain) {
    auto dir = ad_store();
    Store store(dir);
    Engine eng(store);
    json j = json::parse(R"({"from":"S","filters":[{"path":"Advertiser.Campaign.WordSet.Word","value":"W"}],
        "fetch":["Advertiser.Email","Advertiser.Campaign.Clicks.Person"]})");
    ResultSet rs = eng.evaluate(parse_query(j));
    EXPECT_EQ(column_strings(rs, 1), (std::vector<std::string>{"P", "P1", "P2", "P3"}));
    EXPECT_EQ(column_strings(rs, 0), (std::vector<std::string>{"e1", "e1", "e1", "e1"}));
}

TEST(Engine, JoinTableIntoDocuments) {
    auto dir = ad_store();
    Store store(dir);
    Engine eng(store);
    json j = json::parse(R"({"from":["S","R"],
        "joins":[{"left":"R:PID","right":"Advertiser.Campaign.Clicks.Person"}],
        "filters":[{"path":"R:credit_score","op":">","value":700}],
        "fetch":["Advertiser.Email"]})");
    for (bool skip : {true, false}) {
        ResultSet rs = eng.evaluate(parse_query(j), ExecOptions{skip});
        // P (720) clicks campaigns of e1 and e2, P4 (810) of e2.
        EXPECT_EQ(column_strings(rs), (std::vector<std::string>{"e1", "e2"}));
        EXPECT_EQ(rs.stats.join_hash_entries, 2u);
    }
}

TEST(Engine, MissingSkipIndexNeedsFlag) {
    auto dir = ad_store(false);
    Store store(dir);
    Engine eng(store);
    Query q = parse_query(json::parse(kWordPerson));
    EXPECT_THROW(eng.evaluate(q), QueryError);
    EXPECT_EQ(column_strings(eng.evaluate(q, ExecOptions{false})), (std::vector<std::string>{"e1"}));
}

TEST(Engine, OutputFormats) {
    auto dir = ad_store();
    Store store(dir);
    Engine eng(store);
    ResultSet rs = eng.evaluate(parse_query(json::parse(kWordPerson)));
    std::ostringstream csv, nd;
    rs.write_csv(csv);
    rs.write_ndjson(nd);
    EXPECT_EQ(csv.str(), "Advertiser.Email\ne1\n");
    EXPECT_EQ(nd.str(), "{\"Advertiser.Email\":\"e1\"}\n");
    EXPECT_TRUE(rs.stats.to_json().contains("metadata_bytes"));
}

PrimitiveColumn strings(std::vector<std::string> v) {
    PrimitiveColumn c(PrimitiveKind::String);
    for (auto& s : v) c.append(Value(s));
    return c;
}

TEST(JoinIndicator, MapsRightKeysToLeftRows) {
    auto left = strings({"p1", "p2", "p3"}), right = strings({"p2", "p1"});
    JoinIndicator ji = build_join_indicator(left, right, Bitset(3, true));
    EXPECT_EQ(ji.indicator.pointers, (std::vector<uint64_t>{1, 0}));
    EXPECT_EQ(ji.miss, Bitset::from_string("00"));
    EXPECT_EQ(ji.hash_entries, 3u);
    JoinIndicator none = build_join_indicator(left, right, Bitset(3, false));
    EXPECT_EQ(none.miss, Bitset::from_string("11"));
    EXPECT_THROW(build_join_indicator(strings({"a", "a"}), right, Bitset(2, true)), DataError);
    EXPECT_NO_THROW(build_join_indicator(strings({"a", "a"}), right, Bitset::from_string("10")));
}

}  // namespace
}  // namespace quest
