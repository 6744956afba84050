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

#include "fixtures.hpp"
#include "quest/schema.hpp"

namespace quest {
namespace {

using nlohmann::json;

TEST(Schema, AdvertiserTreeShape) {
    Schema s = fixtures::ad_schema();
    EXPECT_EQ(s.size(), 8);
    EXPECT_EQ(s.max_depth(), 4);
    NodeId campaign = *s.find("Advertiser.Campaign");
    auto iv = s.subtree_interval(campaign);
    for (const char* p : {"Advertiser.Campaign.WordSet", "Advertiser.Campaign.WordSet.Word", "Advertiser.Campaign.Clicks",
                          "Advertiser.Campaign.Clicks.Person"})
        EXPECT_TRUE(iv.contains_preorder(s.shape().preorder(*s.find(p)))) << p;
    EXPECT_FALSE(iv.contains_preorder(s.shape().preorder(*s.find("Advertiser.Email"))));
    EXPECT_EQ(s.subtree_interval(0).lo, 0);
    EXPECT_EQ(s.subtree_interval(0).hi, s.size() - 1);
    NodeId word = *s.find("Advertiser.Campaign.WordSet.Word");
    EXPECT_EQ(s.subtree_interval(word).lo, s.subtree_interval(word).hi);
}

TEST(Schema, DomainsFollowLinks) {
    Schema s = fixtures::ad_schema();
    NodeId adv = *s.find("Advertiser"), email = *s.find("Advertiser.Email");
    NodeId wordset = *s.find("Advertiser.Campaign.WordSet"), campaign = *s.find("Advertiser.Campaign");
    EXPECT_EQ(s.domain_of(email), adv);
    EXPECT_EQ(s.domain_of(wordset), campaign);
    EXPECT_TRUE(s.has_link(campaign));
    EXPECT_FALSE(s.has_link(wordset));
}

TEST(Schema, SingleRecordIsDepthZero) {
    Schema s = parse_schema(json::parse(R"({"name":"x","root":{"name":"x","kind":"record"}})"));
    EXPECT_EQ(s.size(), 1);
    EXPECT_EQ(s.max_depth(), 0);
}

TEST(Schema, RejectsUnresolvedIndicator) {
    auto j = json::parse(R"({"name":"x","root":{"name":"x","kind":"record","children":[
        {"name":"p","kind":"indicator","target":"nowhere"}]}})");
    EXPECT_THROW(parse_schema(j), SchemaError);
}

TEST(Schema, RejectsDuplicateSiblings) {
    auto j = json::parse(R"({"name":"x","root":{"name":"x","kind":"record","children":[
        {"name":"a","kind":"primitive","primitive":"number"},{"name":"a","kind":"primitive","primitive":"string"}]}})");
    EXPECT_THROW(parse_schema(j), SchemaError);
}

TEST(Schema, RejectsNonRecordRoot) {
    auto j = json::parse(R"({"name":"x","root":{"name":"x","kind":"array","primitive":"number"}})");
    EXPECT_THROW(parse_schema(j), SchemaError);
}

TEST(Schema, RoundTripsThroughJson) {
    Schema s = fixtures::ad_schema();
    EXPECT_EQ(parse_schema(serialize_schema(s)), s);
    GraphManifest g{"G", "Person", {{"Person", {{"PID", PrimitiveKind::String}}}, {"Message", {}}},
                    {{"know", "Person", "Person", {}}, {"like", "Person", "Message", {}}}};
    Schema gs = expand_graph_schema(g);
    EXPECT_EQ(parse_schema(serialize_schema(gs)), gs);
}

TEST(Schema, RelationalShorthand) {
    auto s = parse_schema(json::parse(
        R"({"name":"R","model":"relational","columns":[{"name":"PID","type":"string"},{"name":"credit_score","type":"number"}]})"));
    EXPECT_EQ(s.size(), 3);
    EXPECT_EQ(s.max_depth(), 1);
    EXPECT_EQ(s.model(), ModelTag::Relational);
}

TEST(GraphExpansion, SelfLoopAndRevisitBecomeIndicators) {
    GraphManifest g{"G", "Person", {{"Person", {}}, {"Message", {}}},
                    {{"know", "Person", "Person", {}}, {"like", "Person", "Message", {}}}};
    Schema s = expand_graph_schema(g);
    ASSERT_TRUE(s.find("know#.#Person"));
    const auto& know_ind = s.node(*s.find("know#.#Person"));
    EXPECT_EQ(know_ind.kind, FieldKind::Indicator);
    EXPECT_EQ(know_ind.target, 0);
    ASSERT_TRUE(s.find("like#.Message"));
    EXPECT_EQ(s.node(*s.find("like#.Message")).kind, FieldKind::Record);
    EXPECT_TRUE(s.node(*s.find("like#.Message")).linked);
}

TEST(GraphExpansion, OneRecordPerReachableLabel) {
    GraphManifest g{"G", "A", {{"A", {}}, {"B", {}}, {"C", {}}},
                    {{"ab", "A", "B", {}}, {"bc", "B", "C", {}}, {"ca", "C", "A", {}}, {"cb", "C", "B", {}}}};
    Schema s = expand_graph_schema(g);
    int records = 0, indicators = 0;
    for (const auto& n : s.nodes()) {
        records += n.kind == FieldKind::Record;
        indicators += n.kind == FieldKind::Indicator;
    }
    EXPECT_EQ(records, 3);
    EXPECT_EQ(indicators, 2);
}

TEST(GraphExpansion, SimpleEdgeNeedsNoIndicator) {
    GraphManifest g{"G", "A", {{"A", {}}, {"B", {}}}, {{"E", "A", "B", {}}}};
    Schema s = expand_graph_schema(g);
    EXPECT_EQ(s.size(), 3);
    EXPECT_EQ(s.node(1).kind, FieldKind::Array);
    EXPECT_EQ(s.node(2).kind, FieldKind::Record);
}

TEST(GraphExpansion, SingleVertexLabel) {
    GraphManifest g{"G", "A", {{"A", {}}}, {}};
    EXPECT_EQ(expand_graph_schema(g).size(), 1);
}

TEST(GraphExpansion, WarnsAboutUnreachableEdges) {
    GraphManifest g{"G", "A", {{"A", {}}, {"B", {}}, {"C", {}}}, {{"ab", "A", "B", {}}, {"ca", "C", "A", {}}}};
    std::vector<std::string> warnings;
    Schema s = expand_graph_schema(g, &warnings);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find("ca"), std::string::npos);
    EXPECT_FALSE(s.find("ca#"));
}

TEST(GraphExpansion, MissingRootFails) {
    GraphManifest g{"G", "Z", {{"A", {}}}, {}};
    EXPECT_THROW(expand_graph_schema(g), SchemaError);
}

}  // namespace
}  // namespace quest
