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

#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "quest/schema.hpp"
#include "quest/store.hpp"
#include "quest/tree.hpp"

namespace quest::fixtures {

/// Advertiser document schema under a wrapper root:
/// S -> Advertiser* -> {Email, Campaign* -> {WordSet -> Word*, Clicks* -> Person*}}.
Schema ad_schema();

/// Two advertisers a1 (campaigns c1, c2) and a2 (campaign c3). Campaign
/// counter [2,3], Word counter [3,5,8], Clicks [1,2,4], Person [2,4,5,7].
/// Word "W" sits at word positions 0 and 3, Person "P" at positions 3 and 5.
std::vector<nlohmann::json> ad_documents();
SchemaData ad_data();

/// 18-node tree: 0-1-2-3, 0-4, 4-5-6-7, 7-8-9-10, 7-11-12-13-14, 4-15-16-17.
TreeShape lifted_tree();

/// Random document schema named `name` with at most `max_nodes` nodes and
/// depth at most `max_depth`. Leaves are numbers, strings or repeated values.
Schema random_document_schema(std::mt19937_64& rng, const std::string& name, int max_nodes, int max_depth);
/// Random documents shaped by `schema`; values are small so predicates hit.
std::vector<nlohmann::json> random_documents(std::mt19937_64& rng, const Schema& schema, int count);
SchemaData random_nested(std::mt19937_64& rng, int max_nodes = 24, int max_depth = 7, int docs = 6);

/// Uniform random bits of the given length.
Bitset random_bits(std::mt19937_64& rng, uint64_t n);

/// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& tag);

}  // namespace quest::fixtures
