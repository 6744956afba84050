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

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "quest/bitset.hpp"
#include "quest/relation.hpp"
#include "quest/schema.hpp"
#include "quest/value.hpp"

namespace quest {

class PrimitiveColumn;

/// Paths are `[schema:]a.b.c`. A `/` after an Indicator continues inside a
/// copy of the indicator's target, e.g. `G:know#.#Person/like#.Message.id`.
struct Predicate {
    std::string path;
    CompareOp op = CompareOp::Eq;
    std::vector<Value> operands;
    /// Filled from column statistics when the query is bound to a store.
    double selectivity = 1.0;
};

struct JoinSpec {
    /// Key leaf of the attached side; it must live in its schema's root domain.
    std::string left;
    /// Key leaf of an already attached schema.
    std::string right;
};

struct Query {
    std::vector<std::string> from;
    std::vector<Predicate> filters;
    std::vector<std::string> fetch;
    std::vector<JoinSpec> joins;
    /// Hop lists; each hop is a field name and hops after an Indicator continue
    /// inside its target. The last hop must be reached by every result.
    std::vector<std::vector<std::string>> graph_paths;
    /// Optional forced filter order (paths of `filters`).
    std::vector<std::string> order;
};

/// Syntactic parse of a query document. Paths are resolved by QueryTree.
Query parse_query(const nlohmann::json& doc);
nlohmann::json query_to_json(const Query& q);

using QNodeId = int32_t;

enum class AttachKind : uint8_t { Host, Indicator, Join };

/// A copy of one schema subtree inside the query tree.
struct Segment {
    std::string schema;
    /// Schema node the segment starts at (schema root for Host and Join).
    NodeId base = kNoNode;
    AttachKind attach = AttachKind::Host;
    /// Query node the segment hangs from (Indicator leaf or right join key).
    QNodeId parent = -1;
    QNodeId root = -1;
    /// Index into Query::joins for Join segments.
    int join = -1;
    /// Left key query node for Join segments.
    QNodeId join_key = -1;
};

struct QNode {
    int segment = 0;
    NodeId node = kNoNode;
};

/// The join-expanded tree a query wanders over. It holds only the query
/// nodes on paths from the host root to referenced fields and join points.
class QueryTree {
public:
    /// Resolves every path of `q` against the schemas. Throws QueryError.
    static QueryTree build(const Query& q, const std::map<std::string, const Schema*>& schemas);

    const TreeShape& shape() const { return shape_; }
    int32_t size() const { return static_cast<int32_t>(nodes_.size()); }
    const QNode& node(QNodeId q) const { return nodes_[q]; }
    const Segment& segment(int s) const { return segments_[s]; }
    const std::vector<Segment>& segments() const { return segments_; }
    const Schema& schema_of(QNodeId q) const { return *schemas_.at(segments_[nodes_[q].segment].schema); }
    const std::string& schema_name(QNodeId q) const { return segments_[nodes_[q].segment].schema; }
    const SchemaNode& field(QNodeId q) const { return schema_of(q).node(nodes_[q].node); }
    bool is_segment_root(QNodeId q) const { return segments_[nodes_[q].segment].root == q; }
    /// A non-identity mapping ties q's domain to its parent's.
    bool has_link(QNodeId q) const;
    /// Readable name: `schema:path`, with `/` at indicator crossings.
    std::string label(QNodeId q) const;

    /// Resolved query nodes, aligned with Query::filters / fetch / graph_paths.
    const std::vector<QNodeId>& filters() const { return filters_; }
    const std::vector<QNodeId>& fetch() const { return fetch_; }
    const std::vector<QNodeId>& path_ends() const { return path_ends_; }
    /// Fetch nodes sorted by the depth of their domains, which lie on one path.
    const std::vector<QNodeId>& fetch_chain() const { return fetch_chain_; }
    /// Distinct fetch domains along the chain, shallowest first.
    const std::vector<QNodeId>& fetch_domains() const { return fetch_domains_; }
    /// Nearest ancestor-or-self query node owning an instance domain.
    QNodeId domain_of(QNodeId q) const { return domain_[q]; }
    std::optional<QNodeId> find(const std::string& path) const;

private:
    QNodeId resolve(const std::string& path, bool create);
    QNodeId child_of(QNodeId parent, int segment, NodeId node, bool create);
    QNodeId attach_segment(QNodeId parent, const std::string& schema, NodeId base, AttachKind kind, bool create);
    std::string default_schema_;

    std::map<std::string, const Schema*> schemas_;
    std::vector<QNode> nodes_;
    std::vector<QNodeId> parent_;
    std::vector<Segment> segments_;
    std::map<std::pair<QNodeId, NodeId>, QNodeId> child_index_;
    TreeShape shape_;
    std::vector<QNodeId> domain_;
    std::vector<QNodeId> filters_, fetch_, path_ends_, fetch_chain_, fetch_domains_;
};

/// Hash join on key values restricted to valid left instances. pointers[j]
/// is the left offset matching right instance j, or kNoTarget; `miss` marks
/// right instances without a valid match.
struct JoinIndicator {
    IndicatorArray indicator;
    Bitset miss;
    uint64_t hash_entries = 0;
};
JoinIndicator build_join_indicator(const PrimitiveColumn& left_keys, const PrimitiveColumn& right_keys,
                                   const Bitset& left_valid);

}  // namespace quest
