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

#include <functional>
#include <optional>
#include <vector>

#include <json.hpp>

#include "quest/tree.hpp"

namespace quest {

/// Ordered node walk over a tree plus per-node RollUp/DrillDown run counts.
struct WanderingSequence {
    std::vector<NodeId> order;
    std::vector<NodeId> W;
    /// Indexed by node id: moves from v to its parent / from the parent into v.
    std::vector<int> rollups;
    std::vector<int> drilldowns;
};

struct ConstraintCheck {
    bool ok = true;
    /// Index into W of the first re-entry that left the subtree, and its node.
    size_t index = 0;
    NodeId node = kNoNode;
};

/// Re-visits of a node must stay inside its subtree. Throws Error when two
/// consecutive entries are neither equal nor adjacent.
ConstraintCheck check_constraint(const std::vector<NodeId>& W, const TreeShape& tree);

/// Product of the selectivities of the filters strictly before v in order.
double cumulative_selectivity(const std::vector<NodeId>& order, const std::vector<double>& sigma, NodeId v);

/// Tree paths between consecutive nodes of `order`, routed via their LCA,
/// then back up to the root when `to_root` is set.
WanderingSequence derive_wandering(const std::vector<NodeId>& order, const TreeShape& tree, bool to_root = true);

/// Selectivity-aware postorder: start at the lowest-ranked node, climb, and
/// whenever the current subtree still holds unvisited nodes descend to the
/// lowest-ranked of them. Equal ranks fall back to preorder.
std::vector<NodeId> order_nodes(const TreeShape& tree, const std::vector<NodeId>& nodes,
                                const std::function<double(NodeId)>& rank);
/// order_nodes ranked by selectivity (sigma indexed by node id).
std::vector<NodeId> order_filters(const TreeShape& tree, const std::vector<NodeId>& filters,
                                  const std::vector<double>& sigma);

struct NodeCost {
    /// Instances of the node's domain (G_v).
    double G = 0;
    /// Bytes per unit (S_v).
    double S = 8;
    double sigma = 1;
    double C_D = 1, C_F = 1, C_O = 1;
    /// A Counter or pointer array ties the node to its parent.
    bool link = false;
};

struct CostParams {
    double B = 4096;
    double m = 8;
    /// Multiplier on the bitset delivery term.
    double C_B = 1;
    /// Constants of the simplified model.
    double A = 1;
    double B_prime = 1;
    /// Indexed by node id.
    std::vector<NodeCost> nodes;
};

struct CostEstimate {
    double io_filter = 0, io_metadata = 0, io_fetch = 0;
    double cpu_deserialize = 0, cpu_bitset = 0, cpu_filter = 0, cpu_fetch = 0, cpu_regenerate = 0;
    double simplified = 0;
    double io() const { return io_filter + io_metadata + io_fetch; }
    double cpu() const { return cpu_deserialize + cpu_bitset + cpu_filter + cpu_fetch + cpu_regenerate; }
    double total() const { return io() + cpu(); }
    nlohmann::json to_json() const;
};

/// Cost of walking `w` with filters evaluated in `order` and the nodes of
/// `fetch` materialized at the end. The metadata and bitset terms run over
/// the link-bearing nodes of W.
CostEstimate estimate_cost(const WanderingSequence& w, const std::vector<NodeId>& order,
                           const std::vector<NodeId>& fetch, const TreeShape& tree, const CostParams& params);

struct ExhaustiveResult {
    uint64_t valid_orders = 0;
    /// 1 + number of valid orders strictly cheaper than the heuristic one.
    uint64_t heuristic_rank = 0;
    double heuristic_cost = 0;
    double best_cost = 0;
    std::vector<NodeId> best_order;
};

/// Enumerates every constraint-valid order of `filters` (at most 8) under the
/// simplified model and ranks `heuristic` among them.
ExhaustiveResult exhaustive_rank(const TreeShape& tree, const std::vector<NodeId>& filters,
                                 const std::vector<NodeId>& heuristic, const CostParams& params);

}  // namespace quest
