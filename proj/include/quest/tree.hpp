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

#include <cstdint>
#include <vector>

namespace quest {

using NodeId = int32_t;
constexpr NodeId kNoNode = -1;

/// Preorder bounds of a node's subtree: v is in D_u iff lo <= pre(v) <= hi.
struct SubtreeInterval {
    NodeId node = kNoNode;
    int32_t lo = 0;
    int32_t hi = 0;
    bool contains_preorder(int32_t p) const { return lo <= p && p <= hi; }
};

/// Shape-only view of a rooted tree: parent links, depths and preorder
/// intervals. Shared by schemas, query trees and the planner.
class TreeShape {
public:
    TreeShape() = default;
    /// parents[root] must be kNoNode; exactly one root. Children keep the
    /// relative order in which they appear in `parents`.
    explicit TreeShape(std::vector<NodeId> parents);

    int32_t size() const { return static_cast<int32_t>(parent_.size()); }
    NodeId root() const { return root_; }
    NodeId parent(NodeId v) const { return parent_[v]; }
    int32_t depth(NodeId v) const { return depth_[v]; }
    int32_t max_depth() const { return max_depth_; }
    int32_t preorder(NodeId v) const { return pre_[v]; }
    NodeId at_preorder(int32_t p) const { return order_[p]; }
    const std::vector<NodeId>& children(NodeId v) const { return children_[v]; }
    SubtreeInterval interval(NodeId v) const { return {v, pre_[v], pre_[v] + subtree_size_[v] - 1}; }

    /// u is an ancestor of v, or u == v.
    bool is_ancestor_or_self(NodeId u, NodeId v) const {
        return pre_[u] <= pre_[v] && pre_[v] < pre_[u] + subtree_size_[u];
    }

    /// Parent-walk LCA. Used as the reference for the skip index.
    NodeId naive_lca(NodeId u, NodeId v) const;

    /// Nodes from u up to (and including) ancestor a, starting with u.
    std::vector<NodeId> path_up(NodeId u, NodeId a) const;

    /// The tree path u -> lca -> v, inclusive on both ends.
    std::vector<NodeId> path(NodeId u, NodeId v) const;

    const std::vector<NodeId>& parents() const { return parent_; }

private:
    std::vector<NodeId> parent_;
    std::vector<std::vector<NodeId>> children_;
    std::vector<int32_t> depth_;
    std::vector<int32_t> pre_;
    std::vector<NodeId> order_;
    std::vector<int32_t> subtree_size_;
    NodeId root_ = kNoNode;
    int32_t max_depth_ = 0;
};

}  // namespace quest
