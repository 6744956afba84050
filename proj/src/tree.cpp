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

#include "quest/tree.hpp"

#include <algorithm>

#include "quest/value.hpp"

namespace quest {

TreeShape::TreeShape(std::vector<NodeId> parents) : parent_(std::move(parents)) {
    const auto n = static_cast<NodeId>(parent_.size());
    children_.assign(n, {});
    for (NodeId v = 0; v < n; ++v) {
        if (parent_[v] == kNoNode) {
            if (root_ != kNoNode) throw Error("tree has more than one root");
            root_ = v;
        } else {
            if (parent_[v] < 0 || parent_[v] >= n) throw Error("tree parent out of range");
            children_[parent_[v]].push_back(v);
        }
    }
    if (n > 0 && root_ == kNoNode) throw Error("tree has no root");
    depth_.assign(n, 0);
    pre_.assign(n, -1);
    subtree_size_.assign(n, 1);
    order_.reserve(n);
    if (n == 0) return;

    // Iterative preorder; the second pass accumulates subtree sizes bottom-up.
    std::vector<NodeId> stack{root_};
    while (!stack.empty()) {
        NodeId v = stack.back();
        stack.pop_back();
        pre_[v] = static_cast<int32_t>(order_.size());
        order_.push_back(v);
        const auto& ch = children_[v];
        for (auto it = ch.rbegin(); it != ch.rend(); ++it) {
            depth_[*it] = depth_[v] + 1;
            stack.push_back(*it);
        }
    }
    if (static_cast<NodeId>(order_.size()) != n) throw Error("tree contains a cycle");
    for (auto it = order_.rbegin(); it != order_.rend(); ++it)
        if (parent_[*it] != kNoNode) subtree_size_[parent_[*it]] += subtree_size_[*it];
    max_depth_ = *std::max_element(depth_.begin(), depth_.end());
}

NodeId TreeShape::naive_lca(NodeId u, NodeId v) const {
    while (depth_[u] > depth_[v]) u = parent_[u];
    while (depth_[v] > depth_[u]) v = parent_[v];
    while (u != v) {
        u = parent_[u];
        v = parent_[v];
    }
    return u;
}

std::vector<NodeId> TreeShape::path_up(NodeId u, NodeId a) const {
    std::vector<NodeId> out{u};
    while (u != a) {
        u = parent_[u];
        if (u == kNoNode) throw Error("path_up target is not an ancestor");
        out.push_back(u);
    }
    return out;
}

std::vector<NodeId> TreeShape::path(NodeId u, NodeId v) const {
    NodeId l = naive_lca(u, v);
    auto up = path_up(u, l);
    auto down = path_up(v, l);
    down.pop_back();
    up.insert(up.end(), down.rbegin(), down.rend());
    return up;
}

}  // namespace quest
