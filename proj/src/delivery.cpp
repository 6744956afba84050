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

#include "quest/delivery.hpp"

namespace quest {

uint64_t DeliveryTrace::metadata_reads() const {
    uint64_t n = 0;
    for (const auto& s : steps) n += !s.identity;
    return n;
}

uint64_t DeliveryTrace::metadata_units(bool up) const {
    uint64_t n = 0;
    for (const auto& s : steps)
        if (s.up == up) n += s.units;
    return n;
}

namespace {

void record(DeliveryTrace* trace, NodeId from, NodeId to, bool up, const Relation& r) {
    if (!trace) return;
    bool id = r.kind == RelationKind::Identity;
    trace->steps.push_back({from, to, up, id, id ? 0 : r.units()});
}

void check_ancestor(const TreeShape& shape, NodeId a, NodeId v) {
    if (a < 0 || v < 0 || a >= shape.size() || v >= shape.size()) throw Error("delivery node out of range");
    if (!shape.is_ancestor_or_self(a, v)) throw Error("delivery target is not an ancestor");
}

}  // namespace

Bitset skip_up(const Bitset& bits, const SkipTree& tree, NodeId v, NodeId a, DeliveryTrace* trace) {
    const auto& idx = tree.index();
    check_ancestor(idx.shape(), a, v);
    Bitset cur = bits;
    for (auto [u, j] : idx.climb(v, a)) {
        NodeId up = idx.skip_ancestors(u)[j];
        if (tree.is_identity(u, j)) {
            if (trace) trace->steps.push_back({u, up, true, true, 0});
            continue;
        }
        const Relation& r = tree.composite(u, j);
        cur = apply_up(r, cur);
        record(trace, u, up, true, r);
    }
    return cur;
}

Bitset skip_down(const Bitset& bits, const SkipTree& tree, NodeId a, NodeId v, DeliveryTrace* trace) {
    const auto& idx = tree.index();
    check_ancestor(idx.shape(), a, v);
    auto hops = idx.climb(v, a);
    Bitset cur = bits;
    for (auto it = hops.rbegin(); it != hops.rend(); ++it) {
        auto [u, j] = *it;
        NodeId up = idx.skip_ancestors(u)[j];
        if (tree.is_identity(u, j)) {
            if (trace) trace->steps.push_back({up, u, false, true, 0});
            continue;
        }
        const Relation& r = tree.composite(u, j);
        cur = apply_down(r, cur);
        record(trace, up, u, false, r);
    }
    return cur;
}

Bitset layer_up(const Bitset& bits, const Schema& schema, const LinkFn& link, NodeId v, NodeId a,
                DeliveryTrace* trace) {
    check_ancestor(schema.shape(), a, v);
    Bitset cur = bits;
    for (NodeId u = v; u != a; u = schema.node(u).parent) {
        if (!schema.has_link(u)) continue;
        const Relation& r = link(u);
        cur = apply_up(r, cur);
        record(trace, u, schema.node(u).parent, true, r);
    }
    return cur;
}

Bitset layer_down(const Bitset& bits, const Schema& schema, const LinkFn& link, NodeId a, NodeId v,
                  DeliveryTrace* trace) {
    check_ancestor(schema.shape(), a, v);
    std::vector<NodeId> path = schema.shape().path_up(v, a);
    Bitset cur = bits;
    // path runs v .. a; walk it top-down, skipping a itself.
    for (size_t i = path.size() - 1; i-- > 0;) {
        NodeId u = path[i];
        if (!schema.has_link(u)) continue;
        const Relation& r = link(u);
        cur = apply_down(r, cur);
        record(trace, schema.node(u).parent, u, false, r);
    }
    return cur;
}

Bitset deliver(const Bitset& bits, const SkipTree& tree, NodeId from, NodeId to, DeliveryTrace* trace) {
    NodeId lca = tree.index().find_lca(from, to).lca;
    return skip_down(skip_up(bits, tree, from, lca, trace), tree, lca, to, trace);
}

Bitset deliver_layered(const Bitset& bits, const Schema& schema, const LinkFn& link, NodeId from, NodeId to,
                       DeliveryTrace* trace) {
    NodeId lca = schema.shape().naive_lca(from, to);
    return layer_down(layer_up(bits, schema, link, from, lca, trace), schema, link, lca, to, trace);
}

}  // namespace quest
