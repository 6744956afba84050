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
#include <vector>

#include "quest/bitset.hpp"
#include "quest/schema.hpp"
#include "quest/skiptree.hpp"

namespace quest {

/// One applied mapping during a delivery.
struct DeliveryStep {
    NodeId from = kNoNode;
    NodeId to = kNoNode;
    bool up = true;
    bool identity = false;
    /// Offsets held by the mapping (0 for identity).
    uint64_t units = 0;
};

struct DeliveryTrace {
    std::vector<DeliveryStep> steps;
    uint64_t metadata_reads() const;
    uint64_t metadata_units(bool up) const;
    void append(const DeliveryTrace& o) { steps.insert(steps.end(), o.steps.begin(), o.steps.end()); }
};

using LinkFn = std::function<const Relation&(NodeId)>;

/// Bits at v carried to its ancestor a through Skip-Tree composites.
Bitset skip_up(const Bitset& bits, const SkipTree& tree, NodeId v, NodeId a, DeliveryTrace* trace = nullptr);
/// Bits at ancestor a carried down to v through Skip-Tree composites.
Bitset skip_down(const Bitset& bits, const SkipTree& tree, NodeId a, NodeId v, DeliveryTrace* trace = nullptr);

/// Level-by-level variants: one RollUp / DrillDown per link on the path.
Bitset layer_up(const Bitset& bits, const Schema& schema, const LinkFn& link, NodeId v, NodeId a,
                DeliveryTrace* trace = nullptr);
Bitset layer_down(const Bitset& bits, const Schema& schema, const LinkFn& link, NodeId a, NodeId v,
                  DeliveryTrace* trace = nullptr);

/// One skip_up to the LCA of from and to, then one skip_down.
Bitset deliver(const Bitset& bits, const SkipTree& tree, NodeId from, NodeId to, DeliveryTrace* trace = nullptr);
Bitset deliver_layered(const Bitset& bits, const Schema& schema, const LinkFn& link, NodeId from, NodeId to,
                       DeliveryTrace* trace = nullptr);

}  // namespace quest
