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
#include <limits>
#include <utility>
#include <vector>

#include "quest/bitset.hpp"

namespace quest {

constexpr uint64_t kNoTarget = std::numeric_limits<uint64_t>::max();

/// ends[i] is the exclusive end offset of parent i's children.
struct CounterArray {
    std::vector<uint64_t> ends;

    uint64_t size() const { return ends.size(); }
    uint64_t child_cardinality() const { return ends.empty() ? 0 : ends.back(); }
    friend bool operator==(const CounterArray&, const CounterArray&) = default;
};

/// pointers[j] is an offset into the target column (kNoTarget for a miss).
struct IndicatorArray {
    std::vector<uint64_t> pointers;
    uint64_t target_cardinality = 0;

    uint64_t size() const { return pointers.size(); }
    friend bool operator==(const IndicatorArray&, const IndicatorArray&) = default;
};

/// Child range [lo, hi) of parent instance i.
std::pair<uint64_t, uint64_t> counter_range(const CounterArray& c, uint64_t i);

/// Checks non-decreasing boundaries and, when given, the child cardinality.
void validate_counter(const CounterArray& c, uint64_t child_cardinality);

/// Folds a top-down chain of Counters into one Skip-Counter.
CounterArray counter_union(const std::vector<const CounterArray*>& chain);

/// Instance mapping from an upper domain to a lower one, as a set of pairs.
/// Range: upper i owns the contiguous lower range from `ends`.
/// Pointer: upper i maps to the single lower `targets[i]` (or nothing).
/// Csr: upper i maps to targets[ends[i-1] .. ends[i]).
enum class RelationKind : uint8_t { Identity = 0, Range = 1, Pointer = 2, Csr = 3 };

struct Relation {
    RelationKind kind = RelationKind::Identity;
    uint64_t upper = 0;
    uint64_t lower = 0;
    std::vector<uint64_t> ends;
    std::vector<uint64_t> targets;

    static Relation identity(uint64_t n);
    static Relation range(const CounterArray& c);
    static Relation pointer(const IndicatorArray& ind);
    static Relation csr(std::vector<uint64_t> ends, std::vector<uint64_t> targets, uint64_t lower);

    /// Number of stored offsets, the unit of metadata accounting.
    uint64_t units() const { return ends.size() + targets.size(); }
    void validate() const;
    friend bool operator==(const Relation&, const Relation&) = default;
};

/// a->b composed with b->c. Results that are Csr after fanning out through
/// an earlier Csr or range are deduplicated per upper instance.
Relation compose(const Relation& upper, const Relation& lower);

/// Condenses a chain of (vertex->edge Counter, edge->vertex Indicator)
/// hops into one reachability CSR.
Relation multi_hop(const std::vector<std::pair<const CounterArray*, const IndicatorArray*>>& hops);

/// Upper bit i = any lower bit related to i.
Bitset apply_up(const Relation& r, const Bitset& lower_bits);
/// Lower bit j = any upper bit related to j.
Bitset apply_down(const Relation& r, const Bitset& upper_bits);

Bitset roll_up(const Bitset& child_bits, const CounterArray& c);
Bitset drill_down(const Bitset& parent_bits, const CounterArray& c);
Bitset indicator_gather(const Bitset& target_bits, const IndicatorArray& ind);
Bitset indicator_scatter(const Bitset& pointer_bits, const IndicatorArray& ind, uint64_t target_cardinality);

}  // namespace quest
