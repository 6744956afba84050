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

#include "quest/relation.hpp"

#include <algorithm>
#include <string>

namespace quest {

std::pair<uint64_t, uint64_t> counter_range(const CounterArray& c, uint64_t i) {
    if (i >= c.ends.size())
        throw Error("counter index " + std::to_string(i) + " out of bounds for length " + std::to_string(c.size()));
    return {i == 0 ? 0 : c.ends[i - 1], c.ends[i]};
}

void validate_counter(const CounterArray& c, uint64_t child_cardinality) {
    uint64_t prev = 0;
    for (uint64_t e : c.ends) {
        if (e < prev) throw DataError("counter boundaries must be non-decreasing");
        prev = e;
    }
    if (c.child_cardinality() != child_cardinality)
        throw DataError("counter ends at " + std::to_string(c.child_cardinality()) + " but child cardinality is " +
                        std::to_string(child_cardinality));
}

CounterArray counter_union(const std::vector<const CounterArray*>& chain) {
    if (chain.empty()) throw Error("counter_union needs at least one counter");
    CounterArray acc = *chain.front();
    for (size_t k = 1; k < chain.size(); ++k) {
        const auto& child = chain[k]->ends;
        if (acc.child_cardinality() != child.size())
            throw Error("counter_union: misaligned cardinalities (" + std::to_string(acc.child_cardinality()) +
                        " vs " + std::to_string(child.size()) + ")");
        for (auto& e : acc.ends) e = e == 0 ? 0 : child[e - 1];
    }
    return acc;
}

Relation Relation::identity(uint64_t n) {
    Relation r;
    r.kind = RelationKind::Identity;
    r.upper = r.lower = n;
    return r;
}

Relation Relation::range(const CounterArray& c) {
    Relation r;
    r.kind = RelationKind::Range;
    r.upper = c.size();
    r.lower = c.child_cardinality();
    r.ends = c.ends;
    return r;
}

Relation Relation::pointer(const IndicatorArray& ind) {
    Relation r;
    r.kind = RelationKind::Pointer;
    r.upper = ind.size();
    r.lower = ind.target_cardinality;
    r.targets = ind.pointers;
    return r;
}

Relation Relation::csr(std::vector<uint64_t> ends, std::vector<uint64_t> targets, uint64_t lower) {
    Relation r;
    r.kind = RelationKind::Csr;
    r.upper = ends.size();
    r.lower = lower;
    r.ends = std::move(ends);
    r.targets = std::move(targets);
    return r;
}

void Relation::validate() const {
    switch (kind) {
        case RelationKind::Identity:
            if (upper != lower) throw DataError("identity relation with unequal sides");
            break;
        case RelationKind::Range:
            if (ends.size() != upper) throw DataError("range relation length mismatch");
            validate_counter(CounterArray{ends}, lower);
            break;
        case RelationKind::Pointer:
            if (targets.size() != upper) throw DataError("pointer relation length mismatch");
            for (uint64_t t : targets)
                if (t != kNoTarget && t >= lower) throw DataError("indicator pointer out of range");
            break;
        case RelationKind::Csr:
            if (ends.size() != upper) throw DataError("csr relation length mismatch");
            validate_counter(CounterArray{ends}, targets.size());
            for (uint64_t t : targets)
                if (t >= lower) throw DataError("csr target out of range");
            break;
    }
}

namespace {

// Calls f(j) for every lower instance related to upper instance i.
template <typename F>
void for_each_related(const Relation& r, uint64_t i, F&& f) {
    switch (r.kind) {
        case RelationKind::Identity:
            f(i);
            break;
        case RelationKind::Range:
            for (uint64_t j = i == 0 ? 0 : r.ends[i - 1]; j < r.ends[i]; ++j) f(j);
            break;
        case RelationKind::Pointer:
            if (r.targets[i] != kNoTarget) f(r.targets[i]);
            break;
        case RelationKind::Csr:
            for (uint64_t k = i == 0 ? 0 : r.ends[i - 1]; k < r.ends[i]; ++k) f(r.targets[k]);
            break;
    }
}

Relation compose_generic(const Relation& a, const Relation& b, bool dedup) {
    std::vector<uint64_t> ends;
    std::vector<uint64_t> targets;
    ends.reserve(a.upper);
    for (uint64_t i = 0; i < a.upper; ++i) {
        size_t start = targets.size();
        for_each_related(a, i, [&](uint64_t m) { for_each_related(b, m, [&](uint64_t t) { targets.push_back(t); }); });
        if (dedup && targets.size() - start > 1) {
            std::sort(targets.begin() + static_cast<std::ptrdiff_t>(start), targets.end());
            targets.erase(std::unique(targets.begin() + static_cast<std::ptrdiff_t>(start), targets.end()),
                          targets.end());
        }
        ends.push_back(targets.size());
    }
    return Relation::csr(std::move(ends), std::move(targets), b.lower);
}

}  // namespace

Relation compose(const Relation& a, const Relation& b) {
    if (a.lower != b.upper)
        throw Error("cannot compose relations: middle cardinalities " + std::to_string(a.lower) + " and " +
                    std::to_string(b.upper) + " differ");
    using K = RelationKind;
    if (a.kind == K::Identity) return b;
    if (b.kind == K::Identity) return a;
    if (a.kind == K::Range && b.kind == K::Range) {
        CounterArray top{a.ends}, bottom{b.ends};
        return Relation::range(counter_union({&top, &bottom}));
    }
    if (a.kind == K::Pointer && b.kind == K::Pointer) {
        Relation r = a;
        r.lower = b.lower;
        for (auto& t : r.targets) t = t == kNoTarget ? kNoTarget : b.targets[t];
        return r;
    }
    // A single fan-out cannot create duplicates unless b itself repeats targets.
    bool dedup = !(a.kind == K::Pointer || (a.kind == K::Range && b.kind == K::Pointer));
    return compose_generic(a, b, dedup);
}

Relation multi_hop(const std::vector<std::pair<const CounterArray*, const IndicatorArray*>>& hops) {
    if (hops.empty()) throw Error("multi_hop needs at least one hop");
    Relation acc;
    for (size_t h = 0; h < hops.size(); ++h) {
        Relation step = compose(Relation::range(*hops[h].first), Relation::pointer(*hops[h].second));
        if (h == 0) {
            acc = std::move(step);
            continue;
        }
        if (acc.lower != step.upper)
            throw Error("multi_hop: hop " + std::to_string(h) + " has dimension " + std::to_string(step.upper) +
                        " but the previous hop reaches " + std::to_string(acc.lower) + " vertices");
        acc = compose_generic(acc, step, true);
    }
    return acc;
}

Bitset apply_up(const Relation& r, const Bitset& lower_bits) {
    if (lower_bits.size() != r.lower)
        throw Error("apply_up: bitset length " + std::to_string(lower_bits.size()) + " does not match " +
                    std::to_string(r.lower));
    switch (r.kind) {
        case RelationKind::Identity:
            return lower_bits;
        case RelationKind::Range: {
            Bitset out(r.upper);
            uint64_t lo = 0;
            for (uint64_t i = 0; i < r.upper; ++i) {
                uint64_t hi = r.ends[i];
                if (lo < hi && lower_bits.any_in(lo, hi)) out.set(i);
                lo = hi;
            }
            return out;
        }
        case RelationKind::Pointer: {
            Bitset out(r.upper);
            for (uint64_t i = 0; i < r.upper; ++i) {
                uint64_t t = r.targets[i];
                if (t != kNoTarget && lower_bits.test(t)) out.set(i);
            }
            return out;
        }
        case RelationKind::Csr: {
            Bitset out(r.upper);
            uint64_t lo = 0;
            for (uint64_t i = 0; i < r.upper; ++i) {
                uint64_t hi = r.ends[i];
                for (uint64_t k = lo; k < hi; ++k)
                    if (lower_bits.test(r.targets[k])) {
                        out.set(i);
                        break;
                    }
                lo = hi;
            }
            return out;
        }
    }
    return {};
}

Bitset apply_down(const Relation& r, const Bitset& upper_bits) {
    if (upper_bits.size() != r.upper)
        throw Error("apply_down: bitset length " + std::to_string(upper_bits.size()) + " does not match " +
                    std::to_string(r.upper));
    if (r.kind == RelationKind::Identity) return upper_bits;
    Bitset out(r.lower);
    switch (r.kind) {
        case RelationKind::Range:
            upper_bits.for_each_set([&](uint64_t i) { out.set_range(i == 0 ? 0 : r.ends[i - 1], r.ends[i]); });
            break;
        case RelationKind::Pointer:
            upper_bits.for_each_set([&](uint64_t i) {
                if (r.targets[i] != kNoTarget) out.set(r.targets[i]);
            });
            break;
        case RelationKind::Csr:
            upper_bits.for_each_set([&](uint64_t i) {
                for (uint64_t k = i == 0 ? 0 : r.ends[i - 1]; k < r.ends[i]; ++k) out.set(r.targets[k]);
            });
            break;
        case RelationKind::Identity:
            break;
    }
    return out;
}

Bitset roll_up(const Bitset& child_bits, const CounterArray& c) {
    if (child_bits.size() != c.child_cardinality())
        throw Error("roll_up: child bitset length does not match the counter's last boundary");
    return apply_up(Relation::range(c), child_bits);
}

Bitset drill_down(const Bitset& parent_bits, const CounterArray& c) {
    if (parent_bits.size() != c.size()) throw Error("drill_down: parent bitset length does not match the counter");
    return apply_down(Relation::range(c), parent_bits);
}

Bitset indicator_gather(const Bitset& target_bits, const IndicatorArray& ind) {
    Bitset out(ind.size());
    for (uint64_t j = 0; j < ind.size(); ++j) {
        uint64_t t = ind.pointers[j];
        if (t == kNoTarget) continue;
        if (t >= target_bits.size()) throw Error("indicator pointer out of range");
        if (target_bits.test(t)) out.set(j);
    }
    return out;
}

Bitset indicator_scatter(const Bitset& pointer_bits, const IndicatorArray& ind, uint64_t target_cardinality) {
    if (pointer_bits.size() != ind.size()) throw Error("indicator_scatter: bitset length does not match indicator");
    Bitset out(target_cardinality);
    pointer_bits.for_each_set([&](uint64_t j) {
        uint64_t t = ind.pointers[j];
        if (t == kNoTarget) return;
        if (t >= target_cardinality) throw Error("indicator pointer out of range");
        out.set(t);
    });
    return out;
}

}  // namespace quest
