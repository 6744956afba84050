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

#include "quest/histogram.hpp"

#include <algorithm>

namespace quest {

using nlohmann::json;

namespace {

constexpr size_t kFrequentValues = 16;

bool less(const Value& a, const Value& b) { return compare_values(a, b) < 0; }

json value_to_json(const Value& v) {
    if (auto* d = std::get_if<double>(&v)) return *d;
    if (auto* s = std::get_if<std::string>(&v)) return *s;
    if (auto* b = std::get_if<bool>(&v)) return *b;
    return nullptr;
}

Value value_from_json(const json& j, PrimitiveKind kind) {
    if (j.is_null()) return std::monostate{};
    switch (kind) {
        case PrimitiveKind::Number: return j.get<double>();
        case PrimitiveKind::String: return j.get<std::string>();
        case PrimitiveKind::Boolean: return j.get<bool>();
        case PrimitiveKind::Null: break;
    }
    return std::monostate{};
}

}  // namespace

ColumnStats build_stats(const PrimitiveColumn& column, int buckets) {
    ColumnStats s;
    s.count = column.size();
    std::vector<Value> vals;
    vals.reserve(column.size());
    for (uint64_t i = 0; i < column.size(); ++i) {
        if (column.is_null(i)) ++s.nulls;
        else vals.push_back(column.get(i));
    }
    if (vals.empty()) return s;
    std::sort(vals.begin(), vals.end(), less);

    std::vector<std::pair<Value, uint64_t>> runs;
    for (size_t i = 0; i < vals.size();) {
        size_t j = i;
        while (j < vals.size() && compare_values(vals[i], vals[j]) == 0) ++j;
        runs.emplace_back(vals[i], j - i);
        i = j;
    }
    s.distinct = runs.size();
    std::stable_sort(runs.begin(), runs.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
    if (runs.size() > kFrequentValues) runs.resize(kFrequentValues);
    s.frequent = std::move(runs);

    const uint64_t n = vals.size();
    for (int k = 0; k < buckets; ++k) s.bounds.push_back(vals[std::min<uint64_t>(n - 1, k * n / buckets)]);
    s.bounds.push_back(vals.back());
    return s;
}

double ColumnStats::selectivity(CompareOp op, const std::vector<Value>& operands) const {
    if (count == 0) return 0.0;
    const double total = static_cast<double>(count);
    const double nonnull = static_cast<double>(count - nulls);
    if (bounds.empty()) return 0.0;

    auto eq = [&](const Value& v) -> double {
        if (v.index() != bounds.front().index()) return 0.0;
        if (less(v, bounds.front()) || less(bounds.back(), v)) return 0.0;
        uint64_t freq_sum = 0;
        for (const auto& [fv, c] : frequent) {
            if (compare_values(fv, v) == 0) return static_cast<double>(c) / total;
            freq_sum += c;
        }
        if (distinct <= frequent.size()) return 0.0;
        return (nonnull - static_cast<double>(freq_sum)) / static_cast<double>(distinct - frequent.size()) / total;
    };
    // Fraction of all units whose value is <= v.
    auto le = [&](const Value& v) -> double {
        if (v.index() != bounds.front().index()) return 0.0;
        if (less(v, bounds.front())) return 0.0;
        if (!less(v, bounds.back())) return nonnull / total;
        const size_t nb = bounds.size() - 1;
        size_t k = static_cast<size_t>(std::upper_bound(bounds.begin(), bounds.end(), v, less) - bounds.begin()) - 1;
        k = std::min(k, nb - 1);
        double within = 0.5;
        if (auto* x = std::get_if<double>(&v)) {
            double lo = std::get<double>(bounds[k]), hi = std::get<double>(bounds[k + 1]);
            within = hi > lo ? (*x - lo) / (hi - lo) : 1.0;
        }
        return std::clamp((static_cast<double>(k) + within) / static_cast<double>(nb), 0.0, 1.0) * nonnull / total;
    };

    double s = 0.0;
    const Value& v = operands.empty() ? bounds.front() : operands.front();
    switch (op) {
        case CompareOp::Eq: s = eq(v); break;
        case CompareOp::Ne: s = nonnull / total - eq(v); break;
        case CompareOp::Le: s = std::max(le(v), eq(v)); break;
        case CompareOp::Lt: s = le(v) - eq(v); break;
        case CompareOp::Gt: s = nonnull / total - le(v); break;
        case CompareOp::Ge: s = nonnull / total - le(v) + eq(v); break;
        case CompareOp::In:
            for (const auto& o : operands) s += eq(o);
            break;
    }
    return std::clamp(s, 0.0, 1.0);
}

json stats_to_json(const ColumnStats& s) {
    json j;
    j["count"] = s.count;
    j["nulls"] = s.nulls;
    j["distinct"] = s.distinct;
    j["bounds"] = json::array();
    for (const auto& b : s.bounds) j["bounds"].push_back(value_to_json(b));
    j["frequent"] = json::array();
    for (const auto& [v, c] : s.frequent) j["frequent"].push_back(json::array({value_to_json(v), c}));
    return j;
}

ColumnStats stats_from_json(const json& j, PrimitiveKind kind) {
    ColumnStats s;
    s.count = j.at("count").get<uint64_t>();
    s.nulls = j.at("nulls").get<uint64_t>();
    s.distinct = j.at("distinct").get<uint64_t>();
    for (const auto& b : j.at("bounds")) s.bounds.push_back(value_from_json(b, kind));
    for (const auto& f : j.at("frequent")) s.frequent.emplace_back(value_from_json(f.at(0), kind), f.at(1).get<uint64_t>());
    return s;
}

}  // namespace quest
