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

#include "quest/optimizer.hpp"

#include <algorithm>
#include <limits>

#include "quest/value.hpp"

namespace quest {

ConstraintCheck check_constraint(const std::vector<NodeId>& W, const TreeShape& tree) {
    ConstraintCheck out;
    std::vector<long> last(tree.size(), -1);
    for (size_t k = 0; k < W.size(); ++k) {
        NodeId v = W[k];
        if (v < 0 || v >= tree.size()) throw Error("wandering node out of range");
        if (k > 0) {
            NodeId u = W[k - 1];
            if (u != v && tree.parent(u) != v && tree.parent(v) != u)
                throw Error("wandering steps " + std::to_string(u) + " -> " + std::to_string(v) + " are not adjacent");
        }
        if (last[v] >= 0) {
            for (size_t i = static_cast<size_t>(last[v]); i < k; ++i) {
                if (!tree.is_ancestor_or_self(v, W[i])) {
                    out.ok = false;
                    out.index = k;
                    out.node = v;
                    return out;
                }
            }
        }
        last[v] = static_cast<long>(k);
    }
    return out;
}

double cumulative_selectivity(const std::vector<NodeId>& order, const std::vector<double>& sigma, NodeId v) {
    double p = 1.0;
    for (NodeId u : order) {
        if (u == v) return p;
        p *= sigma.at(u);
    }
    throw Error("node " + std::to_string(v) + " is not in the filter order");
}

WanderingSequence derive_wandering(const std::vector<NodeId>& order, const TreeShape& tree, bool to_root) {
    WanderingSequence w;
    w.order = order;
    w.rollups.assign(tree.size(), 0);
    w.drilldowns.assign(tree.size(), 0);
    auto walk_to = [&](NodeId next) {
        if (w.W.empty()) {
            w.W.push_back(next);
            return;
        }
        auto path = tree.path(w.W.back(), next);
        for (size_t i = 1; i < path.size(); ++i) {
            NodeId a = path[i - 1], b = path[i];
            if (tree.parent(a) == b) ++w.rollups[a];
            else ++w.drilldowns[b];
            w.W.push_back(b);
        }
    };
    for (NodeId v : order) walk_to(v);
    if (to_root && !w.W.empty()) walk_to(tree.root());
    return w;
}

std::vector<NodeId> order_nodes(const TreeShape& tree, const std::vector<NodeId>& nodes,
                                const std::function<double(NodeId)>& rank) {
    std::vector<NodeId> out;
    if (nodes.empty()) return out;
    std::vector<bool> pending(tree.size(), false);
    size_t left = 0;
    for (NodeId v : nodes)
        if (!pending[v]) pending[v] = true, ++left;
    auto better = [&](NodeId a, NodeId b) {
        double ra = rank(a), rb = rank(b);
        if (ra != rb) return ra < rb;
        return tree.preorder(a) < tree.preorder(b);
    };
    auto best_in = [&](NodeId s) {
        NodeId best = kNoNode;
        auto iv = tree.interval(s);
        for (int32_t p = iv.lo; p <= iv.hi; ++p) {
            NodeId v = tree.at_preorder(p);
            if (pending[v] && (best == kNoNode || better(v, best))) best = v;
        }
        return best;
    };
    NodeId s = best_in(tree.root());
    while (true) {
        if (NodeId next = best_in(s); next != kNoNode) {
            s = next;
            pending[s] = false;
            out.push_back(s);
            --left;
        } else if (s == tree.root()) {
            break;
        } else {
            s = tree.parent(s);
        }
    }
    return out;
}

std::vector<NodeId> order_filters(const TreeShape& tree, const std::vector<NodeId>& filters,
                                  const std::vector<double>& sigma) {
    return order_nodes(tree, filters, [&](NodeId v) { return sigma.at(v); });
}

nlohmann::json CostEstimate::to_json() const {
    return {{"C_IO", {{"filter_scan", io_filter}, {"metadata", io_metadata}, {"fetch", io_fetch}, {"total", io()}}},
            {"C_CPU",
             {{"deserialize", cpu_deserialize},
              {"bitset", cpu_bitset},
              {"filter", cpu_filter},
              {"fetch_deserialize", cpu_fetch},
              {"regenerate", cpu_regenerate},
              {"total", cpu()}}},
            {"total", total()},
            {"simplified", simplified}};
}

CostEstimate estimate_cost(const WanderingSequence& w, const std::vector<NodeId>& order,
                           const std::vector<NodeId>& fetch, const TreeShape& tree, const CostParams& params) {
    CostEstimate c;
    if (params.nodes.size() != static_cast<size_t>(tree.size())) throw Error("cost parameters do not cover the tree");
    std::vector<double> sigma(tree.size());
    for (NodeId v = 0; v < tree.size(); ++v) sigma[v] = params.nodes[v].sigma;
    double sigma_T = 1.0;
    double scan_units = 0;
    for (NodeId v : order) {
        const auto& n = params.nodes[v];
        double s = cumulative_selectivity(order, sigma, v);
        sigma_T *= n.sigma;
        c.io_filter += n.G * s * n.S / params.B;
        c.cpu_deserialize += n.C_D * n.G * s;
        c.cpu_filter += n.C_F * n.G * s;
        scan_units += n.G * s;
    }
    double bitset_units = 0;
    std::vector<bool> seen(tree.size(), false);
    for (NodeId v : w.W) {
        if (seen[v]) continue;
        seen[v] = true;
        const auto& n = params.nodes[v];
        if (!n.link || tree.parent(v) == kNoNode) continue;
        double gp = params.nodes[tree.parent(v)].G;
        c.io_metadata += gp * w.rollups[v] * params.m / params.B;
        bitset_units += gp * w.rollups[v] + n.G * w.drilldowns[v];
    }
    c.cpu_bitset = params.C_B * bitset_units;
    for (NodeId v : fetch) {
        const auto& n = params.nodes[v];
        c.io_fetch += n.G * n.S * sigma_T / params.B;
        c.cpu_fetch += n.C_D * n.G * sigma_T;
        c.cpu_regenerate += n.C_O * n.G * sigma_T;
    }
    c.simplified = params.A * scan_units + params.B_prime * bitset_units;
    return c;
}

ExhaustiveResult exhaustive_rank(const TreeShape& tree, const std::vector<NodeId>& filters,
                                 const std::vector<NodeId>& heuristic, const CostParams& params) {
    if (filters.size() > 8) throw Error("exhaustive search is limited to 8 filters");
    ExhaustiveResult r;
    auto cost_of = [&](const std::vector<NodeId>& o) {
        return estimate_cost(derive_wandering(o, tree), o, {}, tree, params).simplified;
    };
    r.heuristic_cost = cost_of(heuristic);
    std::vector<NodeId> perm = filters;
    std::sort(perm.begin(), perm.end());
    r.best_cost = std::numeric_limits<double>::infinity();
    uint64_t cheaper = 0;
    do {
        auto w = derive_wandering(perm, tree);
        if (!check_constraint(w.W, tree).ok) continue;
        ++r.valid_orders;
        double cost = estimate_cost(w, perm, {}, tree, params).simplified;
        if (cost < r.heuristic_cost * (1 - 1e-12)) ++cheaper;
        if (cost < r.best_cost) {
            r.best_cost = cost;
            r.best_order = perm;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    r.heuristic_rank = cheaper + 1;
    return r;
}

}  // namespace quest
