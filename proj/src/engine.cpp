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

#include "quest/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <set>

#include "quest/csv.hpp"

namespace quest {

using nlohmann::json;

namespace {

json value_json(const Value& v) {
    if (auto d = std::get_if<double>(&v)) return *d;
    if (auto s = std::get_if<std::string>(&v)) return *s;
    if (auto b = std::get_if<bool>(&v)) return *b;
    return nullptr;
}

std::map<std::string, const Schema*> schema_map(const Store& store) {
    std::map<std::string, const Schema*> m;
    for (const auto& e : store.manifest().schemas) m[e.schema.name()] = &e.schema;
    return m;
}

template <typename F>
void for_each_lower(const Relation& r, uint64_t x, F&& f) {
    switch (r.kind) {
        case RelationKind::Identity: f(x); break;
        case RelationKind::Range: {
            auto [lo, hi] = counter_range(CounterArray{r.ends}, x);
            for (uint64_t y = lo; y < hi; ++y) f(y);
            break;
        }
        case RelationKind::Pointer:
            if (r.targets[x] != kNoTarget) f(r.targets[x]);
            break;
        case RelationKind::Csr:
            for (uint64_t k = x == 0 ? 0 : r.ends[x - 1]; k < r.ends[x]; ++k) f(r.targets[k]);
            break;
    }
}

}  // namespace

json ExecStats::to_json(uint64_t m) const {
    json up = json::object();
    for (const auto& [q, u] : up_units) up[std::to_string(q)] = u;
    return {{"columns_read", columns_read},
            {"values_decoded", values_decoded},
            {"value_bytes", value_bytes},
            {"blocks_touched", blocks_touched},
            {"metadata_reads", metadata_reads},
            {"metadata_units_up", metadata_units_up},
            {"metadata_units_down", metadata_units_down},
            {"metadata_bytes", metadata_bytes(m)},
            {"bitset_ops", bitset_ops},
            {"pruning_violations", pruning_violations},
            {"join_hash_entries", join_hash_entries},
            {"files_read", files_read},
            {"bytes_read", bytes_read},
            {"wall_ms", wall_ms}};
}

json QueryPlan::to_json() const {
    auto labels = [&](const std::vector<QNodeId>& v) {
        json a = json::array();
        for (QNodeId q : v) a.push_back(tree.label(q));
        return a;
    };
    json runs = json::array();
    for (QNodeId q = 0; q < tree.size(); ++q) {
        if (!wandering.rollups[q] && !wandering.drilldowns[q]) continue;
        runs.push_back({{"node", tree.label(q)}, {"rollup", wandering.rollups[q]}, {"drilldown", wandering.drilldowns[q]}});
    }
    json sel = json::object();
    for (QNodeId q : filter_order) sel[tree.label(q)] = params.nodes[q].sigma;
    return {{"O_F", labels(filter_order)},
            {"walk", labels(walk_order)},
            {"W", labels(wandering.W)},
            {"selectivity", sel},
            {"runs", runs},
            {"cost", cost.to_json()}};
}

void ResultSet::write_csv(std::ostream& out) const {
    std::vector<std::optional<std::string>> cells(columns.begin(), columns.end());
    write_csv_row(out, cells);
    for (const auto& r : rows) {
        cells.clear();
        for (const auto& v : r) cells.push_back(is_null(v) ? std::nullopt : std::optional<std::string>(format_value(v)));
        write_csv_row(out, cells);
    }
}

void ResultSet::write_ndjson(std::ostream& out) const {
    for (const auto& r : rows) {
        json o = json::object();
        for (size_t i = 0; i < columns.size(); ++i) o[columns[i]] = value_json(r[i]);
        out << o.dump() << "\n";
    }
}

json ResultSet::to_json() const {
    json rs = json::array();
    for (const auto& r : rows) {
        json a = json::array();
        for (const auto& v : r) a.push_back(value_json(v));
        rs.push_back(std::move(a));
    }
    return {{"columns", columns}, {"rows", rs}, {"matched", matched}};
}

void load_calibration(const std::filesystem::path& store_dir, CostParams& params) {
    auto p = store_dir / "calibration.json";
    if (!std::filesystem::exists(p)) return;
    try {
        json j = json::parse(read_text_file(p));
        params.A = j.at("A").get<double>();
        params.B_prime = j.at("B_prime").get<double>();
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed calibration.json: ") + e.what());
    }
}

const SkipTree& Engine::skiptree(const std::string& schema) {
    if (auto it = trees_.find(schema); it != trees_.end()) return *it->second;
    if (!SkipTree::exists(store_.dir(), schema))
        throw QueryError("schema '" + schema + "' has no skip index; run `quest index` or pass --no-skiptree");
    auto t = std::make_unique<SkipTree>(SkipTree::load(store_.dir(), store_.entry(schema).schema));
    return *trees_.emplace(schema, std::move(t)).first->second;
}

QueryPlan Engine::plan(const Query& q) const {
    QueryPlan p;
    p.tree = QueryTree::build(q, schema_map(store_));
    const QueryTree& t = p.tree;
    const int n = t.size();
    std::vector<double> sigma(n, 1.0);
    for (size_t i = 0; i < q.filters.size(); ++i) {
        QNodeId f = t.filters()[i];
        p.predicates[f].push_back(&q.filters[i]);
        const auto& e = store_.entry(t.schema_name(f));
        if (auto it = e.stats.find(t.node(f).node); it != e.stats.end())
            sigma[f] *= it->second.selectivity(q.filters[i].op, q.filters[i].operands);
    }
    std::vector<QNodeId> F;
    for (const auto& [f, _] : p.predicates) F.push_back(f);
    if (!q.order.empty()) {
        for (const auto& path : q.order) {
            auto f = t.find(path);
            if (!f || !p.predicates.count(*f)) throw QueryError("order entry " + path + " is not a filter field");
            if (std::find(p.filter_order.begin(), p.filter_order.end(), *f) != p.filter_order.end())
                throw QueryError("order lists " + path + " twice");
            p.filter_order.push_back(*f);
        }
        if (p.filter_order.size() != F.size()) throw QueryError("order must list every filter field");
        auto w = derive_wandering(p.filter_order, t.shape());
        auto c = check_constraint(w.W, t.shape());
        if (!c.ok)
            throw ConstraintViolation("filter order re-enters the subtree of " + t.label(c.node) + " at step " +
                                      std::to_string(c.index));
    } else {
        p.filter_order = order_filters(t.shape(), F, sigma);
    }
    std::vector<double> rank(n, -1);
    for (size_t i = 0; i < p.filter_order.size(); ++i) rank[p.filter_order[i]] = static_cast<double>(i);
    std::vector<QNodeId> nodes = p.filter_order;
    auto add_pseudo = [&](QNodeId v) {
        if (rank[v] < 0) rank[v] = static_cast<double>(F.size() + 1), nodes.push_back(v);
    };
    for (QNodeId v : t.fetch()) add_pseudo(v);
    for (QNodeId v : t.path_ends()) add_pseudo(v);
    for (const auto& s : t.segments())
        if (s.attach == AttachKind::Join) add_pseudo(s.root);
    for (QNodeId v = 0; v < n; ++v)
        if (t.shape().children(v).empty()) add_pseudo(v);
    p.walk_order = order_nodes(t.shape(), nodes, [&](QNodeId v) { return rank[v]; });
    std::vector<QNodeId> real;
    for (QNodeId v : p.walk_order)
        if (p.predicates.count(v)) real.push_back(v);
    if (real != p.filter_order) throw ConstraintViolation("filter order cannot be extended to a valid wandering");
    p.wandering = derive_wandering(p.walk_order, t.shape(), true);

    p.params.B = static_cast<double>(store_.manifest().block_size);
    p.params.m = static_cast<double>(store_.manifest().meta_unit);
    load_calibration(store_.dir(), p.params);
    p.params.nodes.resize(n);
    for (QNodeId v = 0; v < n; ++v) {
        const auto& e = store_.entry(t.schema_name(v));
        NodeId sn = t.node(v).node;
        auto& nc = p.params.nodes[v];
        nc.G = static_cast<double>(e.cardinality[e.schema.domain_of(sn)]);
        if (auto it = e.unit_size.find(sn); it != e.unit_size.end()) nc.S = it->second;
        nc.sigma = sigma[v];
        nc.link = t.has_link(v);
    }
    p.cost = estimate_cost(p.wandering, p.filter_order, t.fetch(), t.shape(), p.params);
    return p;
}

namespace {

class Run {
public:
    Run(Engine& eng, const QueryPlan& plan, const ExecOptions& opts)
        : eng_(eng), store_(eng.store()), plan_(plan), t_(plan.tree), skip_(opts.use_skiptree),
          qindex_(plan.tree.shape()) {
        for (QNodeId q = 0; q < t_.size(); ++q) qnode_[{t_.node(q).segment, t_.node(q).node}] = q;
    }

    uint64_t card(QNodeId q) const {
        const auto& e = store_.entry(t_.schema_name(q));
        return e.cardinality[e.schema.domain_of(t_.node(q).node)];
    }

    /// Saved bitsets are keyed by domain; fields sharing a domain share one.
    void checkpoint(QNodeId q, Bitset& bits) {
        q = t_.domain_of(q);
        if (auto it = saved_.find(q); it != saved_.end()) {
            bits &= it->second;
            ++st_.bitset_ops;
            it->second = bits;
        } else {
            saved_.emplace(q, bits);
        }
    }

    const Relation& attach(QNodeId root) {
        if (auto it = attach_.find(root); it != attach_.end()) return it->second;
        const Segment& seg = t_.segment(t_.node(root).segment);
        Relation r;
        if (seg.attach == AttachKind::Indicator) {
            r = Relation::pointer(store_.indicator(seg.schema, t_.node(seg.parent).node));
        } else {
            Bitset valid = saved_.count(root) ? saved_.at(root) : Bitset(card(root), true);
            const auto& left = store_.values(seg.schema, t_.node(seg.join_key).node);
            const auto& right = store_.values(t_.schema_name(seg.parent), t_.node(seg.parent).node);
            touch_column(seg.join_key);
            touch_column(seg.parent);
            JoinIndicator ji = build_join_indicator(left, right, valid);
            st_.join_hash_entries += ji.hash_entries;
            r = Relation::pointer(ji.indicator);
        }
        return attach_.emplace(root, std::move(r)).first->second;
    }

    void note(const Relation& r, QNodeId lower, bool up) {
        ++st_.bitset_ops;
        if (r.kind == RelationKind::Identity) return;
        ++st_.metadata_reads;
        (up ? st_.metadata_units_up : st_.metadata_units_down) += r.units();
        if (up) st_.up_units[lower] += r.units();
    }

    void account(const DeliveryTrace& tr, int segment) {
        for (const auto& s : tr.steps) {
            ++st_.bitset_ops;
            if (s.identity) continue;
            ++st_.metadata_reads;
            (s.up ? st_.metadata_units_up : st_.metadata_units_down) += s.units;
            if (s.up) st_.up_units[qnode_.at({segment, s.from})] += s.units;
        }
    }

    LinkFn link_fn(const std::string& schema) {
        return [this, schema](NodeId v) -> const Relation& { return store_.link(schema, v); };
    }

    Bitset seg_up(const Bitset& bits, QNodeId a, QNodeId b) {
        if (a == b) return bits;
        const std::string& schema = t_.schema_name(a);
        DeliveryTrace tr;
        Bitset out = skip_ ? skip_up(bits, eng_.skiptree(schema), t_.node(a).node, t_.node(b).node, &tr)
                           : layer_up(bits, t_.schema_of(a), link_fn(schema), t_.node(a).node, t_.node(b).node, &tr);
        account(tr, t_.node(a).segment);
        return out;
    }

    Bitset seg_down(const Bitset& bits, QNodeId a, QNodeId b) {
        if (a == b) return bits;
        const std::string& schema = t_.schema_name(a);
        DeliveryTrace tr;
        Bitset out = skip_ ? skip_down(bits, eng_.skiptree(schema), t_.node(a).node, t_.node(b).node, &tr)
                           : layer_down(bits, t_.schema_of(a), link_fn(schema), t_.node(a).node, t_.node(b).node, &tr);
        account(tr, t_.node(a).segment);
        return out;
    }

    /// Carries bits from one query node to another via their LCA, stopping
    /// at segment borders and at nodes holding a saved bitset.
    Bitset deliver(Bitset bits, QNodeId from, QNodeId to) {
        if (from == to) return bits;
        const TreeShape& sh = t_.shape();
        QNodeId l = qindex_.find_lca(from, to).lca;
        QNodeId cur = from;
        auto up = sh.path_up(from, l);
        for (size_t i = 1; i < up.size(); ++i) {
            QNodeId a = up[i - 1], b = up[i];
            if (t_.is_segment_root(a)) {
                bits = seg_up(bits, cur, a);
                if (cur != a) checkpoint(a, bits);
                const Relation& r = attach(a);
                bits = apply_up(r, bits);
                note(r, a, true);
                cur = b;
                checkpoint(b, bits);
            } else if (b == l || saved_.count(b)) {
                bits = seg_up(bits, cur, b);
                cur = b;
                checkpoint(b, bits);
            }
        }
        auto down = sh.path_up(to, l);
        std::reverse(down.begin(), down.end());
        for (size_t i = 1; i < down.size(); ++i) {
            QNodeId a = down[i - 1], b = down[i];
            if (t_.is_segment_root(b)) {
                bits = seg_down(bits, cur, a);
                if (cur != a) checkpoint(a, bits);
                const Relation& r = attach(b);
                bits = apply_down(r, bits);
                note(r, b, false);
                cur = b;
                checkpoint(b, bits);
            } else if (b == to || saved_.count(b)) {
                bits = seg_down(bits, cur, b);
                cur = b;
                checkpoint(b, bits);
            }
        }
        return bits;
    }

    void touch_column(QNodeId q) { columns_.insert({t_.schema_name(q), t_.node(q).node}); }

    /// Pruned scan: only set positions are decoded.
    void filter(QNodeId q, Bitset& bits) {
        const auto& preds = plan_.predicates.at(q);
        const PrimitiveColumn& col = store_.values(t_.schema_name(q), t_.node(q).node);
        touch_column(q);
        if (col.size() != bits.size()) throw DataError("column length does not match its domain at " + t_.label(q));
        const double S = plan_.params.nodes[q].S, B = plan_.params.B;
        const Bitset before = bits;
        uint64_t last_block = UINT64_MAX;
        bits.for_each_set([&](uint64_t i) {
            if (!before.test(i)) ++st_.pruning_violations;
            ++st_.values_decoded;
            uint64_t block = static_cast<uint64_t>(std::floor(static_cast<double>(i) * S / B));
            if (block != last_block) ++st_.blocks_touched, last_block = block;
            Value v = col.get(i);
            value_bytes_ += S;
            for (const Predicate* p : preds) {
                if (!value_matches(v, p->op, p->operands)) {
                    bits.reset(i);
                    break;
                }
            }
        });
        ++st_.bitset_ops;
    }

    void check_deadline() {
        if (deadline_ && std::chrono::steady_clock::now() > *deadline_) throw Timeout("query exceeded its time limit");
    }

    ResultSet run(const Query& q, const ExecOptions& opts) {
        if (opts.timeout_s > 0)
            deadline_ = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(opts.timeout_s));
        ResultSet rs;
        rs.columns = q.fetch;
        bool empty = false;
        QNodeId cur = -1;
        Bitset bits;
        for (QNodeId v : plan_.walk_order) {
            check_deadline();
            if (cur < 0) {
                bits = Bitset(card(v), true);
                checkpoint(v, bits);
            } else {
                bits = deliver(std::move(bits), cur, v);
            }
            cur = v;
            if (plan_.predicates.count(v)) {
                filter(v, bits);
                saved_[t_.domain_of(v)] = bits;
            }
            if (bits.none()) {
                empty = true;
                break;
            }
        }
        if (!empty) {
            bits = deliver(std::move(bits), cur, 0);
            checkpoint(0, bits);
            rs.matched = bits.count();
            empty = bits.none();
        }
        if (!empty && !t_.fetch_chain().empty()) regenerate(bits, rs);
        st_.columns_read = columns_.size();
        st_.value_bytes = static_cast<uint64_t>(std::llround(value_bytes_));
        rs.stats = st_;
        return rs;
    }

    /// Mapping from the parent of q to q, one link at a time.
    const Relation& step_relation(QNodeId q) {
        if (t_.is_segment_root(q)) return attach(q);
        if (!t_.schema_of(q).has_link(t_.node(q).node)) {
            auto it = identity_.find(q);
            if (it == identity_.end()) it = identity_.emplace(q, Relation::identity(card(q))).first;
            return it->second;
        }
        return store_.link(t_.schema_name(q), t_.node(q).node);
    }

    void regenerate(const Bitset& root_bits, ResultSet& rs) {
        const auto& doms = t_.fetch_domains();
        const TreeShape& sh = t_.shape();
        // Path from the first fetch domain down to the deepest one, with
        // exact per-node bitsets along it.
        std::vector<QNodeId> path = sh.path_up(doms.back(), doms.front());
        std::reverse(path.begin(), path.end());
        std::map<QNodeId, Bitset> state;
        state[path[0]] = deliver(root_bits, 0, path[0]);
        bool dedupe = false;
        for (size_t i = 1; i < path.size(); ++i) {
            const Relation& r = step_relation(path[i]);
            Bitset b = apply_down(r, state[path[i - 1]]);
            note(r, path[i], false);
            if (auto it = saved_.find(path[i]); it != saved_.end()) b &= it->second;
            dedupe |= r.kind == RelationKind::Pointer || r.kind == RelationKind::Csr;
            state[path[i]] = std::move(b);
        }
        std::vector<size_t> dom_index;
        for (QNodeId d : doms) dom_index.push_back(std::find(path.begin(), path.end(), d) - path.begin());
        std::vector<const PrimitiveColumn*> cols;
        std::vector<size_t> col_dom;
        for (QNodeId f : t_.fetch()) {
            cols.push_back(&store_.values(t_.schema_name(f), t_.node(f).node));
            touch_column(f);
            col_dom.push_back(std::find(doms.begin(), doms.end(), t_.domain_of(f)) - doms.begin());
        }
        std::set<std::vector<uint64_t>> seen;
        std::vector<uint64_t> inst(path.size());
        std::vector<uint64_t> tuple(doms.size());
        auto emit = [&]() {
            for (size_t k = 0; k < doms.size(); ++k) tuple[k] = inst[dom_index[k]];
            if (dedupe && !seen.insert(tuple).second) return;
            std::vector<Value> row;
            for (size_t c = 0; c < cols.size(); ++c) {
                uint64_t x = tuple[col_dom[c]];
                if (!state.at(doms[col_dom[c]]).test(x)) ++st_.pruning_violations;
                ++st_.values_decoded;
                value_bytes_ += plan_.params.nodes[t_.fetch()[c]].S;
                row.push_back(cols[c]->get(x));
            }
            rs.rows.push_back(std::move(row));
        };
        std::function<void(size_t)> walk = [&](size_t i) {
            if (i + 1 == path.size()) return emit();
            const Relation& r = step_relation(path[i + 1]);
            const Bitset& next = state.at(path[i + 1]);
            for_each_lower(r, inst[i], [&](uint64_t y) {
                if (!next.test(y)) return;
                inst[i + 1] = y;
                walk(i + 1);
            });
        };
        state.at(path[0]).for_each_set([&](uint64_t x) {
            inst[0] = x;
            walk(0);
        });
    }

private:
    Engine& eng_;
    Store& store_;
    const QueryPlan& plan_;
    const QueryTree& t_;
    bool skip_;
    SkipIndex qindex_;
    std::map<std::pair<int, NodeId>, QNodeId> qnode_;
    std::map<QNodeId, Bitset> saved_;
    std::map<QNodeId, Relation> attach_;
    std::map<QNodeId, Relation> identity_;
    std::set<std::pair<std::string, NodeId>> columns_;
    std::optional<std::chrono::steady_clock::time_point> deadline_;
    ExecStats st_;
    double value_bytes_ = 0;
};

}  // namespace

ResultSet Engine::evaluate(const Query& q, const ExecOptions& opts) { return evaluate(q, plan(q), opts); }

ResultSet Engine::evaluate(const Query& q, const QueryPlan& plan, const ExecOptions& opts) {
    auto t0 = std::chrono::steady_clock::now();
    uint64_t files0 = store_.io().columns_read + store_.io().metadata_reads, bytes0 = store_.io().bytes_read;
    uint64_t tree_bytes0 = 0, tree_files0 = 0;
    for (const auto& [_, t] : trees_) tree_bytes0 += t->bytes_loaded(), tree_files0 += t->files_loaded();
    Run run(*this, plan, opts);
    ResultSet rs = run.run(q, opts);
    uint64_t tree_bytes = 0, tree_files = 0;
    for (const auto& [_, t] : trees_) tree_bytes += t->bytes_loaded(), tree_files += t->files_loaded();
    rs.stats.files_read = store_.io().columns_read + store_.io().metadata_reads - files0 + tree_files - tree_files0;
    rs.stats.bytes_read = store_.io().bytes_read - bytes0 + tree_bytes - tree_bytes0;
    rs.stats.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return rs;
}

}  // namespace quest
