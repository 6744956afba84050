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


#include "quest/bench.hpp"

#include <algorithm>

namespace quest {

BenchSample bench_once(const std::filesystem::path& store_dir, const Query& q, bool skiptree, double timeout_s) {
    Store store(store_dir);
    Engine eng(store);
    QueryPlan plan = eng.plan(q);
    BenchSample r;
    r.cost = plan.cost;
    CostParams p = plan.params;
    p.A = 1, p.B_prime = 0;
    r.scan_units = estimate_cost(plan.wandering, plan.filter_order, plan.tree.fetch(), plan.tree.shape(), p).simplified;
    p.A = 0, p.B_prime = 1;
    r.bitset_units = estimate_cost(plan.wandering, plan.filter_order, plan.tree.fetch(), plan.tree.shape(), p).simplified;
    r.rs = eng.evaluate(q, plan, ExecOptions{skiptree, timeout_s});
    return r;
}

BenchPair bench_pair(const std::filesystem::path& store_dir, const Query& q, int reps, double timeout_s) {
    BenchPair out;
    for (int i = 0; i < reps; ++i) {
        for (int k = 0; k < 2; ++k) {
            const int mode = (i + k) % 2;
            if (out.timed_out[mode]) continue;
            try {
                out.last[mode] = bench_once(store_dir, q, mode == 0, timeout_s);
                out.walls[mode].push_back(out.last[mode].rs.stats.wall_ms);
            } catch (const Timeout&) {
                out.timed_out[mode] = true;
            }
        }
    }
    return out;
}

double median(std::vector<double> v) {
    if (v.empty()) return 0;
    std::sort(v.begin(), v.end());
    size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2;
}

}  // namespace quest
