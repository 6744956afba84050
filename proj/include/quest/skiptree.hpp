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

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "quest/relation.hpp"
#include "quest/store.hpp"
#include "quest/tree.hpp"

namespace quest {

/// ceil(log2(max_depth)), and 0 for trees of depth 0 or 1.
int skip_max_height(int max_depth);

/// Number of i in [1, H] with 2^i dividing depth.
int skip_height(int depth, int H);

/// Heights and Skip-Ancestor lists of a tree shape.
class SkipIndex {
public:
    SkipIndex() = default;
    explicit SkipIndex(const TreeShape& shape);

    const TreeShape& shape() const { return shape_; }
    int max_height() const { return H_; }
    int height(NodeId v) const { return height_[v]; }
    /// Entry j is the nearest proper ancestor with height >= j. Empty for the root.
    const std::vector<NodeId>& skip_ancestors(NodeId v) const { return ancestors_[v]; }

    struct Lca {
        NodeId lca = kNoNode;
        /// Skip jumps taken; a synchronized jump of both nodes counts once.
        int steps = 0;
    };
    Lca find_lca(NodeId a, NodeId b) const;

    /// Greedy skip jumps from v up to its ancestor a, as (node, j) pairs: each
    /// jump moves from node to skip_ancestors(node)[j].
    std::vector<std::pair<NodeId, int>> climb(NodeId v, NodeId a) const;

    /// Total stored (node, ancestor) entries.
    uint64_t entry_count() const;

private:
    TreeShape shape_;
    int H_ = 0;
    std::vector<int> height_;
    std::vector<std::vector<NodeId>> ancestors_;
};

/// Skip-Tree over a schema with materialized composites: entry (v, j) maps
/// the domain of skip_ancestors(v)[j] to the domain of v. Entries whose two
/// domains coincide share one composite file.
class SkipTree {
public:
    SkipTree() = default;

    /// `link(v)` returns the parent-domain to v-domain relation of a node
    /// with a link.
    static SkipTree build(const Schema& schema, const std::vector<uint64_t>& cardinality,
                          const std::function<const Relation&(NodeId)>& link);
    static SkipTree build(Store& store, const std::string& schema);

    /// Writes `<store>/<schema>/_skiptree/` and its skiptree.json.
    void save(const std::filesystem::path& store_dir) const;
    /// Reads skiptree.json; composite files are loaded on first use.
    static SkipTree load(const std::filesystem::path& store_dir, const Schema& schema);
    static bool exists(const std::filesystem::path& store_dir, const std::string& schema);

    const SkipIndex& index() const { return index_; }
    const Schema& schema() const { return schema_; }

    /// Composite for (v, j), loading it if needed.
    const Relation& composite(NodeId v, int j) const;
    /// Stable id of the composite behind (v, j), shared by equal domain pairs.
    int composite_id(NodeId v, int j) const { return entry_[v][j]; }
    bool is_identity(NodeId v, int j) const;

    /// Files loaded and bytes read from disk so far.
    uint64_t files_loaded() const { return files_loaded_; }
    uint64_t bytes_loaded() const { return bytes_loaded_; }

private:
    struct Slot {
        NodeId upper_domain = kNoNode;
        NodeId lower_domain = kNoNode;
        std::string file;
        uint64_t cardinality = 0;
        bool identity = false;
        mutable std::unique_ptr<Relation> rel;
    };

    const Relation& composite_by_slot(size_t k) const;

    Schema schema_;
    SkipIndex index_;
    std::vector<std::vector<int>> entry_;
    std::vector<Slot> slots_;
    std::filesystem::path dir_;
    std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
    mutable uint64_t files_loaded_ = 0;
    mutable uint64_t bytes_loaded_ = 0;
};

}  // namespace quest
