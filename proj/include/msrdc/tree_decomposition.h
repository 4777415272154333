// Copyright 2026 The msrdc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "msrdc/instance.h"
#include "msrdc/types.h"

namespace msrdc {

/// A tree decomposition: bags plus the tree edges between them.
struct TreeDecomposition {
  std::vector<std::vector<VertexId>> bags;
  std::vector<std::pair<int, int>> tree_edges;

  /// max |bag| - 1; -1 without bags.
  int width() const;
};

struct TdViolation {
  enum class Kind {
    kMalformed,          // bad ids or the bag graph is not a tree
    kVertexNotCovered,   // a vertex lies in no bag
    kEdgeNotCovered,     // an edge has no bag with both endpoints
    kVertexNotConnected  // the bags holding a vertex are not connected
  };

  Kind kind = Kind::kMalformed;
  VertexId vertex = -1;
  Edge edge;
  std::string message;
};

/// Checks the three decomposition conditions (and that the bags form a
/// tree). Returns the first violation, or nullopt if valid.
std::optional<TdViolation> validate_td(const TreeDecomposition& td,
                                       const Instance& instance);

/// Min-fill elimination ordering (ties: fewer neighbours, then smaller id).
/// Bags contained in a neighbouring bag are merged away. Disconnected inputs
/// yield one subtree per component, chained into a single tree.
TreeDecomposition min_fill_heuristic(const Instance& instance);

/// PACE 2017 `.td` text; vertex ids are 1-based in the file.
std::string td_to_pace(const TreeDecomposition& td, int vertex_count);
TreeDecomposition td_from_pace(std::string_view text, int* vertex_count = nullptr);

// ---------------------------------------------------------------------------
// Nice tree decompositions.

enum class NodeKind { kLeaf, kIntroduce, kForget, kJoin };

const char* to_string(NodeKind kind);

struct NiceNode {
  NodeKind kind = NodeKind::kLeaf;
  VertexId vertex = -1;              // introduced / forgotten vertex
  std::vector<VertexId> bag;         // sorted
  std::array<int, 2> children{-1, -1};
};

/// Rooted binary decomposition with leaf, introduce, forget and join nodes.
/// Node ids are a post-order: children always precede their parent, and the
/// root is the last node with an empty bag.
class NiceTreeDecomposition {
 public:
  NiceTreeDecomposition() = default;

  /// Validates every node-kind constraint and the post-order numbering;
  /// throws std::invalid_argument on a violation.
  NiceTreeDecomposition(std::vector<NiceNode> nodes, int vertex_count);

  int size() const { return static_cast<int>(nodes_.size()); }
  int root() const { return size() - 1; }
  int vertex_count() const { return vertex_count_; }
  int width() const { return width_; }

  const NiceNode& node(int id) const { return nodes_[id]; }
  const std::vector<NiceNode>& nodes() const { return nodes_; }

  /// V_t: vertices in the bag of `id` or of any descendant.
  const Bitset& subtree_vertices(int id) const { return subtree_[id]; }
  std::vector<VertexId> subtree_vertex_list(int id) const;

  int parent(int id) const { return parent_[id]; }

 private:
  std::vector<NiceNode> nodes_;
  std::vector<Bitset> subtree_;
  std::vector<int> parent_;
  int vertex_count_ = 0;
  int width_ = -1;
};

/// Converts a valid decomposition into a nice one of the same width. Throws
/// std::invalid_argument if `td` is not a valid decomposition of `instance`.
NiceTreeDecomposition nicify(const TreeDecomposition& td, const Instance& instance);

/// Describes the first broken nice-decomposition invariant, or nullopt.
std::optional<std::string> check_nice(const NiceTreeDecomposition& ntd);
std::optional<std::string> check_nice(const std::vector<NiceNode>& nodes, int vertex_count);

/// The same bags and tree, forgetting node kinds.
TreeDecomposition as_tree_decomposition(const NiceTreeDecomposition& ntd);

}  // namespace msrdc
