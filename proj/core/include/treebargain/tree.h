// Copyright 2026 The treebargain Authors.
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

#ifndef TREEBARGAIN_TREE_H_
#define TREEBARGAIN_TREE_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace treebargain {

// External label of a node. Labels are what instance files and reports use;
// they also define the deterministic tie-breaking order (lowest id wins).
struct NodeId {
  std::int64_t value = 0;

  friend auto operator<=>(const NodeId&, const NodeId&) = default;
};

// Dense position of a node inside a TreeInstance. Nodes are stored sorted by
// NodeId, so index order and id order coincide.
using NodeIndex = std::size_t;

inline constexpr NodeIndex kNoNode = static_cast<NodeIndex>(-1);

// One node as supplied by a caller: its label, its parent label (absent for
// the root) and, for leaves only, the buyer value.
struct NodeSpec {
  NodeId id;
  std::optional<NodeId> parent;
  std::optional<double> value;
};

// A rooted trade tree: the root is the seller, leaves are buyers carrying a
// nonnegative value, every other node is an intermediary. Immutable once
// built; all validation happens in FromSpecs.
class TreeInstance {
 public:
  // Throws Error(kInvalidTree) unless the specs describe a single rooted tree
  // with at least one edge, unique ids, values on exactly the leaves, and
  // every value finite and nonnegative.
  static TreeInstance FromSpecs(std::vector<NodeSpec> specs);

  std::size_t size() const { return ids_.size(); }
  std::size_t edge_count() const { return ids_.size() - 1; }
  NodeIndex root() const { return root_; }

  NodeId id(NodeIndex node) const { return ids_[node]; }
  std::optional<NodeIndex> Find(NodeId id) const;

  // kNoNode for the root.
  NodeIndex parent(NodeIndex node) const { return parents_[node]; }
  // Sorted ascending.
  std::span<const NodeIndex> children(NodeIndex node) const {
    return children_[node];
  }
  bool is_leaf(NodeIndex node) const { return children_[node].empty(); }
  // Leaf value; 0 for non-leaves.
  double value(NodeIndex node) const { return values_[node]; }

  std::span<const NodeIndex> leaves() const { return leaves_; }
  // Every node appears after all of its descendants.
  std::span<const NodeIndex> post_order() const { return post_order_; }
  std::size_t depth(NodeIndex node) const { return depths_[node]; }

  double max_leaf_value() const;
  std::vector<NodeSpec> ToSpecs() const;

 private:
  TreeInstance() = default;

  std::vector<NodeId> ids_;
  std::vector<NodeIndex> parents_;
  std::vector<std::vector<NodeIndex>> children_;
  std::vector<double> values_;
  std::vector<NodeIndex> leaves_;
  std::vector<NodeIndex> post_order_;
  std::vector<std::size_t> depths_;
  NodeIndex root_ = kNoNode;
};

// Removes zero-value buyers, then every intermediary left without children,
// recursively. Node ids are preserved. Throws Error(kEmptyAfterPrune) when
// no buyer has a positive value.
TreeInstance Prune(const TreeInstance& tree);

// Leaf-to-root chain starting at `node` (inclusive on both ends).
std::vector<NodeIndex> PathToRoot(const TreeInstance& tree, NodeIndex node);

}  // namespace treebargain

template <>
struct std::hash<treebargain::NodeId> {
  std::size_t operator()(const treebargain::NodeId& id) const noexcept {
    return std::hash<std::int64_t>{}(id.value);
  }
};

#endif  // TREEBARGAIN_TREE_H_
