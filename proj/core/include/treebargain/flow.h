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

#ifndef TREEBARGAIN_FLOW_H_
#define TREEBARGAIN_FLOW_H_

#include <cstddef>
#include <span>
#include <vector>

#include "treebargain/tree.h"

namespace treebargain {

// Revenue share on every edge of one tree. An edge is addressed by its child
// node; the slot belonging to the root is the fictitious upward edge and is
// pinned to 0. Unassigned edges hold NaN until set.
class ShareAssignment {
 public:
  // All edges unassigned.
  explicit ShareAssignment(const TreeInstance& tree);
  // All edges set to `fill`.
  ShareAssignment(const TreeInstance& tree, double fill);

  std::size_t size() const { return shares_.size(); }

  double operator[](NodeIndex child) const { return shares_[child]; }
  // Throws Error(kInvalidInstance) for values outside [0, 1] and for the root.
  void Set(NodeIndex child, double share);
  // Share of the edge above `node`, 0 for the root.
  double Upward(NodeIndex node) const { return shares_[node]; }

  bool IsAssigned(NodeIndex child) const;
  std::span<const double> values() const { return shares_; }

 private:
  NodeIndex root_;
  std::vector<double> shares_;
};

// Result of propagating offers up the tree for a fixed share assignment.
struct Outcome {
  NodeIndex winning_leaf = kNoNode;
  // Leaf first, root last.
  std::vector<NodeIndex> winning_path;
  // Value reaching each node (w).
  std::vector<double> flows;
  // Winning child at each internal node, kNoNode at leaves.
  std::vector<NodeIndex> winning_child;
  std::vector<double> payoffs;
};

// Bottom-up w_s = max_t x_ts * w_t with lowest-id tie-breaking, then the
// winning path from the root and the payoff split along it. Throws
// Error(kMissingShare) when an edge has no share.
Outcome ComputeFlow(const TreeInstance& tree, const ShareAssignment& shares);

// Best offer reaching `parent` from children other than `excluded`; 0 when
// there is no other child.
double OfferExcluding(const TreeInstance& tree, const ShareAssignment& shares,
                      std::span<const double> flows, NodeIndex parent,
                      NodeIndex excluded);

// Per-edge violation of the two-player egalitarian bargaining equation,
// indexed by child node (the root slot is 0). Values are in the same units as
// the leaf values.
std::vector<double> TreeResiduals(const TreeInstance& tree,
                                  const ShareAssignment& shares);

double MaxResidual(std::span<const double> residuals);

}  // namespace treebargain

#endif  // TREEBARGAIN_FLOW_H_
