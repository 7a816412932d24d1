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

#include "treebargain/flow.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "treebargain/error.h"

namespace treebargain {

ShareAssignment::ShareAssignment(const TreeInstance& tree)
    : root_(tree.root()),
      shares_(tree.size(), std::numeric_limits<double>::quiet_NaN()) {
  shares_[root_] = 0.0;
}

ShareAssignment::ShareAssignment(const TreeInstance& tree, double fill)
    : ShareAssignment(tree) {
  for (NodeIndex i = 0; i < shares_.size(); ++i) {
    if (i != root_) Set(i, fill);
  }
}

void ShareAssignment::Set(NodeIndex child, double share) {
  if (child == root_) {
    throw Error(ErrorCode::kInvalidInstance, "the root has no parent edge");
  }
  if (!(share >= 0.0 && share <= 1.0)) {
    throw Error(ErrorCode::kInvalidInstance,
                "share " + std::to_string(share) + " outside [0, 1]");
  }
  shares_[child] = share;
}

bool ShareAssignment::IsAssigned(NodeIndex child) const {
  return !std::isnan(shares_[child]);
}

Outcome ComputeFlow(const TreeInstance& tree, const ShareAssignment& shares) {
  if (shares.size() != tree.size()) {
    throw Error(ErrorCode::kMissingShare, "share assignment belongs to another tree");
  }
  Outcome out;
  out.flows.assign(tree.size(), 0.0);
  out.winning_child.assign(tree.size(), kNoNode);
  for (NodeIndex node : tree.post_order()) {
    if (node != tree.root() && !shares.IsAssigned(node)) {
      throw Error(ErrorCode::kMissingShare,
                  "edge above node " + std::to_string(tree.id(node).value) +
                      " has no share");
    }
    if (tree.is_leaf(node)) {
      out.flows[node] = tree.value(node);
      continue;
    }
    // Strict comparison keeps the first (lowest-id) child on ties.
    NodeIndex best = kNoNode;
    double best_offer = -1.0;
    for (NodeIndex child : tree.children(node)) {
      const double offer = shares[child] * out.flows[child];
      if (offer > best_offer) {
        best_offer = offer;
        best = child;
      }
    }
    out.flows[node] = best_offer;
    out.winning_child[node] = best;
  }

  out.payoffs.assign(tree.size(), 0.0);
  std::vector<NodeIndex> down{tree.root()};
  while (!tree.is_leaf(down.back())) down.push_back(out.winning_child[down.back()]);
  out.winning_leaf = down.back();
  out.winning_path.assign(down.rbegin(), down.rend());
  for (NodeIndex node : out.winning_path) {
    out.payoffs[node] = (1.0 - shares.Upward(node)) * out.flows[node];
  }
  return out;
}

double OfferExcluding(const TreeInstance& tree, const ShareAssignment& shares,
                      std::span<const double> flows, NodeIndex parent,
                      NodeIndex excluded) {
  double best = 0.0;
  for (NodeIndex sibling : tree.children(parent)) {
    if (sibling != excluded) best = std::max(best, shares[sibling] * flows[sibling]);
  }
  return best;
}

std::vector<double> TreeResiduals(const TreeInstance& tree,
                                  const ShareAssignment& shares) {
  const Outcome outcome = ComputeFlow(tree, shares);
  std::vector<double> residuals(tree.size(), 0.0);
  for (NodeIndex child = 0; child < tree.size(); ++child) {
    if (child == tree.root()) continue;
    const NodeIndex parent = tree.parent(child);
    const double w = outcome.flows[child];
    const double x = shares[child];
    const double other = OfferExcluding(tree, shares, outcome.flows, parent, child);
    const double child_gain = (1.0 - x) * w;
    const double parent_gain =
        (1.0 - shares.Upward(parent)) * (std::max(other, x * w) - other);
    residuals[child] = std::abs(child_gain - parent_gain);
  }
  return residuals;
}

double MaxResidual(std::span<const double> residuals) {
  double worst = 0.0;
  for (double r : residuals) worst = std::max(worst, r);
  return worst;
}

}  // namespace treebargain
