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

#include "treebargain/reduction.h"

#include <algorithm>
#include <string>

#include "treebargain/error.h"

namespace treebargain {

Reduction ReduceToPath(const TreeInstance& tree) {
  const double best = tree.max_leaf_value();
  std::vector<double> subtree_max(tree.size(), 0.0);
  std::vector<std::size_t> best_leaves(tree.size(), 0);
  for (NodeIndex node : tree.post_order()) {
    if (tree.is_leaf(node)) {
      subtree_max[node] = tree.value(node);
      best_leaves[node] = tree.value(node) == best ? 1 : 0;
      continue;
    }
    for (NodeIndex child : tree.children(node)) {
      subtree_max[node] = std::max(subtree_max[node], subtree_max[child]);
      best_leaves[node] += best_leaves[child];
    }
  }

  // Descend while a single child still holds every max-value leaf.
  const std::size_t total = best_leaves[tree.root()];
  NodeIndex lca = tree.root();
  for (bool moved = true; moved;) {
    moved = false;
    for (NodeIndex child : tree.children(lca)) {
      if (best_leaves[child] == total) {
        lca = child;
        moved = true;
        break;
      }
    }
  }

  ReductionMapping mapping;
  mapping.collapsed_subtree_root = lca;
  mapping.path_nodes = PathToRoot(tree, lca);

  std::vector<double> d{best};
  for (std::size_t i = 1; i < mapping.path_nodes.size(); ++i) {
    const NodeIndex node = mapping.path_nodes[i];
    const NodeIndex on_path = mapping.path_nodes[i - 1];
    double outside = 0.0;
    for (NodeIndex child : tree.children(node)) {
      if (child != on_path) outside = std::max(outside, subtree_max[child]);
    }
    d.push_back(outside);
  }

  std::vector<bool> path_edge(tree.size(), false);
  for (std::size_t i = 0; i + 1 < mapping.path_nodes.size(); ++i) {
    path_edge[mapping.path_nodes[i]] = true;
  }
  for (NodeIndex node = 0; node < tree.size(); ++node) {
    if (node != tree.root() && !path_edge[node]) mapping.off_path_edges.push_back(node);
  }
  return Reduction{PathInstance(std::move(d)), std::move(mapping)};
}

ShareAssignment LiftToTree(std::span<const double> path_shares,
                           const ReductionMapping& mapping, const TreeInstance& tree) {
  const std::size_t n = mapping.path_nodes.size() - 1;
  if (path_shares.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "path has " + std::to_string(n) + " edges but " +
                    std::to_string(path_shares.size()) + " shares were given");
  }
  ShareAssignment shares(tree, 1.0);
  for (std::size_t i = 1; i <= n; ++i) shares.Set(mapping.path_nodes[i - 1], path_shares[i - 1]);
  return shares;
}

TreeSolution SolveTree(const TreeInstance& pruned_tree, double search_tolerance) {
  Reduction reduction = ReduceToPath(pruned_tree);
  FixedPointSolution path_solution = SolveFixedPoint(reduction.path, search_tolerance);
  ShareAssignment shares = LiftToTree(path_solution.x, reduction.mapping, pruned_tree);
  return TreeSolution{std::move(reduction), std::move(path_solution), std::move(shares)};
}

}  // namespace treebargain
