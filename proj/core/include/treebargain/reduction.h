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

#ifndef TREEBARGAIN_REDUCTION_H_
#define TREEBARGAIN_REDUCTION_H_

#include <span>
#include <vector>

#include "treebargain/flow.h"
#include "treebargain/path_solver.h"
#include "treebargain/tree.h"

namespace treebargain {

// How a path instance sits inside the tree it was reduced from.
struct ReductionMapping {
  // path_nodes[0] is the collapsed subtree root s0, path_nodes.back() the
  // tree root. Path edge e_i joins path_nodes[i-1] to path_nodes[i].
  std::vector<NodeIndex> path_nodes;
  NodeIndex collapsed_subtree_root = kNoNode;
  // Child endpoints of every edge that is not a path edge, ascending.
  std::vector<NodeIndex> off_path_edges;
};

struct Reduction {
  PathInstance path;
  ReductionMapping mapping;
};

// Collapses the subtree under the lowest common ancestor of all max-value
// leaves into a single buyer and records, for every node on the way to the
// root, the best value reachable through its other children. Expects a
// pruned tree.
Reduction ReduceToPath(const TreeInstance& tree);

// Shares 1 on every off-path edge, path_shares[i-1] on edge e_i.
// Throws Error(kDimensionMismatch) if the share count is not n.
ShareAssignment LiftToTree(std::span<const double> path_shares,
                           const ReductionMapping& mapping, const TreeInstance& tree);

// Full pipeline: prune must already have happened.
struct TreeSolution {
  Reduction reduction;
  FixedPointSolution path_solution;
  ShareAssignment shares;
};

TreeSolution SolveTree(const TreeInstance& pruned_tree,
                       double search_tolerance = kDefaultSearchTolerance);

}  // namespace treebargain

#endif  // TREEBARGAIN_REDUCTION_H_
