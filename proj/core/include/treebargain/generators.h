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

#ifndef TREEBARGAIN_GENERATORS_H_
#define TREEBARGAIN_GENERATORS_H_

#include <cstddef>
#include <span>
#include <vector>

#include "treebargain/random.h"
#include "treebargain/tree.h"

namespace treebargain {

enum class ValueDistribution {
  kLognormal,      // exp(1 + N(0, 1))
  kUniform,        // uniform in (0, 1]
  kSmallIntegers,  // uniform in {1, ..., 5}; produces ties on purpose
};

double SampleValue(Rng& rng, ValueDistribution distribution);

// Heap-numbered complete binary tree: root 0, children of k are 2k+1 and
// 2k+2. Depth D gives 2^D leaves and 2^(D+1) - 2 edges.
TreeInstance BalancedBinaryTree(std::size_t depth, Rng& rng,
                                ValueDistribution distribution = ValueDistribution::kLognormal);

// Same topology with the given leaf values (left to right).
TreeInstance BalancedBinaryTree(std::size_t depth, std::span<const double> leaf_values);

// Random recursive tree: each new node attaches to a uniformly chosen
// earlier node. Node count is uniform in [2, max_nodes].
TreeInstance RandomTree(Rng& rng, std::size_t max_nodes, ValueDistribution distribution);

// Random branching tree of bounded depth: the root gets 1-3 children, every
// other node above the depth limit gets 0-3, nodes at the limit are leaves.
TreeInstance RandomDepthTree(Rng& rng, std::size_t depth, ValueDistribution distribution);

// Same topology, leaf values redrawn.
TreeInstance ResampleValues(const TreeInstance& tree, Rng& rng, ValueDistribution distribution);

}  // namespace treebargain

#endif  // TREEBARGAIN_GENERATORS_H_
