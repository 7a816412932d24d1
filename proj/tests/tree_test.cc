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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <limits>
#include <numeric>

#include "fixtures.h"
#include "treebargain/error.h"
#include "treebargain/flow.h"
#include "treebargain/generators.h"
#include "treebargain/random.h"
#include "treebargain/reduction.h"
#include "treebargain/tree.h"

namespace treebargain {
namespace {

using testing::TwoBranchTree;
using testing::InefficiencyTree;
using testing::At;
using testing::Inner;
using testing::Leaf;
using testing::Root;

ErrorCode CodeOf(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "expected an Error";
  return ErrorCode::kUnsupported;
}

TEST(TreeInstanceTest, SortsByIdAndLinksChildren) {
  const TreeInstance tree =
      TreeInstance::FromSpecs({Leaf(9, 4, 1.0), Root(4), Leaf(2, 4, 3.0)});
  ASSERT_EQ(tree.size(), 3u);
  EXPECT_EQ(tree.id(0), NodeId{2});
  EXPECT_EQ(tree.id(tree.root()), NodeId{4});
  ASSERT_EQ(tree.children(tree.root()).size(), 2u);
  EXPECT_EQ(tree.id(tree.children(tree.root())[0]), NodeId{2});
  EXPECT_EQ(tree.edge_count(), 2u);
  EXPECT_DOUBLE_EQ(tree.max_leaf_value(), 3.0);
  EXPECT_FALSE(tree.Find(NodeId{5}).has_value());
}

TEST(TreeInstanceTest, RejectsMalformedInput) {
  EXPECT_EQ(CodeOf([] { TreeInstance::FromSpecs({Root(0), Root(1)}); }), ErrorCode::kInvalidTree);
  EXPECT_EQ(CodeOf([] { TreeInstance::FromSpecs({Root(0), Leaf(1, 7, 1.0)}); }),
            ErrorCode::kInvalidTree);
  EXPECT_EQ(CodeOf([] { TreeInstance::FromSpecs({Root(0), Leaf(1, 0, 1.0), Leaf(1, 0, 2.0)}); }),
            ErrorCode::kInvalidTree);
  EXPECT_EQ(CodeOf([] { TreeInstance::FromSpecs({Root(0), Inner(1, 0)}); }),
            ErrorCode::kInvalidTree);
  EXPECT_EQ(CodeOf([] {
              TreeInstance::FromSpecs({Root(0), Leaf(1, 0, 1.0), {NodeId{2}, NodeId{0}, 2.0},
                                       Leaf(3, 2, 1.0)});
            }),
            ErrorCode::kInvalidTree);
  EXPECT_EQ(CodeOf([] { TreeInstance::FromSpecs({Root(0), Leaf(1, 0, -1.0)}); }),
            ErrorCode::kInvalidTree);
  EXPECT_EQ(CodeOf([] { TreeInstance::FromSpecs({Root(0)}); }), ErrorCode::kInvalidTree);
  // 1 -> 2 -> 1 cycle detached from the root.
  EXPECT_EQ(CodeOf([] {
              TreeInstance::FromSpecs({Root(0), Leaf(3, 0, 1.0), Inner(1, 2), Inner(2, 1)});
            }),
            ErrorCode::kInvalidTree);
}

TEST(PruneTest, DropsZeroBuyers) {
  const TreeInstance pruned = Prune(testing::SellerBuyers({5.0, 0.0}));
  ASSERT_EQ(pruned.size(), 2u);
  EXPECT_EQ(pruned.id(pruned.leaves()[0]), NodeId{1});
  EXPECT_DOUBLE_EQ(pruned.value(pruned.leaves()[0]), 5.0);
}

TEST(PruneTest, AllZeroIsEmpty) {
  const TreeInstance tree = TreeInstance::FromSpecs({Root(0), Inner(1, 0), Leaf(2, 1, 0.0)});
  EXPECT_EQ(CodeOf([&] { Prune(tree); }), ErrorCode::kEmptyAfterPrune);
}

TEST(PruneTest, RemovesIntermediariesLeftChildless) {
  const TreeInstance pruned = Prune(TwoBranchTree(1.0, 0.1, 0.0));
  EXPECT_EQ(pruned.size(), 4u);
  EXPECT_FALSE(pruned.Find(NodeId{2}).has_value());
  EXPECT_FALSE(pruned.Find(NodeId{5}).has_value());
  EXPECT_TRUE(pruned.Find(NodeId{1}).has_value());
}

TreeInstance WithSomeZeros(Rng& rng) {
  const TreeInstance base = RandomTree(rng, 30, ValueDistribution::kSmallIntegers);
  std::vector<NodeSpec> specs = base.ToSpecs();
  for (NodeSpec& s : specs) {
    if (s.value && rng.Below(3) == 0) s.value = 0.0;
  }
  // Keep at least one positive buyer.
  for (NodeSpec& s : specs) {
    if (s.value) {
      s.value = 4.0;
      break;
    }
  }
  return TreeInstance::FromSpecs(std::move(specs));
}

TEST(PruneTest, Idempotent) {
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const TreeInstance once = Prune(WithSomeZeros(rng));
    const TreeInstance twice = Prune(once);
    ASSERT_EQ(once.size(), twice.size());
    for (NodeIndex i = 0; i < once.size(); ++i) {
      EXPECT_EQ(once.id(i), twice.id(i));
      EXPECT_EQ(once.parent(i), twice.parent(i));
      EXPECT_EQ(once.value(i), twice.value(i));
    }
    for (NodeIndex leaf : once.leaves()) EXPECT_GT(once.value(leaf), 0.0);
  }
}

TEST(ComputeFlowTest, SingleEdgeSplit) {
  const TreeInstance tree = testing::SellerBuyer(12.0);
  ShareAssignment shares(tree);
  shares.Set(At(tree, 1), 0.75);
  const Outcome out = ComputeFlow(tree, shares);
  EXPECT_DOUBLE_EQ(out.flows[At(tree, 1)], 12.0);
  EXPECT_DOUBLE_EQ(out.flows[At(tree, 0)], 9.0);
  EXPECT_DOUBLE_EQ(out.payoffs[At(tree, 1)], 3.0);
  EXPECT_DOUBLE_EQ(out.payoffs[At(tree, 0)], 9.0);
  EXPECT_EQ(out.winning_leaf, At(tree, 1));
  EXPECT_EQ(out.winning_path, (std::vector<NodeIndex>{At(tree, 1), At(tree, 0)}));
}

TEST(ComputeFlowTest, AllOnesGivesSellerTheMax) {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const TreeInstance tree = RandomTree(rng, 25, ValueDistribution::kLognormal);
    const Outcome out = ComputeFlow(tree, ShareAssignment(tree, 1.0));
    EXPECT_EQ(tree.value(out.winning_leaf), tree.max_leaf_value());
    EXPECT_EQ(out.payoffs[tree.root()], tree.max_leaf_value());
    for (NodeIndex i = 0; i < tree.size(); ++i) {
      if (i != tree.root()) EXPECT_EQ(out.payoffs[i], 0.0);
    }
  }
}

TEST(ComputeFlowTest, SharesCanMakeCWin) {
  const TreeInstance tree = InefficiencyTree();
  ShareAssignment shares(tree);
  shares.Set(At(tree, 3), 1.0);
  shares.Set(At(tree, 4), 1.0);
  shares.Set(At(tree, 1), 0.55);
  shares.Set(At(tree, 2), 1.0);
  const Outcome out = ComputeFlow(tree, shares);
  EXPECT_EQ(out.winning_leaf, At(tree, 2));
  EXPECT_DOUBLE_EQ(out.payoffs[tree.root()], 0.6);
}

TEST(ComputeFlowTest, TiesGoToLowestId) {
  const TreeInstance tree = testing::SellerBuyers({7.0, 7.0});
  const Outcome out = ComputeFlow(tree, ShareAssignment(tree, 1.0));
  EXPECT_EQ(out.winning_leaf, At(tree, 1));

  // Zero offers everywhere: still the lowest id.
  const Outcome zero = ComputeFlow(tree, ShareAssignment(tree, 0.0));
  EXPECT_EQ(zero.winning_leaf, At(tree, 1));
  EXPECT_EQ(zero.payoffs[At(tree, 1)], 7.0);
}

TEST(ComputeFlowTest, MissingShare) {
  const TreeInstance tree = InefficiencyTree();
  ShareAssignment shares(tree);
  shares.Set(At(tree, 3), 1.0);
  EXPECT_EQ(CodeOf([&] { ComputeFlow(tree, shares); }), ErrorCode::kMissingShare);
}

TEST(ShareAssignmentTest, RejectsOutOfRangeAndRoot) {
  const TreeInstance tree = testing::SellerBuyer(1.0);
  ShareAssignment shares(tree);
  EXPECT_EQ(CodeOf([&] { shares.Set(At(tree, 1), 1.5); }), ErrorCode::kInvalidInstance);
  EXPECT_EQ(CodeOf([&] { shares.Set(At(tree, 0), 0.5); }), ErrorCode::kInvalidInstance);
  EXPECT_EQ(shares.Upward(tree.root()), 0.0);
}

TEST(TreeResidualsTest, SingleEdge) {
  const TreeInstance tree = testing::SellerBuyer(1.0);
  ShareAssignment half(tree, 0.5);
  EXPECT_EQ(TreeResiduals(tree, half)[At(tree, 1)], 0.0);
  ShareAssignment ones(tree, 1.0);
  EXPECT_EQ(TreeResiduals(tree, ones)[At(tree, 1)], 1.0);
}

TEST(TreeResidualsTest, FixtureCFixedPointLiftsCleanly) {
  const TreeInstance tree = testing::FixtureC();
  const TreeSolution solution = SolveTree(tree);
  EXPECT_LE(MaxResidual(TreeResiduals(tree, solution.shares)), 1e-9);
}

TEST(FlowPropertiesTest, PayoffsSumToWinningValue) {
  Rng rng(17);
  for (int trial = 0; trial < 300; ++trial) {
    const TreeInstance tree = RandomTree(rng, 40, ValueDistribution::kLognormal);
    ShareAssignment shares(tree);
    for (NodeIndex i = 0; i < tree.size(); ++i) {
      if (i != tree.root()) shares.Set(i, rng.Uniform());
    }
    const Outcome out = ComputeFlow(tree, shares);
    const double total = std::accumulate(out.payoffs.begin(), out.payoffs.end(), 0.0);
    const double v = tree.value(out.winning_leaf);
    EXPECT_NEAR(total, v, 4 * std::numeric_limits<double>::epsilon() * v * tree.size());
    std::vector<bool> on_path(tree.size(), false);
    for (NodeIndex node : out.winning_path) on_path[node] = true;
    for (NodeIndex i = 0; i < tree.size(); ++i) {
      if (!on_path[i]) EXPECT_EQ(out.payoffs[i], 0.0);
      EXPECT_GE(out.payoffs[i], 0.0);
    }
  }
}

TEST(FlowPropertiesTest, RaisingOneShareNeverLowersAncestorFlows) {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const TreeInstance tree = RandomTree(rng, 40, ValueDistribution::kLognormal);
    ShareAssignment shares(tree);
    for (NodeIndex i = 0; i < tree.size(); ++i) {
      if (i != tree.root()) shares.Set(i, rng.Uniform());
    }
    const Outcome before = ComputeFlow(tree, shares);
    NodeIndex edge = tree.root();
    while (edge == tree.root()) edge = rng.Below(tree.size());
    shares.Set(edge, shares[edge] + (1.0 - shares[edge]) * rng.Uniform());
    const Outcome after = ComputeFlow(tree, shares);
    for (NodeIndex at = tree.parent(edge); at != kNoNode; at = tree.parent(at)) {
      EXPECT_GE(after.flows[at], before.flows[at]);
    }
  }
}

TEST(FlowPropertiesTest, ScalingValuesScalesFlowsAndPayoffs) {
  Rng rng(29);
  for (int trial = 0; trial < 200; ++trial) {
    const TreeInstance tree = RandomTree(rng, 30, ValueDistribution::kLognormal);
    // Powers of two keep the scaled products exact.
    const double c = std::ldexp(1.0, static_cast<int>(rng.Below(20)) - 10);
    std::vector<NodeSpec> specs = tree.ToSpecs();
    for (NodeSpec& s : specs) {
      if (s.value) *s.value *= c;
    }
    const TreeInstance scaled = TreeInstance::FromSpecs(specs);
    ShareAssignment shares(tree);
    ShareAssignment scaled_shares(scaled);
    for (NodeIndex i = 0; i < tree.size(); ++i) {
      if (i == tree.root()) continue;
      const double x = rng.Uniform();
      shares.Set(i, x);
      scaled_shares.Set(i, x);
    }
    const Outcome a = ComputeFlow(tree, shares);
    const Outcome b = ComputeFlow(scaled, scaled_shares);
    EXPECT_EQ(a.winning_path, b.winning_path);
    for (NodeIndex i = 0; i < tree.size(); ++i) {
      EXPECT_EQ(a.flows[i] * c, b.flows[i]);
      EXPECT_EQ(a.payoffs[i] * c, b.payoffs[i]);
    }
  }
}

}  // namespace
}  // namespace treebargain
