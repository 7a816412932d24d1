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

#include "treebargain/generators.h"

#include <cstdint>
#include <string>

#include "treebargain/error.h"

namespace treebargain {
namespace {

constexpr std::size_t kMaxBalancedDepth = 24;

NodeSpec Spec(std::size_t id, std::optional<std::size_t> parent) {
  NodeSpec spec{NodeId{static_cast<std::int64_t>(id)}, std::nullopt, std::nullopt};
  if (parent) spec.parent = NodeId{static_cast<std::int64_t>(*parent)};
  return spec;
}

// Fills values on every spec that ends up childless.
TreeInstance WithLeafValues(std::vector<NodeSpec> specs,
                            const std::vector<std::size_t>& child_count, Rng& rng,
                            ValueDistribution distribution) {
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (child_count[i] == 0) specs[i].value = SampleValue(rng, distribution);
  }
  return TreeInstance::FromSpecs(std::move(specs));
}

}  // namespace

double SampleValue(Rng& rng, ValueDistribution distribution) {
  switch (distribution) {
    case ValueDistribution::kLognormal:
      return rng.Lognormal();
    case ValueDistribution::kUniform:
      return 1.0 - rng.Uniform();
    case ValueDistribution::kSmallIntegers:
      return static_cast<double>(1 + rng.Below(5));
  }
  return 1.0;
}

TreeInstance BalancedBinaryTree(std::size_t depth, std::span<const double> leaf_values) {
  if (depth == 0 || depth > kMaxBalancedDepth) {
    throw Error(ErrorCode::kInvalidConfig,
                "balanced tree depth must be in [1, " + std::to_string(kMaxBalancedDepth) + "]");
  }
  const std::size_t leaves = std::size_t{1} << depth;
  if (leaf_values.size() != leaves) {
    throw Error(ErrorCode::kDimensionMismatch,
                "depth " + std::to_string(depth) + " needs " + std::to_string(leaves) +
                    " leaf values");
  }
  const std::size_t internal = leaves - 1;
  std::vector<NodeSpec> specs;
  specs.reserve(internal + leaves);
  for (std::size_t k = 0; k < internal + leaves; ++k) {
    specs.push_back(Spec(k, k == 0 ? std::nullopt : std::optional((k - 1) / 2)));
    if (k >= internal) specs.back().value = leaf_values[k - internal];
  }
  return TreeInstance::FromSpecs(std::move(specs));
}

TreeInstance BalancedBinaryTree(std::size_t depth, Rng& rng, ValueDistribution distribution) {
  if (depth == 0 || depth > kMaxBalancedDepth) {
    throw Error(ErrorCode::kInvalidConfig,
                "balanced tree depth must be in [1, " + std::to_string(kMaxBalancedDepth) + "]");
  }
  std::vector<double> values(std::size_t{1} << depth);
  for (double& v : values) v = SampleValue(rng, distribution);
  return BalancedBinaryTree(depth, values);
}

TreeInstance RandomTree(Rng& rng, std::size_t max_nodes, ValueDistribution distribution) {
  if (max_nodes < 2) throw Error(ErrorCode::kInvalidConfig, "a tree needs at least 2 nodes");
  const std::size_t count = 2 + rng.Below(max_nodes - 1);
  std::vector<NodeSpec> specs{Spec(0, std::nullopt)};
  std::vector<std::size_t> child_count(count, 0);
  for (std::size_t k = 1; k < count; ++k) {
    const std::size_t parent = rng.Below(k);
    specs.push_back(Spec(k, parent));
    ++child_count[parent];
  }
  return WithLeafValues(std::move(specs), child_count, rng, distribution);
}

TreeInstance RandomDepthTree(Rng& rng, std::size_t depth, ValueDistribution distribution) {
  if (depth == 0) throw Error(ErrorCode::kInvalidConfig, "depth must be at least 1");
  std::vector<NodeSpec> specs{Spec(0, std::nullopt)};
  std::vector<std::size_t> level{0};
  std::vector<std::size_t> child_count{0};
  for (std::size_t d = 0; d < depth; ++d) {
    std::vector<std::size_t> next;
    for (std::size_t parent : level) {
      const std::size_t kids = d == 0 ? 1 + rng.Below(3) : rng.Below(4);
      for (std::size_t c = 0; c < kids; ++c) {
        const std::size_t id = specs.size();
        specs.push_back(Spec(id, parent));
        child_count.push_back(0);
        ++child_count[parent];
        next.push_back(id);
      }
    }
    level = std::move(next);
  }
  return WithLeafValues(std::move(specs), child_count, rng, distribution);
}

TreeInstance ResampleValues(const TreeInstance& tree, Rng& rng, ValueDistribution distribution) {
  std::vector<NodeSpec> specs = tree.ToSpecs();
  for (std::size_t i = 0; i < specs.size(); ++i) {
    if (tree.is_leaf(i)) specs[i].value = SampleValue(rng, distribution);
  }
  return TreeInstance::FromSpecs(std::move(specs));
}

}  // namespace treebargain
