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

#ifndef TREEBARGAIN_TESTS_FIXTURES_H_
#define TREEBARGAIN_TESTS_FIXTURES_H_

#include <initializer_list>
#include <optional>
#include <vector>

#include "treebargain/tree.h"

namespace treebargain::testing {

inline NodeSpec Root(std::int64_t id) { return {NodeId{id}, std::nullopt, std::nullopt}; }
inline NodeSpec Inner(std::int64_t id, std::int64_t parent) {
  return {NodeId{id}, NodeId{parent}, std::nullopt};
}
inline NodeSpec Leaf(std::int64_t id, std::int64_t parent, double value) {
  return {NodeId{id}, NodeId{parent}, value};
}

inline NodeIndex At(const TreeInstance& tree, std::int64_t id) { return *tree.Find(NodeId{id}); }

// Seller 0 with one buyer 1.
inline TreeInstance SellerBuyer(double value) {
  return TreeInstance::FromSpecs({Root(0), Leaf(1, 0, value)});
}

// Seller 0 with buyers 1, 2, ... directly attached.
inline TreeInstance SellerBuyers(std::initializer_list<double> values) {
  std::vector<NodeSpec> specs{Root(0)};
  std::int64_t id = 1;
  for (double v : values) specs.push_back(Leaf(id++, 0, v));
  return TreeInstance::FromSpecs(specs);
}

// A(0) root; B(1), C(2) children; D(3), E(4) under B; F(5) under C.
inline TreeInstance TwoBranchTree(double d, double e, double f) {
  return TreeInstance::FromSpecs(
      {Root(0), Inner(1, 0), Inner(2, 0), Leaf(3, 1, d), Leaf(4, 1, e), Leaf(5, 2, f)});
}

// Same tree with F removed, so C(2) is a buyer.
inline TreeInstance InefficiencyTree(double d = 1.0, double e = 0.1, double c = 0.6) {
  return TreeInstance::FromSpecs(
      {Root(0), Inner(1, 0), Leaf(2, 0, c), Leaf(3, 1, d), Leaf(4, 1, e)});
}

// R(0) with intermediary I(1) and buyer L1(2) = 3; I holds L2(3) = 10 and
// L3(4) = 4. Reduces to d = (10, 4, 3).
inline TreeInstance FixtureC() {
  return TreeInstance::FromSpecs(
      {Root(0), Inner(1, 0), Leaf(2, 0, 3.0), Leaf(3, 1, 10.0), Leaf(4, 1, 4.0)});
}

// Bare path root 0 - 1 - ... - (length - 1), buyer at the bottom.
inline TreeInstance BarePath(std::size_t length, double value) {
  std::vector<NodeSpec> specs{Root(0)};
  for (std::size_t k = 1; k + 1 < length; ++k) {
    specs.push_back(Inner(static_cast<std::int64_t>(k), static_cast<std::int64_t>(k - 1)));
  }
  specs.push_back(Leaf(static_cast<std::int64_t>(length - 1),
                       static_cast<std::int64_t>(length - 2), value));
  return TreeInstance::FromSpecs(specs);
}

}  // namespace treebargain::testing

#endif  // TREEBARGAIN_TESTS_FIXTURES_H_
