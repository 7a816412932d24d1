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

#include "treebargain/tree.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "treebargain/error.h"

namespace treebargain {
namespace {

[[noreturn]] void Invalid(const std::string& message) {
  throw Error(ErrorCode::kInvalidTree, message);
}

std::string Label(NodeId id) { return std::to_string(id.value); }

}  // namespace

TreeInstance TreeInstance::FromSpecs(std::vector<NodeSpec> specs) {
  if (specs.size() < 2) Invalid("a tree needs a seller and at least one buyer");
  std::sort(specs.begin(), specs.end(),
            [](const NodeSpec& a, const NodeSpec& b) { return a.id < b.id; });

  TreeInstance tree;
  const std::size_t n = specs.size();
  tree.ids_.reserve(n);
  std::unordered_map<NodeId, NodeIndex> index;
  for (NodeIndex i = 0; i < n; ++i) {
    if (!index.emplace(specs[i].id, i).second) {
      Invalid("duplicate node id " + Label(specs[i].id));
    }
    tree.ids_.push_back(specs[i].id);
  }

  tree.parents_.assign(n, kNoNode);
  tree.children_.assign(n, {});
  for (NodeIndex i = 0; i < n; ++i) {
    if (!specs[i].parent) {
      if (tree.root_ != kNoNode) {
        Invalid("more than one root (" + Label(tree.ids_[tree.root_]) +
                " and " + Label(specs[i].id) + ")");
      }
      tree.root_ = i;
      continue;
    }
    auto it = index.find(*specs[i].parent);
    if (it == index.end()) {
      Invalid("node " + Label(specs[i].id) + " references unknown parent " +
              Label(*specs[i].parent));
    }
    if (it->second == i) Invalid("node " + Label(specs[i].id) + " is its own parent");
    tree.parents_[i] = it->second;
    tree.children_[it->second].push_back(i);
  }
  if (tree.root_ == kNoNode) Invalid("no root");
  // Children were appended in increasing index order already.

  // Breadth-first walk from the root: reaching every node proves the parent
  // links form a single tree (n - 1 parent links plus connectivity).
  std::vector<NodeIndex> order{tree.root_};
  tree.depths_.assign(n, 0);
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (NodeIndex child : tree.children_[order[head]]) {
      tree.depths_[child] = tree.depths_[order[head]] + 1;
      order.push_back(child);
    }
  }
  if (order.size() != n) Invalid("parent links contain a cycle");
  tree.post_order_.assign(order.rbegin(), order.rend());

  tree.values_.assign(n, 0.0);
  for (NodeIndex i = 0; i < n; ++i) {
    const bool leaf = tree.children_[i].empty();
    if (leaf) {
      if (!specs[i].value) Invalid("leaf " + Label(specs[i].id) + " has no value");
      const double v = *specs[i].value;
      if (!std::isfinite(v) || v < 0.0) {
        Invalid("leaf " + Label(specs[i].id) + " has a negative or non-finite value");
      }
      tree.values_[i] = v;
      tree.leaves_.push_back(i);
    } else if (specs[i].value) {
      Invalid("non-leaf node " + Label(specs[i].id) + " carries a value");
    }
  }
  return tree;
}

std::optional<NodeIndex> TreeInstance::Find(NodeId id) const {
  auto it = std::lower_bound(ids_.begin(), ids_.end(), id);
  if (it == ids_.end() || *it != id) return std::nullopt;
  return static_cast<NodeIndex>(it - ids_.begin());
}

double TreeInstance::max_leaf_value() const {
  double best = 0.0;
  for (NodeIndex leaf : leaves_) best = std::max(best, values_[leaf]);
  return best;
}

std::vector<NodeSpec> TreeInstance::ToSpecs() const {
  std::vector<NodeSpec> specs;
  specs.reserve(size());
  for (NodeIndex i = 0; i < size(); ++i) {
    NodeSpec spec{ids_[i], std::nullopt, std::nullopt};
    if (parents_[i] != kNoNode) spec.parent = ids_[parents_[i]];
    if (is_leaf(i)) spec.value = values_[i];
    specs.push_back(spec);
  }
  return specs;
}

TreeInstance Prune(const TreeInstance& tree) {
  std::vector<bool> keep(tree.size(), false);
  for (NodeIndex node : tree.post_order()) {
    if (tree.is_leaf(node)) {
      keep[node] = tree.value(node) > 0.0;
    } else {
      keep[node] = std::any_of(tree.children(node).begin(), tree.children(node).end(),
                               [&](NodeIndex c) { return keep[c]; });
    }
  }
  if (!keep[tree.root()]) {
    throw Error(ErrorCode::kEmptyAfterPrune, "every buyer has value zero");
  }
  std::vector<NodeSpec> specs;
  for (NodeIndex i = 0; i < tree.size(); ++i) {
    if (!keep[i]) continue;
    NodeSpec spec{tree.id(i), std::nullopt, std::nullopt};
    if (tree.parent(i) != kNoNode) spec.parent = tree.id(tree.parent(i));
    if (tree.is_leaf(i)) spec.value = tree.value(i);
    specs.push_back(spec);
  }
  return TreeInstance::FromSpecs(std::move(specs));
}

std::vector<NodeIndex> PathToRoot(const TreeInstance& tree, NodeIndex node) {
  std::vector<NodeIndex> path;
  for (NodeIndex at = node; at != kNoNode; at = tree.parent(at)) path.push_back(at);
  return path;
}

}  // namespace treebargain
