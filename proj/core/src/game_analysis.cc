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

#include "treebargain/game_analysis.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <functional>
#include <numeric>
#include <utility>

#include "treebargain/error.h"

namespace treebargain {
namespace {

constexpr std::size_t kMaskBits = 64;

std::vector<NodeIndex> MembersOf(std::uint64_t mask) {
  std::vector<NodeIndex> members;
  for (std::size_t i = 0; i < kMaskBits; ++i) {
    if (mask >> i & 1U) members.push_back(i);
  }
  return members;
}

double PayoffOf(std::uint64_t mask, std::span<const double> payoffs) {
  double total = 0.0;
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    if (mask >> i & 1U) total += payoffs[i];
  }
  return total;
}

// V(S) for every S of a small game, indexed by mask.
std::vector<double> ValueTable(const CoalitionGame& game) {
  const std::size_t n = game.players();
  std::vector<double> table(std::size_t{1} << n);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) table[mask] = game.Value(mask);
  return table;
}

}  // namespace

CoalitionGame::CoalitionGame(TreeInstance tree) : tree_(std::move(tree)) {
  for (NodeIndex leaf : tree_.leaves()) {
    leaf_paths_.push_back(PathToRoot(tree_, leaf));
    if (tree_.size() <= kMaskBits) {
      std::uint64_t mask = 0;
      for (NodeIndex node : leaf_paths_.back()) mask |= std::uint64_t{1} << node;
      path_masks_.push_back(mask);
    }
  }
}

double CoalitionGame::Value(const std::vector<bool>& members) const {
  if (members.size() != tree_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "coalition vector has the wrong length");
  }
  double best = 0.0;
  for (std::size_t k = 0; k < leaf_paths_.size(); ++k) {
    const std::vector<NodeIndex>& path = leaf_paths_[k];
    if (std::all_of(path.begin(), path.end(), [&](NodeIndex n) { return members[n]; })) {
      best = std::max(best, tree_.value(path.front()));
    }
  }
  return best;
}

double CoalitionGame::Value(std::uint64_t members) const {
  if (tree_.size() > kMaskBits) {
    throw Error(ErrorCode::kTooLarge, "bitmask coalitions need at most 64 players");
  }
  double best = 0.0;
  for (std::size_t k = 0; k < path_masks_.size(); ++k) {
    if ((path_masks_[k] & ~members) == 0) {
      best = std::max(best, tree_.value(leaf_paths_[k].front()));
    }
  }
  return best;
}

CoreVerdict CheckCore(const CoalitionGame& game, std::span<const double> payoffs,
                      CoreCheckMode mode, double slack) {
  const TreeInstance& tree = game.tree();
  const std::size_t n = tree.size();
  if (payoffs.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "one payoff per node expected");
  }
  if (mode == CoreCheckMode::kBruteForce && n > kMaxBruteForcePlayers) {
    throw Error(ErrorCode::kTooLarge, "brute-force core check limited to " +
                                          std::to_string(kMaxBruteForcePlayers) + " nodes");
  }

  CoreVerdict verdict;
  for (NodeIndex i = 0; i < n; ++i) {
    if (payoffs[i] < -slack) {
      verdict.witness = {i};
      verdict.coalition_payoff = payoffs[i];
      verdict.reason = "negative payoff";
      return verdict;
    }
  }
  const double total = std::accumulate(payoffs.begin(), payoffs.end(), 0.0);
  if (std::abs(total - game.GrandValue()) > slack) {
    verdict.witness.resize(n);
    std::iota(verdict.witness.begin(), verdict.witness.end(), NodeIndex{0});
    verdict.coalition_value = game.GrandValue();
    verdict.coalition_payoff = total;
    verdict.reason = "payoffs do not sum to the grand coalition value";
    return verdict;
  }

  // Keep the most violated constraint; ties go to the first one found.
  double worst = slack;
  auto consider = [&](std::vector<NodeIndex> coalition, double value, double payoff) {
    if (value - payoff > worst) {
      worst = value - payoff;
      verdict.witness = std::move(coalition);
      verdict.coalition_value = value;
      verdict.coalition_payoff = payoff;
    }
  };
  if (mode == CoreCheckMode::kPaths) {
    for (NodeIndex leaf : tree.leaves()) {
      std::vector<NodeIndex> path = PathToRoot(tree, leaf);
      double payoff = 0.0;
      for (NodeIndex node : path) payoff += payoffs[node];
      std::sort(path.begin(), path.end());
      consider(std::move(path), tree.value(leaf), payoff);
    }
  } else {
    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t mask = 1; mask < count; ++mask) {
      const double value = game.Value(mask);
      if (value == 0.0) continue;
      const double payoff = PayoffOf(mask, payoffs);
      if (value - payoff > worst) consider(MembersOf(mask), value, payoff);
    }
  }
  verdict.in_core = verdict.witness.empty();
  verdict.reason = verdict.in_core ? "in core" : "coalition can do better on its own";
  return verdict;
}

MonotonicityProbe ProbeMonotonicity(const PathInstance& path, std::size_t i, double delta) {
  if (i == 0 || i > path.edges()) {
    throw Error(ErrorCode::kInvalidPerturbation,
                "node index must be in [1, " + std::to_string(path.edges()) + "]");
  }
  if (!(delta >= 0.0) || !(path[i] + delta < path.best_value())) {
    throw Error(ErrorCode::kInvalidPerturbation, "raised value must stay below d0");
  }
  std::vector<double> raised(path.values().begin(), path.values().end());
  raised[i] += delta;
  MonotonicityProbe probe;
  probe.payoff_before = SolveFixedPoint(path).u[i];
  probe.payoff_after = SolveFixedPoint(PathInstance(std::move(raised))).u[i];
  return probe;
}

ShapleyResult Shapley(const CoalitionGame& game) {
  const std::size_t n = game.players();
  if (n > kMaxExactShapleyPlayers) {
    throw Error(ErrorCode::kTooLarge, "exact Shapley value limited to " +
                                          std::to_string(kMaxExactShapleyPlayers) + " players");
  }
  const std::vector<double> table = ValueTable(game);
  // Share of player orders in which exactly the players of a size-s
  // coalition precede a given player: s! (n - s - 1)! / n!.
  std::vector<double> weight(n);
  for (std::size_t s = 0; s < n; ++s) {
    double w = 1.0 / static_cast<double>(n);
    for (std::size_t k = 1; k <= s; ++k) {
      w *= static_cast<double>(k) / static_cast<double>(n - k);
    }
    weight[s] = w;
  }
  ShapleyResult result;
  result.values.assign(n, 0.0);
  result.standard_errors.assign(n, 0.0);
  for (std::uint64_t mask = 0; mask < table.size(); ++mask) {
    const std::size_t size = static_cast<std::size_t>(std::popcount(mask));
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint64_t bit = std::uint64_t{1} << i;
      if (mask & bit) continue;
      result.values[i] += weight[size] * (table[mask | bit] - table[mask]);
    }
  }
  return result;
}

ShapleyResult SampledShapley(const CoalitionGame& game, std::size_t samples, Rng& rng) {
  const std::size_t n = game.players();
  if (n > kMaxSampledShapleyPlayers) {
    throw Error(ErrorCode::kTooLarge, "sampled Shapley value limited to " +
                                          std::to_string(kMaxSampledShapleyPlayers) + " players");
  }
  if (samples < 2) throw Error(ErrorCode::kInvalidConfig, "need at least two samples");
  std::vector<double> sum(n, 0.0);
  std::vector<double> sum_sq(n, 0.0);
  std::vector<NodeIndex> order(n);
  for (std::size_t s = 0; s < samples; ++s) {
    std::iota(order.begin(), order.end(), NodeIndex{0});
    rng.Shuffle(std::span<NodeIndex>(order));
    std::uint64_t mask = 0;
    double before = 0.0;
    for (NodeIndex player : order) {
      mask |= std::uint64_t{1} << player;
      const double after = game.Value(mask);
      const double marginal = after - before;
      sum[player] += marginal;
      sum_sq[player] += marginal * marginal;
      before = after;
    }
  }
  ShapleyResult result;
  result.samples = samples;
  const double m = static_cast<double>(samples);
  for (std::size_t i = 0; i < n; ++i) {
    const double mean = sum[i] / m;
    const double variance = std::max(0.0, (sum_sq[i] - m * mean * mean) / (m - 1.0));
    result.values.push_back(mean);
    result.standard_errors.push_back(std::sqrt(variance / m));
  }
  return result;
}

std::vector<double> Nucleolus3(const PathInstance& path) {
  if (path.edges() != 2) {
    throw Error(ErrorCode::kUnsupported, "nucleolus is only implemented for two-edge paths");
  }
  const double d0 = path[0];
  const double d1 = path[1];
  const double d2 = path[2];
  // Worth of each proper coalition of {0, 1, 2}; bit i = player i. A coalition
  // earns d_i when it holds the whole chain i..2.
  std::array<double, 7> worth{};
  for (unsigned mask = 1; mask < 7; ++mask) {
    double v = 0.0;
    if (mask & 4U) v = d2;
    if ((mask & 6U) == 6U) v = std::max(v, d1);
    worth[mask] = v;
  }

  auto sorted_excess = [&](double u0, double u1) {
    const double u[3] = {u0, u1, d0 - u0 - u1};
    std::array<double, 6> e{};
    for (unsigned mask = 1; mask < 7; ++mask) {
      double paid = 0.0;
      for (unsigned i = 0; i < 3; ++i) {
        if (mask >> i & 1U) paid += u[i];
      }
      e[mask - 1] = worth[mask] - paid;
    }
    std::sort(e.begin(), e.end(), std::greater<>());
    return e;
  };
  const double tie = 1e-12 * d0;
  auto lex_less = [&](const std::array<double, 6>& a, const std::array<double, 6>& b) {
    for (std::size_t k = 0; k < a.size(); ++k) {
      if (a[k] < b[k] - tie) return true;
      if (a[k] > b[k] + tie) return false;
    }
    return false;
  };

  constexpr int kHalfSteps = 20;
  constexpr int kPasses = 60;
  double c0 = d0 / 3.0;
  double c1 = d0 / 3.0;
  double half_width = d0;
  for (int pass = 0; pass < kPasses; ++pass) {
    const double step = half_width / kHalfSteps;
    double best0 = c0;
    double best1 = c1;
    std::array<double, 6> best = sorted_excess(c0, c1);
    for (int a = -kHalfSteps; a <= kHalfSteps; ++a) {
      for (int b = -kHalfSteps; b <= kHalfSteps; ++b) {
        const double u0 = c0 + a * step;
        const double u1 = c1 + b * step;
        if (u0 < 0.0 || u1 < 0.0 || u0 + u1 > d0) continue;
        const std::array<double, 6> e = sorted_excess(u0, u1);
        if (lex_less(e, best)) {
          best = e;
          best0 = u0;
          best1 = u1;
        }
      }
    }
    c0 = best0;
    c1 = best1;
    half_width *= 0.5;
  }
  return {c0, c1, d0 - c0 - c1};
}

NashVariantResult NashVariantSolve(const TreeInstance& tree) {
  ShareAssignment shares(tree, 1.0);
  std::vector<double> flows(tree.size(), 0.0);
  for (NodeIndex node : tree.post_order()) {
    if (tree.is_leaf(node)) {
      flows[node] = tree.value(node);
      continue;
    }
    NodeIndex winner = kNoNode;
    for (NodeIndex child : tree.children(node)) {
      if (winner == kNoNode || flows[child] > flows[winner]) winner = child;
    }
    double runner_up = 0.0;
    for (NodeIndex child : tree.children(node)) {
      if (child != winner) runner_up = std::max(runner_up, flows[child]);
    }
    const double w = flows[winner];
    const double share = w > 0.0 ? 0.5 + runner_up / (2.0 * w) : 1.0;
    shares.Set(winner, share);
    flows[node] = std::max(share * w, runner_up);
  }
  Outcome outcome = ComputeFlow(tree, shares);
  return NashVariantResult{std::move(shares), std::move(outcome)};
}

}  // namespace treebargain
