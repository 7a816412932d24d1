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

#ifndef TREEBARGAIN_GAME_ANALYSIS_H_
#define TREEBARGAIN_GAME_ANALYSIS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "treebargain/flow.h"
#include "treebargain/path_solver.h"
#include "treebargain/random.h"
#include "treebargain/tree.h"

namespace treebargain {

// Cooperative game on the nodes of a trade tree: a coalition is worth the best
// buyer value among the root-to-leaf paths it contains entirely, 0 otherwise.
class CoalitionGame {
 public:
  // Keeps its own copy of the tree.
  explicit CoalitionGame(TreeInstance tree);

  const TreeInstance& tree() const { return tree_; }
  std::size_t players() const { return tree_.size(); }

  // `members[i]` says whether node i is in the coalition.
  double Value(const std::vector<bool>& members) const;
  // Bit i set means node i is in. Requires players() <= 64.
  double Value(std::uint64_t members) const;
  double GrandValue() const { return tree_.max_leaf_value(); }

  // Ancestor chain of each leaf as a bitmask (players() <= 64 only).
  std::span<const std::uint64_t> path_masks() const { return path_masks_; }

 private:
  TreeInstance tree_;
  std::vector<std::vector<NodeIndex>> leaf_paths_;
  std::vector<std::uint64_t> path_masks_;
};

enum class CoreCheckMode {
  kPaths,       // one constraint per root-to-leaf path
  kBruteForce,  // every coalition; at most kMaxBruteForcePlayers nodes
};

inline constexpr std::size_t kMaxBruteForcePlayers = 20;

struct CoreVerdict {
  bool in_core = false;
  // Blocking coalition (node indices) when not in the core. For an
  // efficiency failure this is the grand coalition.
  std::vector<NodeIndex> witness;
  double coalition_value = 0.0;
  double coalition_payoff = 0.0;
  std::string reason;
};

// Checks sum u = V(N), u >= 0 and every coalition constraint to within
// `slack`. Throws Error(kTooLarge) for brute force on too many nodes and
// Error(kDimensionMismatch) when `payoffs` has the wrong length.
CoreVerdict CheckCore(const CoalitionGame& game, std::span<const double> payoffs,
                      CoreCheckMode mode = CoreCheckMode::kPaths, double slack = 1e-9);

struct MonotonicityProbe {
  double payoff_before = 0.0;
  double payoff_after = 0.0;
  bool strictly_increased() const { return payoff_after > payoff_before; }
};

// Raises d_i by delta (i in 1..n) and reports u_i before and after. Throws
// Error(kInvalidPerturbation) if the raised value would reach d0 or delta is
// negative.
MonotonicityProbe ProbeMonotonicity(const PathInstance& path, std::size_t i, double delta);

inline constexpr std::size_t kMaxExactShapleyPlayers = 10;
inline constexpr std::size_t kMaxSampledShapleyPlayers = 20;

struct ShapleyResult {
  std::vector<double> values;
  // Zero for the exact computation.
  std::vector<double> standard_errors;
  std::size_t samples = 0;
};

// Exact average of marginal contributions over all player orders.
ShapleyResult Shapley(const CoalitionGame& game);
// Monte Carlo over `samples` uniformly random orders.
ShapleyResult SampledShapley(const CoalitionGame& game, std::size_t samples, Rng& rng);

// Nucleolus of the game on a three-node path (buyer 0, intermediary 1,
// seller 2, with outside options d1 and d2), found by lexicographic excess
// minimization over a successively refined payoff grid. Throws
// Error(kUnsupported) unless the path has exactly two edges.
std::vector<double> Nucleolus3(const PathInstance& path);

// Per-edge Nash bargaining ignoring the share above: at each parent the best
// child keeps half of its surplus over the runner-up, others pass everything.
struct NashVariantResult {
  ShareAssignment shares;
  Outcome outcome;
};

NashVariantResult NashVariantSolve(const TreeInstance& tree);

}  // namespace treebargain

#endif  // TREEBARGAIN_GAME_ANALYSIS_H_
