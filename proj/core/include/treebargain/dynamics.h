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

#ifndef TREEBARGAIN_DYNAMICS_H_
#define TREEBARGAIN_DYNAMICS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <vector>

#include "treebargain/flow.h"
#include "treebargain/random.h"
#include "treebargain/tree.h"

namespace treebargain {

inline constexpr double kDefaultInitShare = 0.99;
inline constexpr double kDefaultEdgeTolerance = 1e-15;
inline constexpr std::size_t kDefaultMaxRounds = 10000;

// Solves the bargaining equation of the edge above `child` with every other
// share frozen, by bisection on [0, 1] down to `tolerance`. Returns 1 when
// nothing reaches the child.
double RenegotiateEdge(const TreeInstance& tree, const ShareAssignment& shares,
                       NodeIndex child, double tolerance = kDefaultEdgeTolerance);

// Asynchronous renegotiation state: a share assignment plus the flows it
// induces, kept current as single edges change (only ancestors of an updated
// edge are recomputed). `tree` must outlive the simulator.
class AsyncDynamics {
 public:
  AsyncDynamics(const TreeInstance& tree, ShareAssignment shares,
                double tolerance = kDefaultEdgeTolerance);

  const ShareAssignment& shares() const { return shares_; }
  std::span<const double> flows() const { return flows_; }

  // Renegotiates one edge and returns its new share.
  double UpdateEdge(NodeIndex child);
  // One round: every edge once, in a fresh uniformly random order.
  void RunRound(Rng& rng);

 private:
  void RefreshAncestors(NodeIndex node);

  const TreeInstance& tree_;
  ShareAssignment shares_;
  std::vector<double> flows_;
  std::vector<NodeIndex> edges_;
  double tolerance_;
};

// Free-function form of a single round.
void RunRound(const TreeInstance& tree, ShareAssignment& shares, Rng& rng,
              double tolerance = kDefaultEdgeTolerance);

enum class BidDistribution {
  kLognormal,  // leaves redrawn every try from exp(1 + N(0, 1))
  kFixed,      // the explicit tree's own values, every try
};

struct DynamicsConfig {
  // Explicit topology; when absent a balanced binary tree of `depth` is used.
  std::optional<TreeInstance> tree;
  std::size_t depth = 4;
  BidDistribution bids = BidDistribution::kLognormal;
  std::size_t tries = 100;
  double init_share = kDefaultInitShare;
  double per_edge_tolerance = kDefaultEdgeTolerance;
  std::size_t max_rounds = kDefaultMaxRounds;
  std::vector<double> target_accuracies{1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  // Throws Error(kInvalidConfig).
  void Validate() const;
};

struct DynamicsTrace {
  // Max-norm distance to the reference fixed point; entry 0 is the initial
  // state, entry r the state after round r.
  std::vector<double> per_round_distance;
  // Parallel to the experiment's accuracy list (sorted loosest first).
  std::vector<std::optional<std::size_t>> rounds_to_accuracy;
  bool converged = false;
};

struct AccuracyRow {
  double accuracy = 0.0;
  // Mean over the tries that reached the accuracy; NaN if none did.
  double mean_rounds = 0.0;
  std::size_t tries = 0;
  double converged_fraction = 0.0;
};

struct ExperimentResult {
  std::vector<double> accuracies;  // loosest first
  std::vector<DynamicsTrace> traces;
  std::vector<AccuracyRow> rows;
  std::size_t edges = 0;
  bool all_converged = false;
};

// One try: shares start at init_share and rounds run until the distance to
// `reference` drops below the tightest accuracy or max_rounds is spent.
DynamicsTrace RunTry(const TreeInstance& tree, const ShareAssignment& reference,
                     const DynamicsConfig& config, std::span<const double> accuracies,
                     Rng& rng);

// Tries are independent; try k draws from Rng(DeriveSeed(seed, k)), so the
// result does not depend on the thread count.
ExperimentResult RunExperiment(const DynamicsConfig& config);

double MaxNormDistance(const ShareAssignment& a, const ShareAssignment& b, NodeIndex root);

// `accuracy,mean_rounds,tries,converged_fraction`, one row per accuracy.
void WriteExperimentCsv(const ExperimentResult& result, std::ostream& out);
// `try,round,distance`.
void WriteTraceCsv(const ExperimentResult& result, std::ostream& out);

}  // namespace treebargain

#endif  // TREEBARGAIN_DYNAMICS_H_
