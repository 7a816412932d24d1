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

#include "treebargain/dynamics.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "treebargain/error.h"
#include "treebargain/format.h"
#include "treebargain/generators.h"
#include "treebargain/reduction.h"

namespace treebargain {
namespace {

// Root of (1 - x) w = (1 - p)(max(other, x w) - other) on [0, 1]. The left
// side falls strictly from w to 0, the right side is nondecreasing, so the
// difference changes sign exactly once when w > 0.
double SolveEdgeEquation(double w, double other, double parent_share, double tolerance) {
  if (!(w > 0.0)) return 1.0;
  const double keep = 1.0 - parent_share;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > tolerance) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid == lo || mid == hi) break;  // tolerance below one ulp
    const double gap = (1.0 - mid) * w - keep * (std::max(other, mid * w) - other);
    if (gap > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo + 0.5 * (hi - lo);
}

double BestOffer(const TreeInstance& tree, const ShareAssignment& shares,
                 std::span<const double> flows, NodeIndex node) {
  double best = 0.0;
  for (NodeIndex child : tree.children(node)) best = std::max(best, shares[child] * flows[child]);
  return best;
}

}  // namespace

double RenegotiateEdge(const TreeInstance& tree, const ShareAssignment& shares,
                       NodeIndex child, double tolerance) {
  if (child == tree.root() || child >= tree.size()) {
    throw Error(ErrorCode::kInvalidInstance, "node has no parent edge");
  }
  const Outcome outcome = ComputeFlow(tree, shares);
  const NodeIndex parent = tree.parent(child);
  return SolveEdgeEquation(outcome.flows[child],
                           OfferExcluding(tree, shares, outcome.flows, parent, child),
                           shares.Upward(parent), tolerance);
}

AsyncDynamics::AsyncDynamics(const TreeInstance& tree, ShareAssignment shares, double tolerance)
    : tree_(tree), shares_(std::move(shares)), tolerance_(tolerance) {
  flows_ = ComputeFlow(tree_, shares_).flows;
  for (NodeIndex node = 0; node < tree_.size(); ++node) {
    if (node != tree_.root()) edges_.push_back(node);
  }
}

double AsyncDynamics::UpdateEdge(NodeIndex child) {
  const NodeIndex parent = tree_.parent(child);
  const double share =
      SolveEdgeEquation(flows_[child], OfferExcluding(tree_, shares_, flows_, parent, child),
                        shares_.Upward(parent), tolerance_);
  shares_.Set(child, share);
  RefreshAncestors(parent);
  return share;
}

void AsyncDynamics::RefreshAncestors(NodeIndex node) {
  for (NodeIndex at = node; at != kNoNode; at = tree_.parent(at)) {
    const double updated = BestOffer(tree_, shares_, flows_, at);
    if (updated == flows_[at]) return;
    flows_[at] = updated;
  }
}

void AsyncDynamics::RunRound(Rng& rng) {
  rng.Shuffle(std::span<NodeIndex>(edges_));
  for (NodeIndex child : edges_) UpdateEdge(child);
  // Keep the next round's shuffle independent of this round's order.
  std::sort(edges_.begin(), edges_.end());
}

void RunRound(const TreeInstance& tree, ShareAssignment& shares, Rng& rng, double tolerance) {
  AsyncDynamics dynamics(tree, shares, tolerance);
  dynamics.RunRound(rng);
  shares = dynamics.shares();
}

void DynamicsConfig::Validate() const {
  auto invalid = [](const std::string& message) {
    throw Error(ErrorCode::kInvalidConfig, message);
  };
  if (!(init_share > 0.0 && init_share <= 1.0)) invalid("init_share must lie in (0, 1]");
  if (!(per_edge_tolerance > 0.0)) invalid("per_edge_tolerance must be positive");
  if (tries == 0) invalid("tries must be positive");
  if (max_rounds == 0) invalid("max_rounds must be positive");
  if (target_accuracies.empty()) invalid("target_accuracies must not be empty");
  for (double a : target_accuracies) {
    if (!(a > 0.0) || !std::isfinite(a)) invalid("accuracies must be positive and finite");
  }
  if (!tree && depth == 0) invalid("depth must be at least 1");
  if (bids == BidDistribution::kFixed && !tree) invalid("fixed bids need an explicit tree");
}

double MaxNormDistance(const ShareAssignment& a, const ShareAssignment& b, NodeIndex root) {
  double worst = 0.0;
  for (NodeIndex node = 0; node < a.size(); ++node) {
    if (node != root) worst = std::max(worst, std::abs(a[node] - b[node]));
  }
  return worst;
}

DynamicsTrace RunTry(const TreeInstance& tree, const ShareAssignment& reference,
                     const DynamicsConfig& config, std::span<const double> accuracies,
                     Rng& rng) {
  DynamicsTrace trace;
  trace.rounds_to_accuracy.assign(accuracies.size(), std::nullopt);
  const double target = *std::min_element(accuracies.begin(), accuracies.end());

  AsyncDynamics dynamics(tree, ShareAssignment(tree, config.init_share),
                         config.per_edge_tolerance);
  auto observe = [&](std::size_t round) {
    const double distance = MaxNormDistance(dynamics.shares(), reference, tree.root());
    trace.per_round_distance.push_back(distance);
    for (std::size_t k = 0; k < accuracies.size(); ++k) {
      if (!trace.rounds_to_accuracy[k] && distance <= accuracies[k]) {
        trace.rounds_to_accuracy[k] = round;
      }
    }
    return distance <= target;
  };

  trace.converged = observe(0);
  for (std::size_t round = 1; round <= config.max_rounds && !trace.converged; ++round) {
    dynamics.RunRound(rng);
    trace.converged = observe(round);
  }
  return trace;
}

ExperimentResult RunExperiment(const DynamicsConfig& config) {
  config.Validate();
  ExperimentResult result;
  result.accuracies = config.target_accuracies;
  std::sort(result.accuracies.begin(), result.accuracies.end(), std::greater<>());
  result.accuracies.erase(std::unique(result.accuracies.begin(), result.accuracies.end()),
                          result.accuracies.end());

  const TreeInstance topology = [&] {
    if (config.tree) return *config.tree;
    // Values are placeholders; every try redraws them.
    std::vector<double> ones(std::size_t{1} << config.depth, 1.0);
    return BalancedBinaryTree(config.depth, ones);
  }();
  result.edges = topology.edge_count();
  result.traces.resize(config.tries);

  auto run_one = [&](std::size_t index) {
    Rng rng(DeriveSeed(config.seed, index));
    TreeInstance instance = config.bids == BidDistribution::kLognormal
                                ? ResampleValues(topology, rng, ValueDistribution::kLognormal)
                                : topology;
    instance = Prune(instance);
    const TreeSolution reference = SolveTree(instance);
    result.traces[index] = RunTry(instance, reference.shares, config, result.accuracies, rng);
  };

  const std::size_t workers = std::clamp<std::size_t>(config.threads, 1, config.tries);
  if (workers == 1) {
    for (std::size_t i = 0; i < config.tries; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < config.tries; i = next++) run_one(i);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (std::thread& th : pool) th.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  result.all_converged = std::all_of(result.traces.begin(), result.traces.end(),
                                     [](const DynamicsTrace& t) { return t.converged; });
  for (std::size_t k = 0; k < result.accuracies.size(); ++k) {
    AccuracyRow row;
    row.accuracy = result.accuracies[k];
    row.tries = config.tries;
    double total = 0.0;
    std::size_t reached = 0;
    for (const DynamicsTrace& trace : result.traces) {
      if (trace.rounds_to_accuracy[k]) {
        total += static_cast<double>(*trace.rounds_to_accuracy[k]);
        ++reached;
      }
    }
    row.mean_rounds = reached ? total / static_cast<double>(reached)
                              : std::numeric_limits<double>::quiet_NaN();
    row.converged_fraction = static_cast<double>(reached) / static_cast<double>(config.tries);
    result.rows.push_back(row);
  }
  return result;
}

void WriteExperimentCsv(const ExperimentResult& result, std::ostream& out) {
  out << "accuracy,mean_rounds,tries,converged_fraction\n";
  for (const AccuracyRow& row : result.rows) {
    out << FormatDouble(row.accuracy) << ',' << FormatDouble(row.mean_rounds) << ','
        << row.tries << ',' << FormatDouble(row.converged_fraction) << '\n';
  }
}

void WriteTraceCsv(const ExperimentResult& result, std::ostream& out) {
  out << "try,round,distance\n";
  for (std::size_t t = 0; t < result.traces.size(); ++t) {
    const std::vector<double>& distances = result.traces[t].per_round_distance;
    for (std::size_t r = 0; r < distances.size(); ++r) {
      out << t << ',' << r << ',' << FormatDouble(distances[r]) << '\n';
    }
  }
}

}  // namespace treebargain
