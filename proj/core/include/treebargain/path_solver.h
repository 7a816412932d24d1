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

#ifndef TREEBARGAIN_PATH_SOLVER_H_
#define TREEBARGAIN_PATH_SOLVER_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace treebargain {

// Path bargaining instance. Node 0 is the collapsed best buyer with value
// d[0]; node i >= 1 is the i-th node up the path, whose outside option is
// d[i]. The root is node n = d.size() - 1.
class PathInstance {
 public:
  // Throws Error(kInvalidInstance) unless d0 > 0 and 0 <= d_i < d0.
  explicit PathInstance(std::vector<double> d);

  std::size_t edges() const { return d_.size() - 1; }
  double best_value() const { return d_.front(); }
  double operator[](std::size_t i) const { return d_[i]; }
  std::span<const double> values() const { return d_; }

  // Same instance divided through by d0.
  PathInstance Normalized() const;

 private:
  std::vector<double> d_;
};

// Upward sweep from a trial x1 on a normalized instance (d0 = 1).
// x[k] holds x_{k+1}; w[i] = prod_{j<=i} x_j with w[0] = 1.
struct SweepResult {
  std::vector<double> x;
  std::vector<double> w;
  bool feasible = false;
  // Set when infeasible: the 1-based edge or node index that failed.
  std::optional<std::size_t> violation_index;
  std::string violation;
};

SweepResult UpwardSweep(double x1, const PathInstance& normalized);

// x_n on the downward curve, 1/2 + d_n / (2 w_{n-1}), evaluated from the
// upward sweep at x1. Throws Error(kInfeasiblePoint) when x1 is infeasible.
double DownwardCurve(double x1, const PathInstance& normalized);

struct SolverDiagnostics {
  // min{1 - max_{i>0} d_i, 1/(n+2)} on the normalized instance.
  double gamma = 0.5;
  bool normalized = true;
  double binary_search_interval_width = 0.0;
  // True when the reported shares come from the top-down refinement rather
  // than the final binary search point.
  bool refined = false;
};

struct FixedPointSolution {
  // x[k] is the share on edge e_{k+1}.
  std::vector<double> x;
  // Flows in original units; w[0] = d0.
  std::vector<double> w;
  // Payoffs in original units; u[i] = (1 - x_{i+1}) w_i, u[n] = w_n.
  std::vector<double> u;
  // Largest per-edge residual on the normalized instance.
  double max_residual = 0.0;
  std::size_t iterations = 0;
  SolverDiagnostics diagnostics;
};

inline constexpr double kDefaultSearchTolerance = 1e-13;

double Gamma(const PathInstance& instance);

// Binary search on x1 for the crossing of the upward and downward curves.
// Closed forms for n = 0 (seller takes all) and n = 1.
FixedPointSolution SolveFixedPoint(const PathInstance& instance,
                                   double search_tolerance = kDefaultSearchTolerance);

// |(1 - x_i) w_{i-1} - (1 - x_{i+1})(x_i w_{i-1} - d_i)| per edge, with
// x_{n+1} = 0, on the normalized instance. Throws Error(kDimensionMismatch).
std::vector<double> PathResiduals(std::span<const double> x, const PathInstance& instance);

struct BoundViolation {
  // 1-based edge / node index.
  std::size_t index = 0;
  std::string bound;
  // Negative amount by which the bound failed.
  double margin = 0.0;
};

struct BoundsReport {
  double gamma = 0.0;
  // False when gamma^(4n+1) underflows and the upper bounds say nothing.
  bool upper_bounds_checked = false;
  std::vector<BoundViolation> violations;

  bool ok() const { return violations.empty(); }
  // Throws Error(kBoundViolation) describing the first violation.
  void ThrowIfViolated() const;
};

// Checks the a-priori bounds a fixed point must satisfy on the normalized
// instance: x_i >= (n-i+1)/(n-i+2), w_i >= (n-i+1)/(n+1), and, when
// representable, x_i <= 1 - gamma^(4n) and w_i >= d_i + gamma^(4n+1).
BoundsReport CheckTheoreticalBounds(const FixedPointSolution& solution,
                                    const PathInstance& instance,
                                    double slack = 1e-12);

}  // namespace treebargain

#endif  // TREEBARGAIN_PATH_SOLVER_H_
