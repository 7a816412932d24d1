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

#include "treebargain/path_solver.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "treebargain/error.h"

namespace treebargain {
namespace {

constexpr double kMachineEpsilon = std::numeric_limits<double>::epsilon();
// Below this, gamma^(4n+1) carries no usable information in double precision.
constexpr double kRepresentableFloor = 1e-300;

// Normalized d_i (d0 = 1).
double Scaled(const PathInstance& instance, std::size_t i) {
  return instance[i] / instance.best_value();
}

// Top-down parameterization by the seller's flow t = w_n: with x_{n+1} = 0,
// w_{i-1} = w_i + (1 - x_{i+1}) (w_i - d_i) and x_i = w_i / w_{i-1}. Errors
// shrink in this direction, where the upward sweep amplifies them.
struct Descent {
  bool feasible = false;
  std::vector<double> x;
  double w0 = 0.0;
};

Descent Descend(double t, const PathInstance& normalized) {
  const std::size_t n = normalized.edges();
  Descent result;
  result.x.assign(n, 0.0);
  double w = t;
  double x_next = 0.0;
  for (std::size_t i = n; i >= 1; --i) {
    const double gap = w - Scaled(normalized, i);
    if (!(gap > 0.0)) return result;
    const double w_prev = w + (1.0 - x_next) * gap;
    result.x[i - 1] = w / w_prev;
    x_next = result.x[i - 1];
    w = w_prev;
  }
  result.feasible = true;
  result.w0 = w;
  return result;
}

// Bisects t until w_0(t) = 1 to full precision. Empty if no feasible t found.
std::optional<std::vector<double>> RefineTopDown(const PathInstance& normalized) {
  const std::size_t n = normalized.edges();
  double lo = Scaled(normalized, n);
  double hi = 1.0;
  std::optional<Descent> best;
  auto consider = [&](const Descent& d) {
    if (d.feasible && (!best || std::abs(d.w0 - 1.0) < std::abs(best->w0 - 1.0))) best = d;
  };
  consider(Descend(hi, normalized));
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid == lo || mid == hi) break;
    const Descent d = Descend(mid, normalized);
    consider(d);
    if (!d.feasible || d.w0 < 1.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (!best) return std::nullopt;
  return best->x;
}

double MaxOf(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

PathInstance::PathInstance(std::vector<double> d) : d_(std::move(d)) {
  if (d_.empty()) throw Error(ErrorCode::kInvalidInstance, "empty value vector");
  if (!(d_[0] > 0.0) || !std::isfinite(d_[0])) {
    throw Error(ErrorCode::kInvalidInstance, "d0 must be positive and finite");
  }
  for (std::size_t i = 1; i < d_.size(); ++i) {
    if (!(d_[i] >= 0.0) || !(d_[i] < d_[0])) {
      std::ostringstream msg;
      msg << "d" << i << " = " << d_[i] << " must lie in [0, d0 = " << d_[0] << ")";
      throw Error(ErrorCode::kInvalidInstance, msg.str());
    }
  }
}

PathInstance PathInstance::Normalized() const {
  std::vector<double> scaled(d_.size());
  for (std::size_t i = 0; i < d_.size(); ++i) scaled[i] = d_[i] / d_[0];
  scaled[0] = 1.0;
  return PathInstance(std::move(scaled));
}

SweepResult UpwardSweep(double x1, const PathInstance& normalized) {
  const std::size_t n = normalized.edges();
  SweepResult result;
  result.w.push_back(1.0);
  auto fail = [&](std::size_t index, const char* why) {
    result.feasible = false;
    result.violation_index = index;
    result.violation = why;
    return result;
  };
  if (n == 0) {
    result.feasible = true;
    return result;
  }

  if (!(x1 >= 0.0 && x1 <= 1.0)) return fail(1, "share outside [0, 1]");
  result.x.push_back(x1);
  result.w.push_back(x1);
  if (!(result.w[1] > Scaled(normalized, 1))) return fail(1, "flow not above outside option");

  for (std::size_t i = 1; i < n; ++i) {
    const double x_i = result.x[i - 1];
    const double w_prev = result.w[i - 1];
    const double w_i = result.w[i];
    // (1 - x_i) w_{i-1} avoids the cancellation in w_{i-1} - w_i.
    const double next = 1.0 - (1.0 - x_i) * w_prev / (w_i - Scaled(normalized, i));
    if (!(next >= 0.0 && next <= 1.0)) return fail(i + 1, "share outside [0, 1]");
    result.x.push_back(next);
    result.w.push_back(w_i * next);
    if (!(result.w[i + 1] > Scaled(normalized, i + 1))) {
      return fail(i + 1, "flow not above outside option");
    }
  }
  result.feasible = true;
  return result;
}

double DownwardCurve(double x1, const PathInstance& normalized) {
  const std::size_t n = normalized.edges();
  if (n == 0) throw Error(ErrorCode::kInfeasiblePoint, "path has no edges");
  const SweepResult sweep = UpwardSweep(x1, normalized);
  if (!sweep.feasible) {
    throw Error(ErrorCode::kInfeasiblePoint,
                "x1 = " + std::to_string(x1) + " is infeasible: " + sweep.violation);
  }
  return 0.5 + Scaled(normalized, n) / (2.0 * sweep.w[n - 1]);
}

double Gamma(const PathInstance& instance) {
  const std::size_t n = instance.edges();
  double max_outside = 0.0;
  for (std::size_t i = 1; i <= n; ++i) max_outside = std::max(max_outside, Scaled(instance, i));
  return std::min(1.0 - max_outside, 1.0 / static_cast<double>(n + 2));
}

FixedPointSolution SolveFixedPoint(const PathInstance& instance, double search_tolerance) {
  if (!(search_tolerance > 0.0)) {
    throw Error(ErrorCode::kInvalidInstance, "search tolerance must be positive");
  }
  const PathInstance normalized = instance.Normalized();
  const std::size_t n = normalized.edges();
  const double scale = instance.best_value();

  FixedPointSolution solution;
  solution.diagnostics.gamma = Gamma(normalized);
  solution.diagnostics.normalized = true;

  std::vector<double> w(1, 1.0);
  if (n == 1) {
    const double x1 = 0.5 * (1.0 + normalized[1]);
    solution.x = {x1};
    w.push_back(x1);
  } else if (n >= 2) {
    double lo = 0.0;
    double hi = 1.0;
    const double width = std::max(search_tolerance, 4.0 * kMachineEpsilon);
    while (hi - lo > width) {
      const double mid = lo + 0.5 * (hi - lo);
      ++solution.iterations;
      const SweepResult sweep = UpwardSweep(mid, normalized);
      if (!sweep.feasible) {
        lo = mid;
        continue;
      }
      const double downward = 0.5 + normalized[n] / (2.0 * sweep.w[n - 1]);
      if (sweep.x[n - 1] > downward) {
        hi = mid;
      } else {
        lo = mid;
      }
    }
    solution.diagnostics.binary_search_interval_width = hi - lo;
    // hi starts at the all-ones point and only ever moves to feasible points.
    SweepResult final_sweep = UpwardSweep(hi, normalized);
    if (!final_sweep.feasible) {
      throw Error(ErrorCode::kInfeasiblePoint, "right endpoint became infeasible");
    }
    solution.x = std::move(final_sweep.x);
    w = std::move(final_sweep.w);

    // The upward sweep magnifies the last bits of x1 by as much as 1e10 on
    // instances with outside options near d0; keep whichever of the two
    // candidates satisfies the equations better.
    if (std::optional<std::vector<double>> refined = RefineTopDown(normalized)) {
      if (MaxOf(PathResiduals(*refined, normalized)) <
          MaxOf(PathResiduals(solution.x, normalized))) {
        solution.x = std::move(*refined);
        for (std::size_t i = 1; i <= n; ++i) w[i] = w[i - 1] * solution.x[i - 1];
        solution.diagnostics.refined = true;
      }
    }
  }

  solution.w.resize(n + 1);
  solution.u.resize(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double keep = i < n ? 1.0 - solution.x[i] : 1.0;
    solution.w[i] = w[i] * scale;
    solution.u[i] = keep * w[i] * scale;
  }
  solution.max_residual = n == 0 ? 0.0 : MaxOf(PathResiduals(solution.x, normalized));
  return solution;
}

std::vector<double> PathResiduals(std::span<const double> x, const PathInstance& instance) {
  const std::size_t n = instance.edges();
  if (x.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(n) + " shares, got " + std::to_string(x.size()));
  }
  std::vector<double> residuals(n);
  double w_prev = 1.0;
  for (std::size_t i = 1; i <= n; ++i) {
    const double x_i = x[i - 1];
    const double x_next = i < n ? x[i] : 0.0;
    const double child_gain = (1.0 - x_i) * w_prev;
    const double parent_gain = (1.0 - x_next) * (x_i * w_prev - Scaled(instance, i));
    residuals[i - 1] = std::abs(child_gain - parent_gain);
    w_prev *= x_i;
  }
  return residuals;
}

void BoundsReport::ThrowIfViolated() const {
  if (violations.empty()) return;
  const BoundViolation& v = violations.front();
  std::ostringstream msg;
  msg << v.bound << " violated at index " << v.index << " by " << -v.margin;
  throw Error(ErrorCode::kBoundViolation, msg.str());
}

BoundsReport CheckTheoreticalBounds(const FixedPointSolution& solution,
                                    const PathInstance& instance, double slack) {
  const std::size_t n = instance.edges();
  if (solution.x.size() != n || solution.w.size() != n + 1) {
    throw Error(ErrorCode::kDimensionMismatch, "solution does not match instance");
  }
  BoundsReport report;
  report.gamma = Gamma(instance);
  const double scale = instance.best_value();
  const double nn = static_cast<double>(n);
  const double gamma_4n = std::pow(report.gamma, 4.0 * nn);
  const double gamma_4n1 = std::pow(report.gamma, 4.0 * nn + 1.0);
  report.upper_bounds_checked = gamma_4n1 > kRepresentableFloor;

  auto record = [&](std::size_t i, const char* bound, double margin) {
    if (margin < 0.0) report.violations.push_back({i, bound, margin});
  };
  for (std::size_t i = 1; i <= n; ++i) {
    const double di = static_cast<double>(i);
    const double x_i = solution.x[i - 1];
    const double w_i = solution.w[i] / scale;
    record(i, "x_i >= (n-i+1)/(n-i+2)", x_i - (nn - di + 1.0) / (nn - di + 2.0) + slack);
    record(i, "w_i >= (n-i+1)/(n+1)", w_i - (nn - di + 1.0) / (nn + 1.0) + slack);
    if (report.upper_bounds_checked) {
      record(i, "x_i <= 1 - gamma^(4n)", (1.0 - gamma_4n) - x_i);
      record(i, "w_i >= d_i + gamma^(4n+1)", w_i - (Scaled(instance, i) + gamma_4n1));
    }
  }
  return report;
}

}  // namespace treebargain
