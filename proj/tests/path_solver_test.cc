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
#include <numeric>
#include <optional>
#include <vector>

#include "oracles/path_oracle.h"
#include "treebargain/error.h"
#include "treebargain/path_solver.h"
#include "treebargain/random.h"

namespace treebargain {
namespace {

PathInstance RandomPath(Rng& rng, std::size_t max_edges, double max_ratio) {
  const std::size_t n = 2 + rng.Below(max_edges - 1);
  std::vector<double> d{1.0};
  for (std::size_t i = 1; i <= n; ++i) d.push_back(max_ratio * rng.Uniform());
  return PathInstance(d);
}

TEST(PathInstanceTest, Validation) {
  EXPECT_THROW(PathInstance({0.0}), Error);
  EXPECT_THROW(PathInstance({1.0, 1.0}), Error);
  EXPECT_THROW(PathInstance({1.0, -0.1}), Error);
  EXPECT_THROW(PathInstance({}), Error);
  const PathInstance p({12.0, 6.0});
  EXPECT_EQ(p.edges(), 1u);
  EXPECT_DOUBLE_EQ(p.Normalized()[1], 0.5);
}

TEST(UpwardSweepTest, Examples) {
  const SweepResult a = UpwardSweep(2.0 / 3.0, PathInstance({1.0, 0.0, 0.0}));
  ASSERT_TRUE(a.feasible);
  EXPECT_NEAR(a.x[1], 0.5, 1e-15);

  const SweepResult b = UpwardSweep(1.0, PathInstance({1.0, 0.0}));
  ASSERT_TRUE(b.feasible);
  EXPECT_EQ(b.x, std::vector<double>{1.0});
  EXPECT_EQ(b.w, (std::vector<double>{1.0, 1.0}));

  const SweepResult c = UpwardSweep(0.5, PathInstance({1.0, 0.9}));
  EXPECT_FALSE(c.feasible);
  ASSERT_TRUE(c.violation_index.has_value());
  EXPECT_EQ(*c.violation_index, 1u);
}

TEST(UpwardSweepTest, AllOnesFeasible) {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    EXPECT_TRUE(UpwardSweep(1.0, RandomPath(rng, 20, 0.99)).feasible);
  }
}

TEST(DownwardCurveTest, Examples) {
  EXPECT_DOUBLE_EQ(DownwardCurve(2.0 / 3.0, PathInstance({1.0, 0.0, 0.0})), 0.5);
  EXPECT_DOUBLE_EQ(DownwardCurve(0.8, PathInstance({1.0, 0.5})), 0.75);
  EXPECT_NEAR(DownwardCurve(0.9, PathInstance({1.0, 0.4, 0.3})), 0.5 + 0.3 / 1.8, 1e-15);
  EXPECT_THROW(DownwardCurve(0.5, PathInstance({1.0, 0.9, 0.0})), Error);
}

TEST(SolveFixedPointTest, ClosedForms) {
  const FixedPointSolution seller = SolveFixedPoint(PathInstance({7.0}));
  EXPECT_TRUE(seller.x.empty());
  EXPECT_EQ(seller.u, std::vector<double>{7.0});

  const FixedPointSolution half = SolveFixedPoint(PathInstance({1.0, 0.0}));
  EXPECT_EQ(half.x, std::vector<double>{0.5});
  EXPECT_EQ(half.u, (std::vector<double>{0.5, 0.5}));
  EXPECT_EQ(half.max_residual, 0.0);

  const FixedPointSolution twelve = SolveFixedPoint(PathInstance({12.0, 6.0}));
  EXPECT_EQ(twelve.x, std::vector<double>{0.75});
  EXPECT_DOUBLE_EQ(twelve.u[0], 3.0);
  EXPECT_DOUBLE_EQ(twelve.u[1], 9.0);
}

TEST(SolveFixedPointTest, ZeroDisagreementRecursion) {
  for (std::size_t n = 2; n <= 64; ++n) {
    std::vector<double> d(n + 1, 0.0);
    d[0] = 1.0;
    const FixedPointSolution sol = SolveFixedPoint(PathInstance(d));
    for (std::size_t i = 1; i <= n; ++i) {
      const double expected = static_cast<double>(n - i + 1) / static_cast<double>(n - i + 2);
      EXPECT_NEAR(sol.x[i - 1], expected, 1e-10) << "n=" << n << " i=" << i;
    }
    for (double u : sol.u) EXPECT_NEAR(u, 1.0 / static_cast<double>(n + 1), 1e-10);
  }
}

TEST(SolveFixedPointTest, FixtureC) {
  const PathInstance inst({10.0, 4.0, 3.0});
  const FixedPointSolution sol = SolveFixedPoint(inst);
  EXPECT_LE(sol.max_residual, 1e-9);
  const oracle::Result ref = oracle::Solve({10.0, 4.0, 3.0});
  ASSERT_EQ(ref.x.size(), 2u);
  EXPECT_NEAR(sol.x[0], static_cast<double>(ref.x[0]), 1e-10);
  EXPECT_NEAR(sol.x[1], static_cast<double>(ref.x[1]), 1e-10);
  const double total = std::accumulate(sol.u.begin(), sol.u.end(), 0.0);
  EXPECT_NEAR(total, 10.0, 1e-12 * 3 * 10.0);
}

TEST(SolveFixedPointTest, MatchesOracle) {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    const PathInstance inst = RandomPath(rng, 16, 0.99);
    const FixedPointSolution sol = SolveFixedPoint(inst);
    std::vector<double> d(inst.values().begin(), inst.values().end());
    const oracle::Result ref = oracle::Solve(d);
    EXPECT_LE(ref.rising_crossings, 1);
    EXPECT_EQ(ref.falling_crossings, 0);
    ASSERT_EQ(ref.x.size(), sol.x.size());
    for (std::size_t i = 0; i < sol.x.size(); ++i) {
      EXPECT_NEAR(sol.x[i], static_cast<double>(ref.x[i]), 1e-8) << "trial " << trial;
    }
    EXPECT_LE(sol.max_residual, 1e-9);
    for (double u : sol.u) EXPECT_GT(u, 0.0);
  }
}

TEST(SolveFixedPointTest, ResidualGuaranteeUpToSixtyFourEdges) {
  Rng rng(7);
  for (int trial = 0; trial < 100; ++trial) {
    const PathInstance inst = RandomPath(rng, 64, 0.9);
    const FixedPointSolution sol = SolveFixedPoint(inst);
    const std::vector<double> r = PathResiduals(sol.x, inst);
    for (double v : r) EXPECT_LE(v, 1e-9);
  }
}

TEST(SolveFixedPointTest, ScaleFree) {
  Rng rng(13);
  for (int trial = 0; trial < 100; ++trial) {
    const PathInstance inst = RandomPath(rng, 12, 0.95);
    const double c = 0.01 + 1000.0 * rng.Uniform();
    std::vector<double> scaled(inst.values().begin(), inst.values().end());
    for (double& v : scaled) v *= c;
    const FixedPointSolution a = SolveFixedPoint(inst);
    const FixedPointSolution b = SolveFixedPoint(PathInstance(scaled));
    for (std::size_t i = 0; i < a.x.size(); ++i) EXPECT_NEAR(a.x[i], b.x[i], 1e-12);
    for (std::size_t i = 0; i < a.u.size(); ++i) {
      EXPECT_NEAR(b.u[i], c * a.u[i], 1e-10 * c * a.u[i]);
    }
  }
}

TEST(SweepPropertiesTest, CurvesAreMonotone) {
  Rng rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    const PathInstance inst = RandomPath(rng, 10, 0.9);
    const std::size_t n = inst.edges();
    std::optional<SweepResult> prev;
    double prev_down = 0.0;
    for (int k = 1; k <= 2000; ++k) {
      const double x1 = k / 2000.0;
      const SweepResult s = UpwardSweep(x1, inst);
      if (!s.feasible) {
        // Feasible points form an interval ending at 1.
        EXPECT_FALSE(prev.has_value()) << "x1=" << x1;
        continue;
      }
      const double down = DownwardCurve(x1, inst);
      if (prev) {
        EXPECT_GT(s.x[n - 1], prev->x[n - 1]);
        EXPECT_LT(down, prev_down);
        for (std::size_t i = 0; i < n; ++i) {
          EXPECT_GT(s.x[i], prev->x[i]);
          EXPECT_GT(s.w[i + 1], prev->w[i + 1]);
        }
      }
      prev = s;
      prev_down = down;
    }
  }
}

TEST(PathResidualsTest, Examples) {
  EXPECT_EQ(PathResiduals(std::vector<double>{0.5}, PathInstance({1.0, 0.0})),
            std::vector<double>{0.0});
  const std::vector<double> r =
      PathResiduals(std::vector<double>{2.0 / 3.0, 0.5}, PathInstance({1.0, 0.0, 0.0}));
  EXPECT_NEAR(r[0], 0.0, 1e-16);
  EXPECT_NEAR(r[1], 0.0, 1e-16);
  const std::vector<double> ones =
      PathResiduals(std::vector<double>{1.0, 1.0}, PathInstance({1.0, 0.0, 0.0}));
  EXPECT_EQ(ones[1], 1.0);
  EXPECT_THROW(PathResiduals(std::vector<double>{1.0}, PathInstance({1.0, 0.0, 0.0})), Error);
}

TEST(BoundsTest, Examples) {
  const PathInstance zero({1.0, 0.0, 0.0});
  const BoundsReport a = CheckTheoreticalBounds(SolveFixedPoint(zero), zero);
  EXPECT_TRUE(a.ok());

  const PathInstance half({1.0, 0.5});
  const BoundsReport b = CheckTheoreticalBounds(SolveFixedPoint(half), half);
  EXPECT_DOUBLE_EQ(b.gamma, 1.0 / 3.0);
  EXPECT_TRUE(b.upper_bounds_checked);
  EXPECT_TRUE(b.ok());

  const PathInstance tight({1.0, 0.999999});
  const BoundsReport c = CheckTheoreticalBounds(SolveFixedPoint(tight), tight);
  EXPECT_NEAR(c.gamma, 1e-6, 1e-12);
  EXPECT_TRUE(c.upper_bounds_checked);
  EXPECT_TRUE(c.ok());
}

TEST(BoundsTest, FlagsViolations) {
  const PathInstance inst({1.0, 0.0, 0.0});
  FixedPointSolution sol = SolveFixedPoint(inst);
  sol.x[0] = 0.6;  // below 2/3
  const BoundsReport report = CheckTheoreticalBounds(sol, inst);
  ASSERT_FALSE(report.ok());
  EXPECT_EQ(report.violations.front().index, 1u);
  EXPECT_LT(report.violations.front().margin, 0.0);
  try {
    report.ThrowIfViolated();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBoundViolation);
  }
}

TEST(BoundsTest, HoldOnRandomInstances) {
  Rng rng(31);
  for (int trial = 0; trial < 300; ++trial) {
    const PathInstance inst = RandomPath(rng, 16, 0.99);
    const BoundsReport report = CheckTheoreticalBounds(SolveFixedPoint(inst), inst);
    EXPECT_TRUE(report.ok()) << report.violations.front().bound;
  }
}

}  // namespace
}  // namespace treebargain
