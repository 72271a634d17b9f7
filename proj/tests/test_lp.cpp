// Copyright 2026 The BPUC Authors
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
#include <random>

#include "bpuc/bounds.hpp"
#include "bpuc/lp.hpp"
#include "test_support.hpp"

namespace bpuc {
namespace {

using testing::load_data;

// max 3x + 2y s.t. x + y <= 4, x + 3y <= 6, x <= 3  ->  x = 3, y = 1, 11.
TEST(SimplexTest, SmallMaximisation) {
  LinearProgram lp;
  int x = lp.add_variable(0, 3, -3);
  int y = lp.add_variable(0, kInfinity, -2);
  lp.add_row({{x, 1}, {y, 1}}, Relation::kLessEqual, 4);
  lp.add_row({{x, 1}, {y, 3}}, Relation::kLessEqual, 6);
  LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -11, 1e-9);
  EXPECT_NEAR(r.primal[x], 3, 1e-9);
  EXPECT_NEAR(r.primal[y], 1, 1e-9);
}

TEST(SimplexTest, EqualityAndGreaterRows) {
  // min x + 2y + 3z s.t. x + y + z = 10, y + z >= 4, z >= 1.
  LinearProgram lp;
  int x = lp.add_variable(0, kInfinity, 1);
  int y = lp.add_variable(0, kInfinity, 2);
  int z = lp.add_variable(1, kInfinity, 3);
  lp.add_row({{x, 1}, {y, 1}, {z, 1}}, Relation::kEqual, 10);
  lp.add_row({{y, 1}, {z, 1}}, Relation::kGreaterEqual, 4);
  LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 6 + 6 + 3, 1e-9);
}

TEST(SimplexTest, InfeasibleAndUnbounded) {
  LinearProgram bad;
  int v = bad.add_variable(0, kInfinity, 0);
  bad.add_row({{v, 0}}, Relation::kEqual, 1);
  EXPECT_EQ(solve_lp(bad).status, LpStatus::kInfeasible);

  LinearProgram open;
  int a = open.add_variable(0, kInfinity, -1);
  int b = open.add_variable(0, kInfinity, 0);
  open.add_row({{a, 1}, {b, -1}}, Relation::kLessEqual, 1);
  EXPECT_EQ(solve_lp(open).status, LpStatus::kUnbounded);
}

TEST(SimplexTest, RejectsMalformedModels) {
  LinearProgram lp;
  EXPECT_THROW(lp.add_variable(2, 1, 0), std::invalid_argument);
  EXPECT_THROW(lp.add_row({{0, 1}}, Relation::kEqual, 1), std::out_of_range);
  int v = lp.add_variable(0, 1, 0);
  EXPECT_THROW(lp.add_row({{v, NAN}}, Relation::kEqual, 1), std::invalid_argument);
}

TEST(SimplexTest, DegenerateCycleCandidate) {
  // Beale's cycling example; Bland's rule must terminate.
  LinearProgram lp;
  int x4 = lp.add_variable(0, kInfinity, -0.75);
  int x5 = lp.add_variable(0, kInfinity, 150);
  int x6 = lp.add_variable(0, kInfinity, -0.02);
  int x7 = lp.add_variable(0, kInfinity, 6);
  lp.add_row({{x4, 0.25}, {x5, -60}, {x6, -0.04}, {x7, 9}}, Relation::kLessEqual, 0);
  lp.add_row({{x4, 0.5}, {x5, -90}, {x6, -0.02}, {x7, 3}}, Relation::kLessEqual, 0);
  lp.add_row({{x6, 1}}, Relation::kLessEqual, 1);
  LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, -0.05, 1e-9);
}

// Strong duality and dual feasibility on random bounded LPs.
TEST(SimplexTest, DualsCertifyOptimality) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    LinearProgram lp;
    const int n = 2 + t % 5, rows = 1 + t % 4;
    for (int j = 0; j < n; ++j) lp.add_variable(0, kInfinity, 1 + u(rng));
    for (int i = 0; i < rows; ++i) {
      std::vector<std::pair<int, double>> row;
      for (int j = 0; j < n; ++j) row.emplace_back(j, u(rng));
      lp.add_row(row, Relation::kGreaterEqual, 1 + u(rng));
    }
    LpResult r = solve_lp(lp);
    ASSERT_EQ(r.status, LpStatus::kOptimal);
    double dual_obj = 0;
    for (int i = 0; i < rows; ++i) {
      EXPECT_GE(r.dual[i], -1e-9);
      dual_obj += r.dual[i] * lp.row(i).rhs;
    }
    EXPECT_NEAR(dual_obj, r.objective, 1e-7);
    for (int j = 0; j < n; ++j) {
      double d = lp.variable(j).cost;
      for (int i = 0; i < rows; ++i)
        for (auto [k, a] : lp.row(i).coeffs)
          if (k == j) d -= a * r.dual[i];
      EXPECT_GE(d, -1e-7);
    }
  }
}

TEST(Model1Test, SecondExampleTightened) {
  Instance inst = tighten_capacities(load_data("example2.txt"));
  Model1Layout layout;
  LinearProgram lp = build_model1_lp(inst, &layout);
  EXPECT_EQ(lp.num_variables(), 4 * 5 + 5 + 5);
  EXPECT_EQ(lp.num_rows(), 4 + 5 + 5);
  LpResult r = solve_lp(lp);
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 114.4, 1e-6);
}

TEST(Model1Test, RawSecondExampleEqualsLb1) {
  LpResult r = solve_lp(build_model1_lp(load_data("example2.txt")));
  ASSERT_EQ(r.status, LpStatus::kOptimal);
  EXPECT_NEAR(r.objective, 99, 1e-6);
}

// The assignment relaxation and the ratio bound coincide.
TEST(Model1Test, MatchesLb1OnRandomInstances) {
  std::mt19937_64 rng(77);
  for (int t = 0; t < 100; ++t) {
    Instance inst = testing::random_feasible(rng);
    LpResult r = solve_lp(build_model1_lp(inst));
    ASSERT_EQ(r.status, LpStatus::kOptimal);
    EXPECT_NEAR(r.objective, to_double(lb1(inst)->value), 1e-6) << to_text(inst);
  }
}

}  // namespace
}  // namespace bpuc
