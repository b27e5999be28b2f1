//
// Copyright 2026 The REAP Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "reap/oracle.h"

#include <cmath>
#include <vector>

#include "gmock/gmock.h"
#include "gtest/gtest.h"
#include "reap/contract_discrete.h"
#include "reap/random_stream.h"
#include "test_util.h"

namespace reap {
namespace {

using ::testing::Contains;
using ::testing::Not;

DiscreteScenario Make(double budget, std::vector<PuType> types) {
  return *DiscreteScenario::Create(budget, std::move(types), 10, 0.9);
}

double Rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

TEST(OracleCompleteTest, TwoTypeHandExample) {
  DiscreteScenario s = Make(10, {{1, 1}, {8, 1}});
  auto r = OracleComplete(s);
  ASSERT_TRUE(r.ok()) << r.status();
  EXPECT_TRUE(r->feasible);
  EXPECT_NEAR(r->menu.items[0].epsilon, 2, 1e-3);
  EXPECT_NEAR(r->menu.items[1].epsilon, 1, 1e-3);
  EXPECT_THAT(r->active_constraints, Contains("budget"));
  EXPECT_THAT(r->active_constraints, Contains("IR[0]"));
  EXPECT_THAT(r->active_constraints, Contains("IR[1]"));
  EXPECT_GE(r->unrestricted_objective, r->objective * (1 - 1e-3));
}

TEST(OracleCompleteTest, SingleType) {
  DiscreteScenario s = Make(60, {{3, 4}});
  auto r = *OracleComplete(s);
  EXPECT_NEAR(r.menu.items[0].epsilon, 60.0 / (4 * 3), 1e-6);
}

TEST(OracleIncompleteTest, WorkedInstance) {
  DiscreteScenario s = Make(10, {{1, 1}, {2, 1}});
  auto r = OracleIncomplete(s);
  ASSERT_TRUE(r.ok()) << r.status();
  const double closed = ObjectiveValue(SolveIncomplete(s), s);
  EXPECT_LE(Rel(r->objective, closed), 1e-3);
  EXPECT_GE(r->unrestricted_objective, closed * (1 - 1e-3));
  EXPECT_THAT(r->active_constraints, Contains("budget"));
  EXPECT_THAT(r->active_constraints, Contains("IR[1]"));
  EXPECT_THAT(r->active_constraints, Contains("IC[0,1]"));
  EXPECT_THAT(r->active_constraints, Not(Contains("IR[0]")));
  EXPECT_GT(r->non_monotone_samples, 0);
  EXPECT_FALSE(r->non_monotone_improved);
}

TEST(OracleIncompleteTest, EqualThetasMatchComplete) {
  DiscreteScenario s = Make(50, {{2, 3}, {2, 7}});
  auto inc = *OracleIncomplete(s);
  auto comp = *OracleComplete(s);
  EXPECT_LE(Rel(inc.objective, comp.objective), 1e-3);
}

TEST(OracleTest, ThreeTypesAgreeWithClosedForms) {
  DiscreteScenario s = Make(1000, {{1, 100}, {2, 100}, {3, 100}});
  auto inc = *OracleIncomplete(s);
  auto comp = *OracleComplete(s);
  EXPECT_LE(Rel(inc.objective, ObjectiveValue(SolveIncomplete(s), s)), 1e-3);
  EXPECT_LE(Rel(comp.objective, ObjectiveValue(SolveComplete(s), s)), 1e-3);
  EXPECT_THAT(inc.active_constraints, Contains("IC[0,1]"));
  EXPECT_THAT(inc.active_constraints, Contains("IC[1,2]"));
  EXPECT_THAT(inc.active_constraints, Contains("IR[2]"));
}

TEST(OracleTest, RandomTwoTypeScenarios) {
  RandomStream rng(314);
  for (int i = 0; i < 5; ++i) {
    DiscreteScenario s = testing::RandomScenario(rng, 2);
    for (Regime regime : {Regime::kComplete, Regime::kIncomplete}) {
      auto r = regime == Regime::kComplete ? OracleComplete(s)
                                           : OracleIncomplete(s);
      ASSERT_TRUE(r.ok()) << r.status();
      const double closed = ObjectiveValue(Solve(s, regime), s);
      EXPECT_LE(Rel(r->objective, closed), 1e-3);
      EXPECT_GE(r->objective, closed * (1 - 1e-3));
      EXPECT_GE(r->unrestricted_objective, closed * (1 - 1e-3));
    }
  }
}

TEST(OracleTest, LargerBudgetNeverWorse) {
  DiscreteScenario s = Make(10, {{1, 2}, {4, 1}});
  double previous = 1e300;
  for (double b : {5.0, 10.0, 20.0}) {
    const double obj = OracleIncomplete(s.WithBudget(b))->objective;
    EXPECT_LE(obj, previous);
    previous = obj;
  }
}

TEST(OracleTest, RejectsBadSettingsAndLargeK) {
  DiscreteScenario four = Make(10, {{1, 1}, {2, 1}, {3, 1}, {4, 1}});
  EXPECT_FALSE(OracleComplete(four).ok());
  EXPECT_FALSE(OracleIncomplete(four).ok());
  DiscreteScenario s = Make(10, {{1, 1}});
  EXPECT_FALSE(OracleComplete(s, {.grid_points_per_dim = 0}).ok());
  EXPECT_FALSE(OracleComplete(s, {.refinement_rounds = -1}).ok());
  EXPECT_FALSE(OracleIncomplete(s, {.feasibility_tol = 0}).ok());
}

TEST(KktResidualsTest, ClosedFormsAreStationary) {
  RandomStream rng(8);
  for (int i = 0; i < 50; ++i) {
    const int k = 1 + static_cast<int>(10 * rng.NextUniform());
    DiscreteScenario s = testing::RandomScenario(rng, k);
    for (Regime regime : {Regime::kComplete, Regime::kIncomplete}) {
      for (double r : KktResiduals(Solve(s, regime), s)) {
        EXPECT_LE(std::abs(r), 1e-9);
      }
    }
  }
}

TEST(KktResidualsTest, PerturbedMenuIsNotStationary) {
  DiscreteScenario s = Make(10, {{1, 1}, {2, 1}});
  for (Regime regime : {Regime::kComplete, Regime::kIncomplete}) {
    ContractMenu m = Solve(s, regime);
    m.items[0].epsilon *= 1.01;
    EXPECT_GT(std::abs(KktResiduals(m, s)[0]), 1e-4);
  }
}

TEST(KktResidualsTest, PooledMenuIsStationary) {
  DiscreteScenario s = Make(1000, {{1, 250}, {2, 10}, {3, 40}});
  for (double r : KktResiduals(SolveIncomplete(s), s)) {
    EXPECT_LE(std::abs(r), 1e-12);
  }
  // Without pooling the same scenario is stationary only for the relaxation.
  ContractMenu raw = UnpooledIncomplete(s);
  for (double r : KktResiduals(raw, s)) EXPECT_LE(std::abs(r), 1e-12);
}

TEST(KktResidualsTest, UnwarrantedPoolingNeedsNegativeMultiplier) {
  DiscreteScenario s = Make(1000, {{1, 100}, {2, 100}, {3, 100}});
  ContractMenu m = SolveIncomplete(s);
  m.items[2].epsilon = m.items[1].epsilon;
  std::vector<double> r = KktResiduals(m, s);
  EXPECT_LT(r[1], -1e-3);
}

TEST(ActiveConstraintsTest, CompleteMenuHasEveryIrTight) {
  DiscreteScenario s = Make(1000, {{1, 100}, {2, 100}, {3, 100}});
  auto active = ActiveConstraints(SolveComplete(s), s, false, 1e-9);
  EXPECT_THAT(active, ::testing::ElementsAre("budget", "IR[0]", "IR[1]",
                                             "IR[2]"));
}

}  // namespace
}  // namespace reap
