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

#include "reap/simulator.h"

#include <cmath>
#include <map>
#include <vector>

#include "gtest/gtest.h"
#include "reap/contract_continuous.h"
#include "reap/contract_discrete.h"
#include "reap/random_stream.h"
#include "test_util.h"

namespace reap {
namespace {

DiscreteScenario Make(double budget, std::vector<PuType> types,
                      double delta = 0.9) {
  return *DiscreteScenario::Create(budget, std::move(types), 10, delta);
}

// Table 1 style population: 20 evenly spaced types on [5, 15], 10 each.
DiscreteScenario TwentyTypes(double budget = 1000, double delta = 0.9) {
  std::vector<PuType> types;
  for (int i = 0; i < 20; ++i) types.push_back({5 + 10.0 * i / 19, 10});
  return Make(budget, types, delta);
}

TEST(RawDistributionTest, ParseAndName) {
  for (auto d : {RawDistribution::kUniform, RawDistribution::kBimodal}) {
    EXPECT_EQ(*ParseRawDistribution(RawDistributionName(d)), d);
  }
  EXPECT_FALSE(ParseRawDistribution("gaussian").ok());
}

TEST(BuildPopulationTest, ExactCountsPerType) {
  DiscreteScenario s = Make(1000, {{1, 100}, {2, 100}, {3, 100}});
  auto agents = BuildPopulation(s, RawDistribution::kUniform, 1);
  ASSERT_TRUE(agents.ok());
  std::map<double, int> counts;
  for (const Agent& a : *agents) ++counts[a.theta];
  EXPECT_EQ(counts[1], 100);
  EXPECT_EQ(counts[2], 100);
  EXPECT_EQ(counts[3], 100);
  for (size_t i = 0; i < agents->size(); ++i) EXPECT_EQ((*agents)[i].id, i);
}

TEST(BuildPopulationTest, DiscretizedUniformGivesTenPerType) {
  auto cs = *ContinuousScenario::Create(1000, *TypeDensity::Uniform(5, 15), 10,
                                        0.9, 200);
  DiscreteScenario d = *DiscretizeDensity(cs, 20);
  auto agents = *BuildPopulation(d, RawDistribution::kUniform, 3);
  std::map<double, int> counts;
  for (const Agent& a : agents) ++counts[a.theta];
  EXPECT_EQ(counts.size(), 20u);
  for (const auto& [theta, c] : counts) EXPECT_EQ(c, 10) << theta;
}

TEST(BuildPopulationTest, DeterministicForSeed) {
  DiscreteScenario s = TwentyTypes();
  auto a = *BuildPopulation(s, RawDistribution::kUniform, 9);
  auto b = *BuildPopulation(s, RawDistribution::kUniform, 9);
  auto c = *BuildPopulation(s, RawDistribution::kUniform, 10);
  ASSERT_EQ(a.size(), b.size());
  bool differs = false;
  for (size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].raw_reading, b[i].raw_reading);
    differs |= a[i].raw_reading != c[i].raw_reading;
  }
  EXPECT_TRUE(differs);
}

TEST(BuildPopulationTest, RejectsRoundingMismatch) {
  DiscreteScenario s = Make(10, {{1, 1.5}, {2, 1.5}});
  EXPECT_FALSE(BuildPopulation(s, RawDistribution::kUniform, 1).ok());
}

TEST(BuildPopulationTest, RawReadingsRespectRange) {
  DiscreteScenario s = TwentyTypes();
  for (const Agent& a : *BuildPopulation(s, RawDistribution::kUniform, 4)) {
    EXPECT_GE(a.raw_reading, 0);
    EXPECT_LE(a.raw_reading, 10);
  }
  int low = 0;
  for (const Agent& a : *BuildPopulation(s, RawDistribution::kBimodal, 4)) {
    const bool in_low = a.raw_reading <= 2;
    const bool in_high = a.raw_reading >= 8 && a.raw_reading <= 10;
    EXPECT_TRUE(in_low || in_high) << a.raw_reading;
    low += in_low;
  }
  EXPECT_GT(low, 60);
  EXPECT_LT(low, 140);
}

TEST(BuildPopulationTest, ContinuousThetasInSupport) {
  auto cs = *ContinuousScenario::Create(
      1000, *TypeDensity::TruncatedNormal(10, 2, 5, 15), 10, 0.9, 500);
  auto agents = *BuildPopulation(cs, RawDistribution::kUniform, 5);
  ASSERT_EQ(agents.size(), 500u);
  double mean = 0;
  for (const Agent& a : agents) {
    EXPECT_GE(a.theta, 5);
    EXPECT_LE(a.theta, 15);
    mean += a.theta / 500;
  }
  EXPECT_NEAR(mean, 10, 0.3);
}

TEST(SelectItemTest, BindingIcTieGoesToLargerEpsilon) {
  DiscreteScenario s = Make(10, {{1, 1}, {2, 1}});
  ContractMenu m = SolveIncomplete(s);
  EXPECT_NEAR(Utility(m.items[0], 1), Utility(m.items[1], 1), 1e-12);
  EXPECT_EQ(SelectItem(1, m.items), 0u);
  EXPECT_EQ(SelectItem(2, m.items), 1u);
}

// Complete menus leave every type at zero utility, so a cheap agent free to
// choose takes the item with the largest margin (theta_j - theta) eps_j.
TEST(SelectItemTest, CompleteMenuIsNotSelfSelecting) {
  ContractMenu m = SolveComplete(Make(10, {{1, 1}, {8, 1}}));
  EXPECT_EQ(SelectItem(0.5, m.items), 1u);
  EXPECT_EQ(SelectItem(1, m.items), 1u);
}

TEST(SelectItemTest, SingleItem) {
  std::vector<ContractItem> one = {{.epsilon = 1, .payment = 0}};
  EXPECT_EQ(SelectItem(3, one), 0u);
}

TEST(SelectItemTest, EveryAgentPicksOwnItemUnderIncompleteMenu) {
  RandomStream rng(21);
  for (int rep = 0; rep < 50; ++rep) {
    const int k = 1 + static_cast<int>(10 * rng.NextUniform());
    DiscreteScenario s = testing::RandomScenario(rng, k);
    ContractMenu m = SolveIncomplete(s);
    for (size_t i = 0; i < s.k(); ++i) {
      // Pooled types share identical items, so compare items.
      const ContractItem& got = m.items[SelectItem(s.types()[i].theta, m.items)];
      EXPECT_EQ(got.epsilon, m.items[i].epsilon);
      EXPECT_EQ(got.payment, m.items[i].payment);
    }
  }
}

TEST(RunRoundTest, ZeroNoiseReproducesTruth) {
  DiscreteScenario s = TwentyTypes();
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 1);
  auto zero = [](const LaplaceScale&, RandomStream&) { return 0.0; };
  auto r = RunRound(agents, SolveIncomplete(s), s.ctx(), 7, zero);
  ASSERT_TRUE(r.ok());
  EXPECT_EQ(r->s_hat, r->s_true);
  EXPECT_EQ(r->abs_error, 0);
}

TEST(RunRoundTest, AggregatesAndPaysBudget) {
  DiscreteScenario s = TwentyTypes();
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 1);
  for (Regime regime : {Regime::kComplete, Regime::kIncomplete}) {
    auto r = *RunRound(agents, Solve(s, regime), s.ctx(), 7);
    ASSERT_EQ(r.reports.size(), 200u);
    double sum = 0, raw = 0;
    for (double v : r.reports) sum += v;
    for (const Agent& a : agents) raw += a.raw_reading;
    EXPECT_NEAR(r.s_hat, sum / 200, 1e-12);
    EXPECT_NEAR(r.s_true, raw / 200, 1e-12);
    EXPECT_NEAR(r.total_payment, 1000, 1e-9 * 1000);
    EXPECT_EQ(r.abs_error, std::abs(r.s_hat - r.s_true));
    for (size_t i = 0; i < agents.size(); ++i) {
      EXPECT_EQ(s.types()[r.chosen_index[i]].theta, agents[i].theta);
    }
  }
}

TEST(RunRoundTest, PooledTypesKeepTheirOwnIndex) {
  DiscreteScenario s = Make(1000, {{1, 250}, {2, 10}, {3, 40}});
  ASSERT_FALSE(IsRegular(s));
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 1);
  auto r = *RunRound(agents, SolveIncomplete(s), s.ctx(), 2);
  for (size_t i = 0; i < agents.size(); ++i) {
    EXPECT_EQ(r.chosen_index[i], agents[i].type_index);
  }
  EXPECT_NEAR(r.total_payment, 1000, 1e-9 * 1000);
}

TEST(RunRoundTest, CompleteMenuNeedsTypeIndex) {
  DiscreteScenario s = Make(10, {{1, 1}, {2, 1}});
  std::vector<Agent> agents = {{.id = 0, .theta = 1, .raw_reading = 0},
                               {.id = 1, .theta = 2, .raw_reading = 0}};
  EXPECT_EQ(RunRound(agents, SolveComplete(s), s.ctx(), 1).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_TRUE(RunRound(agents, SolveIncomplete(s), s.ctx(), 1).ok());
}

TEST(RunRoundTest, RejectsPopulationSizeMismatch) {
  DiscreteScenario s = TwentyTypes();
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 1);
  agents.pop_back();
  EXPECT_FALSE(RunRound(agents, SolveIncomplete(s), s.ctx(), 1).ok());
}

TEST(RunRoundTest, ContinuousMenuUsesDirectRevelation) {
  auto cs = *ContinuousScenario::Create(1000, *TypeDensity::Uniform(5, 15), 10,
                                        0.9, 200);
  ContinuousMenu m = *SolveContinuous(cs, 256);
  auto agents = *BuildPopulation(cs, RawDistribution::kUniform, 2);
  auto r = *RunRound(agents, m, cs.ctx(), 3);
  for (int idx : r.chosen_index) EXPECT_EQ(idx, -1);
  double pay = 0;
  for (const Agent& a : agents) pay += EvalMenu(m, a.theta)->payment;
  EXPECT_NEAR(r.total_payment, pay, 1e-9 * pay);
}

TEST(MonteCarloTest, ViolationRateWithinChebyshevBound) {
  for (double delta : {0.5, 0.9, 0.99}) {
    DiscreteScenario s = TwentyTypes(1000, delta);
    auto agents = *BuildPopulation(s, RawDistribution::kUniform, 1);
    for (Regime regime : {Regime::kComplete, Regime::kIncomplete}) {
      constexpr int kTrials = 10000;
      auto run = *MonteCarlo(agents, Solve(s, regime), s.ctx(), kTrials, 17);
      const double allowed = 1 - delta;
      EXPECT_LE(run.report.violation_rate,
                allowed + 3 * std::sqrt(allowed * delta / kTrials));
      EXPECT_NEAR(run.report.predicted_alpha,
                  AlphaOfMenu(Solve(s, regime), s), 1e-12);
    }
  }
}

TEST(MonteCarloTest, HundredThousandTrialsAtDeltaPointNine) {
  DiscreteScenario s = TwentyTypes();
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 1);
  constexpr int kTrials = 100000;
  auto run = *MonteCarlo(agents, SolveIncomplete(s), s.ctx(), kTrials, 5);
  EXPECT_LE(run.report.violation_rate, 0.1 + 3 * std::sqrt(0.09 / kTrials));
  // Signed error is symmetric about zero.
  double sum_sq = 0;
  for (const TrialRow& row : run.rows) {
    sum_sq += (row.s_hat - row.s_true) * (row.s_hat - row.s_true);
  }
  const double sd = std::sqrt(sum_sq / kTrials);
  EXPECT_NEAR(run.report.mean_signed_error, 0, 5 * sd / std::sqrt(kTrials));
}

TEST(MonteCarloTest, HalvingBudgetDoublesErrors) {
  DiscreteScenario s = TwentyTypes();
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 1);
  auto full = *MonteCarlo(agents, SolveIncomplete(s), s.ctx(), 2000, 3);
  DiscreteScenario half = s.WithBudget(500);
  auto halved = *MonteCarlo(agents, SolveIncomplete(half), half.ctx(), 2000, 3);
  EXPECT_NEAR(halved.report.predicted_alpha, 2 * full.report.predicted_alpha,
              1e-12 * full.report.predicted_alpha);
  // Same noise stream with every scale doubled.
  EXPECT_NEAR(halved.report.mean_abs_error, 2 * full.report.mean_abs_error,
              1e-9 * full.report.mean_abs_error);
}

TEST(MonteCarloTest, ErrorIndependentOfRawDistribution) {
  DiscreteScenario s = TwentyTypes();
  auto uniform = *BuildPopulation(s, RawDistribution::kUniform, 8);
  auto bimodal = *BuildPopulation(s, RawDistribution::kBimodal, 8);
  ContractMenu m = SolveIncomplete(s);
  auto a = *MonteCarlo(uniform, m, s.ctx(), 1000, 99);
  auto b = *MonteCarlo(bimodal, m, s.ctx(), 1000, 99);
  for (size_t t = 0; t < a.rows.size(); ++t) {
    EXPECT_NEAR(a.rows[t].abs_error, b.rows[t].abs_error, 1e-9);
  }
}

TEST(MonteCarloTest, DeterministicAndFixedRaws) {
  DiscreteScenario s = TwentyTypes();
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 8);
  ContractMenu m = SolveComplete(s);
  auto a = *MonteCarlo(agents, m, s.ctx(), 500, 4);
  auto b = *MonteCarlo(agents, m, s.ctx(), 500, 4);
  for (size_t t = 0; t < a.rows.size(); ++t) {
    EXPECT_EQ(a.rows[t].s_hat, b.rows[t].s_hat);
    EXPECT_EQ(a.rows[t].s_true, a.rows[0].s_true);
    EXPECT_EQ(a.rows[t].trial, static_cast<int64_t>(t));
  }
}

TEST(MonteCarloTest, SingleTrialIsWellFormed) {
  DiscreteScenario s = TwentyTypes();
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 8);
  auto run = *MonteCarlo(agents, SolveIncomplete(s), s.ctx(), 1, 4);
  EXPECT_EQ(run.report.trials, 1);
  EXPECT_EQ(run.rows.size(), 1u);
  ASSERT_EQ(run.report.error_quantiles.size(), 4u);
  for (const auto& [q, v] : run.report.error_quantiles) {
    EXPECT_EQ(v, run.rows[0].abs_error);
  }
  EXPECT_TRUE(run.report.violation_rate == 0 ||
              run.report.violation_rate == 1);
}

TEST(MonteCarloTest, RejectsZeroTrials) {
  DiscreteScenario s = TwentyTypes();
  auto agents = *BuildPopulation(s, RawDistribution::kUniform, 8);
  EXPECT_FALSE(MonteCarlo(agents, SolveIncomplete(s), s.ctx(), 0, 4).ok());
}

}  // namespace
}  // namespace reap
