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

#ifndef REAP_EXPERIMENTS_H_
#define REAP_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "reap/contract_continuous.h"
#include "reap/contract_discrete.h"
#include "reap/oracle.h"

namespace reap {

// Evenly spaced types (discrete regimes) or a density (continuous regime).
struct DensitySpec {
  std::string kind = "uniform";  // uniform | truncated_normal
  double theta_low = 5;
  double theta_high = 15;
  int k = 20;
  // Required for truncated_normal only.
  std::optional<double> mean;
  std::optional<double> stddev;

  friend bool operator==(const DensitySpec&, const DensitySpec&) = default;
};

struct SweepSpec {
  std::string parameter;  // budget | k | lambda-grid
  double from = 0;
  double to = 0;
  int steps = 0;
  // lambda-grid only: spacing of the second type's population.
  double lambda_step = 10;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct ExperimentConfig {
  std::string regime = "incomplete";  // complete | incomplete | continuous
  double budget = 1000;
  double gamma = 10;
  double delta = 0.9;
  int n = 200;
  std::variant<std::vector<PuType>, DensitySpec> types = DensitySpec{};
  std::optional<SweepSpec> sweep;
  int64_t trials = 10000;
  uint64_t seed = 1;
  std::string output = ".";
  int grid_size = 512;
  std::string raw_distribution = "uniform";

  friend bool operator==(const ExperimentConfig&,
                         const ExperimentConfig&) = default;
};

// Rejects unknown fields; absent fields take the defaults above.
absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& json);
// Writes every field, so parsing the result yields the same config.
std::string SerializeConfig(const ExperimentConfig& config);
absl::Status ValidateConfig(const ExperimentConfig& config);

// Discrete regime for a config; kContinuous configs are rejected.
absl::StatusOr<Regime> DiscreteRegimeOf(const ExperimentConfig& config);

// For a DensitySpec: k types at inclusive linspace(theta_low, theta_high).
// Uniform spreads n evenly; truncated normal weights by the pdf.
absl::StatusOr<std::vector<PuType>> TypesOf(const ExperimentConfig& config);
absl::StatusOr<DiscreteScenario> DiscreteScenarioOf(
    const ExperimentConfig& config);
absl::StatusOr<TypeDensity> DensityOf(const ExperimentConfig& config);
absl::StatusOr<ContinuousScenario> ContinuousScenarioOf(
    const ExperimentConfig& config);

// Plot-ready numeric table.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string ToCsv() const;
  std::string ToJson() const;
};

// Columns: value, alpha_complete, alpha_incomplete, ratio,
// objective_complete, objective_incomplete. One row per step.
absl::StatusOr<Table> BudgetSweep(const ExperimentConfig& config, double from,
                                  double to, int steps);
// k values are linspace(from, to, steps) rounded; they must be distinct.
absl::StatusOr<Table> TypeCountSweep(const ExperimentConfig& config,
                                     double from, double to, int steps);
// Three types taken from the config's explicit list. lambda_1 runs over
// linspace(from, to, steps), lambda_2 over 0, lambda_step, ... and lambda_3
// takes the remainder of n. Columns: lambda1, lambda2, lambda3,
// alpha_complete, alpha_incomplete, ratio.
absl::StatusOr<Table> LambdaGridSweep(const ExperimentConfig& config,
                                      double from, double to, int steps,
                                      double lambda_step);
absl::StatusOr<Table> RunSweep(const ExperimentConfig& config);

// Figure data: fig2 ratio surface, fig3 per-type menus, fig4 utilities,
// fig5 budget sweep, fig6 type-count sweep. fig2 uses its own fixed
// scenario; the rest start from `config`.
absl::StatusOr<Table> FigureTable(const std::string& id,
                                  const ExperimentConfig& config);
ExperimentConfig Fig2Config();

struct VerifyCheck {
  std::string name;
  bool passed = false;
  // Worst residual seen and the bound it was held to.
  double value = 0;
  double tolerance = 0;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  std::vector<std::string> notices;

  bool passed() const;
  std::string ToText() const;
  std::string ToJson() const;
};

constexpr double kEqualityTol = 1e-9;
constexpr double kOracleTol = 1e-3;
constexpr double kContinuousTol = 1e-6;

// Budget, IR, IR equalities, monotonicity and KKT stationarity in both
// regimes; full IC and adjacent-IC equalities for incomplete menus only, as
// a complete-information menu is not meant to screen. Oracle comparison runs
// when k <= 3 and `run_oracle` is set.
absl::StatusOr<VerifyReport> VerifyDiscrete(
    const ContractMenu& menu, const DiscreteScenario& scenario,
    bool run_oracle = true, const OracleSettings& settings = {});

// Top IR equality, monotonicity, sampled global IC over `ic_pairs` random
// pairs and, when a scenario is given, the budget.
absl::StatusOr<VerifyReport> VerifyContinuous(
    const ContinuousMenu& menu, const ContinuousScenario* scenario,
    uint64_t seed, int ic_pairs = 100);

}  // namespace reap

#endif  // REAP_EXPERIMENTS_H_
