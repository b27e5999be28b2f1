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

// Agent-based simulation of one sensing round: the fusion center
// broadcasts a menu, every user picks the item that maximizes its utility,
// perturbs its reading with Laplace noise calibrated to the chosen epsilon,
// and the fusion center averages the reports.

#ifndef REAP_SIMULATOR_H_
#define REAP_SIMULATOR_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "reap/contract_continuous.h"
#include "reap/contract_discrete.h"
#include "reap/privacy_core.h"
#include "reap/random_stream.h"

namespace reap {

struct Agent {
  int id;
  double theta;
  double raw_reading;
  // Position of the agent's type in a discrete scenario, -1 if none.
  int type_index = -1;
};

// Distribution of the true readings. The aggregation error does not depend
// on it; it only exists so that independence can be tested.
enum class RawDistribution {
  kUniform,  // U[0, gamma]
  kBimodal,  // equal mix of U[0, 0.2 gamma] and U[0.8 gamma, gamma]
};

absl::StatusOr<RawDistribution> ParseRawDistribution(const std::string& name);
std::string RawDistributionName(RawDistribution dist);

// lambda_i agents of each type, in type order. Every lambda_i must be an
// integer to within 1e-6.
absl::StatusOr<std::vector<Agent>> BuildPopulation(
    const DiscreteScenario& scenario, RawDistribution raw, uint64_t seed);
// n agents with theta drawn from the density by inverse CDF.
absl::StatusOr<std::vector<Agent>> BuildPopulation(
    const ContinuousScenario& scenario, RawDistribution raw, uint64_t seed);

// argmax_j p_j - theta eps_j. Utilities within 1e-9 relative of each other
// count as a tie, resolved toward the larger epsilon: at a binding adjacent
// IC constraint that is the item designed for the agent's own type.
size_t SelectItem(double theta, std::span<const ContractItem> items);

struct RoundResult {
  // -1 for continuous menus, where each agent gets eps(theta) directly.
  std::vector<int> chosen_index;
  std::vector<double> reports;
  double s_true = 0;
  double s_hat = 0;
  double abs_error = 0;
  double total_payment = 0;
};

struct TrialRow {
  int64_t trial;
  double s_true;
  double s_hat;
  double abs_error;
  double total_payment;
};

struct MonteCarloReport {
  int64_t trials = 0;
  double predicted_alpha = 0;
  // 1 - delta; the bound the violation rate is compared against.
  double allowed_violation_rate = 0;
  // Fraction of trials with abs_error >= predicted_alpha.
  double violation_rate = 0;
  double mean_abs_error = 0;
  double mean_signed_error = 0;
  // (q, nearest-rank quantile of abs_error).
  std::vector<std::pair<double, double>> error_quantiles;
};

struct MonteCarloRun {
  MonteCarloReport report;
  std::vector<TrialRow> rows;
};

// Noise hook. Defaults to SampleLaplace.
using NoiseFn = std::function<double(const LaplaceScale&, RandomStream&)>;

// Under a complete-information menu the platform knows each agent's type and
// hands out item type_index. Under an incomplete-information menu agents pick
// SelectItem; among identical items (pooled types) their own is kept.
//
// One round whose noise comes from RandomStream::Derive(seed, 0), i.e. the
// first trial of MonteCarlo with the same seed.
absl::StatusOr<RoundResult> RunRound(const std::vector<Agent>& agents,
                                     const ContractMenu& menu,
                                     const SensingContext& ctx, uint64_t seed,
                                     const NoiseFn& noise = nullptr);
absl::StatusOr<RoundResult> RunRound(const std::vector<Agent>& agents,
                                     const ContinuousMenu& menu,
                                     const SensingContext& ctx, uint64_t seed,
                                     const NoiseFn& noise = nullptr);

// Fresh noise per trial from RandomStream::Derive(seed, trial); raw
// readings stay fixed. Results do not depend on evaluation order.
absl::StatusOr<MonteCarloRun> MonteCarlo(const std::vector<Agent>& agents,
                                         const ContractMenu& menu,
                                         const SensingContext& ctx,
                                         int64_t trials, uint64_t seed);
absl::StatusOr<MonteCarloRun> MonteCarlo(const std::vector<Agent>& agents,
                                         const ContinuousMenu& menu,
                                         const SensingContext& ctx,
                                         int64_t trials, uint64_t seed);

}  // namespace reap

#endif  // REAP_SIMULATOR_H_
