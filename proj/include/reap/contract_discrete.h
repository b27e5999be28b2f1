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

// Optimal privacy-payment contract menus for finitely many user types.
//
// A type is a privacy preference theta (payment per unit of epsilon given
// up) with a population count lambda. The fusion center minimizes
// sum_i lambda_i / eps_i^2, the type-weighted surrogate for the aggregation
// error, subject to its budget and to individual rationality (IR) and
// incentive compatibility (IC) of the menu.
//
// Under complete information every type is held at zero utility
// (p_i = theta_i eps_i) and the budget binds. Under incomplete information
// only the highest type is held at zero utility; each lower type is made
// exactly indifferent between its own item and the next type's item, which
// puts weight H_i = lambda_i theta_i + (theta_i - theta_{i-1}) sum_{j<i}
// lambda_j on eps_i in the budget.

#ifndef REAP_CONTRACT_DISCRETE_H_
#define REAP_CONTRACT_DISCRETE_H_

#include <cstddef>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "reap/privacy_core.h"

namespace reap {

struct PuType {
  double theta;
  double lambda;

  friend bool operator==(const PuType&, const PuType&) = default;
};

// Budget, sensing context and the populated types sorted ascending by theta.
class DiscreteScenario {
 public:
  // Sorts `types` by theta (stable) and drops types with lambda == 0; an
  // unpopulated type needs no contract item. n is sum(lambda) rounded, and
  // the sum must be an integer to within 1e-6 relative. Duplicate thetas are
  // kept as distinct types.
  static absl::StatusOr<DiscreteScenario> Create(double budget,
                                                 std::vector<PuType> types,
                                                 double gamma, double delta);

  double budget() const { return budget_; }
  const std::vector<PuType>& types() const { return types_; }
  const SensingContext& ctx() const { return ctx_; }
  size_t k() const { return types_.size(); }

  // original_index()[i] is the position of types()[i] in the input list.
  const std::vector<size_t>& original_index() const { return original_index_; }

  // Same scenario with the budget replaced.
  DiscreteScenario WithBudget(double budget) const;

 private:
  DiscreteScenario(double budget, std::vector<PuType> types,
                   std::vector<size_t> original_index, SensingContext ctx)
      : budget_(budget),
        types_(std::move(types)),
        original_index_(std::move(original_index)),
        ctx_(ctx) {}

  double budget_;
  std::vector<PuType> types_;
  std::vector<size_t> original_index_;
  SensingContext ctx_;
};

struct ContractItem {
  double epsilon;
  double payment;

  friend bool operator==(const ContractItem&, const ContractItem&) = default;
};

enum class Regime { kComplete, kIncomplete };

std::string_view RegimeName(Regime regime);
absl::StatusOr<Regime> ParseRegime(std::string_view name);

// Items are index-aligned with DiscreteScenario::types().
struct ContractMenu {
  std::vector<ContractItem> items;
  Regime regime;
};

struct ConstraintReport {
  // p_i - theta_i eps_i.
  std::vector<double> ir_residuals;
  // ic_matrix[i][j] = p_j - theta_i eps_j, utility of type i for item j.
  std::vector<std::vector<double>> ic_matrix;
  // B - sum lambda_i p_i.
  double budget_residual = 0;
  // eps non-increasing in the type index.
  bool monotonic = false;
  // max(|p_i|, theta_i eps_i); normalizes the relative accessors below.
  std::vector<double> payment_scales;

  // Largest amount by which a type prefers some other item to its own,
  // scaled by the payment magnitude. <= 0 when the menu is IC.
  double MaxRelativeIcViolation() const;
  // Most negative IR residual scaled by the payment magnitude.
  double MinRelativeIrResidual() const;
};

// p - theta * eps.
double Utility(const ContractItem& item, double theta);

ContractMenu SolveComplete(const DiscreteScenario& scenario);

// Optimal menu under hidden types. When lambda_i / H_i is non-increasing
// (a regular scenario) this is eps_i = G (lambda_i / H_i)^(1/3) with
// G = B / sum H_j^(2/3) lambda_j^(1/3). Otherwise adjacent types are pooled
// onto a shared item until the pooled ratios are non-increasing, which keeps
// epsilon monotone and the menu incentive compatible.
ContractMenu SolveIncomplete(const DiscreteScenario& scenario);

// The per-type formula above without pooling. It is not monotone, and hence
// not incentive compatible, for irregular scenarios.
ContractMenu UnpooledIncomplete(const DiscreteScenario& scenario);

// Exclusive end index of each pooled group used by SolveIncomplete.
std::vector<size_t> IncompletePoolingGroups(const DiscreteScenario& scenario);

// True when SolveIncomplete pools nothing.
bool IsRegular(const DiscreteScenario& scenario);

ContractMenu Solve(const DiscreteScenario& scenario, Regime regime);

// Budget weights w_i of eps_i at the optimum: lambda_i theta_i (complete) or
// H_i (incomplete), so that sum lambda_i p_i = sum w_i eps_i.
std::vector<double> BudgetWeights(const DiscreteScenario& scenario,
                                  Regime regime);

absl::StatusOr<ConstraintReport> CheckConstraints(
    const ContractMenu& menu, const DiscreteScenario& scenario);

// sum lambda_i / eps_i^2.
double ObjectiveValue(const ContractMenu& menu,
                      const DiscreteScenario& scenario);

// Predicted aggregation error with every type's epsilon replicated lambda_i
// times.
double AlphaOfMenu(const ContractMenu& menu, const DiscreteScenario& scenario);

// alpha(incomplete) / alpha(complete). >= 1, with equality when a single
// type is populated.
double AccuracyRatio(const DiscreteScenario& scenario);

}  // namespace reap

#endif  // REAP_CONTRACT_DISCRETE_H_
