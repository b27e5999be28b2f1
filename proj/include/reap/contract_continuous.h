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

// Optimal contract functions (eps(theta), p(theta)) for a continuum of
// types on [theta_low, theta_high] with density h and CDF H.
//
// With x1(theta) = p(theta) - theta eps(theta) the local IC condition gives
// x1' = -eps and the binding IR condition x1(theta_high) = 0, so
// x1(theta) = int_theta^theta_high eps. Stationarity of the Hamiltonian
// with co-states lambda2 = c1, lambda1 = -c1 H(theta) + c2 gives
//
//   eps(theta)^3 = 2 h(theta) / (c1 theta h(theta) + c1 H(theta) - c2),
//
// and the free initial state x1(theta_low) forces lambda1(theta_low) = 0,
// i.e. c2 = c1 H(theta_low) = 0. c1 is the root of the per-capita budget
// equality n int p h = B.
//
// Substituting lambda1 into dH/du = 0 puts c1 H(theta) in the denominator
// with a plus sign; with a minus sign eps would be flat for the uniform
// density. The payment uses int_theta^theta_high so that the top type gets
// exactly zero utility; integrating from theta_low instead shifts every
// payment by a constant and breaks that boundary condition. Both forms are
// checked against the finite-type solver in the fine discretization limit.

#ifndef REAP_CONTRACT_CONTINUOUS_H_
#define REAP_CONTRACT_CONTINUOUS_H_

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "reap/contract_discrete.h"
#include "reap/privacy_core.h"

namespace reap {

class TypeDensity {
 public:
  enum class Kind { kUniform, kTruncatedNormal, kCustom };

  static absl::StatusOr<TypeDensity> Uniform(double theta_low,
                                             double theta_high);
  // Normal(mean, stddev) restricted to [theta_low, theta_high].
  static absl::StatusOr<TypeDensity> TruncatedNormal(double mean,
                                                     double stddev,
                                                     double theta_low,
                                                     double theta_high);
  // `cdf` is tabulated by Gauss-Legendre quadrature of `pdf` when omitted.
  // The pdf must integrate to 1 within 1e-6 and be positive inside the
  // support.
  static absl::StatusOr<TypeDensity> Custom(
      double theta_low, double theta_high, std::function<double(double)> pdf,
      std::function<double(double)> cdf = nullptr);

  Kind kind() const { return kind_; }
  double theta_low() const { return theta_low_; }
  double theta_high() const { return theta_high_; }
  // Only meaningful for kTruncatedNormal.
  double mean() const { return mean_; }
  double stddev() const { return stddev_; }

  double Pdf(double theta) const;
  double Cdf(double theta) const;
  // Inverse CDF by bisection.
  double Quantile(double u) const;

 private:
  TypeDensity() = default;

  Kind kind_ = Kind::kUniform;
  double theta_low_ = 0;
  double theta_high_ = 0;
  double mean_ = 0;
  double stddev_ = 0;
  std::function<double(double)> pdf_;
  std::function<double(double)> cdf_;
};

class ContinuousScenario {
 public:
  static absl::StatusOr<ContinuousScenario> Create(double budget,
                                                   TypeDensity density,
                                                   double gamma, double delta,
                                                   int n);

  double budget() const { return budget_; }
  const TypeDensity& density() const { return density_; }
  const SensingContext& ctx() const { return ctx_; }

  ContinuousScenario WithBudget(double budget) const;

 private:
  ContinuousScenario(double budget, TypeDensity density, SensingContext ctx)
      : budget_(budget), density_(std::move(density)), ctx_(ctx) {}

  double budget_;
  TypeDensity density_;
  SensingContext ctx_;
};

struct ContinuousMenu {
  double theta_low = 0;
  double theta_high = 0;
  double budget = 0;
  std::vector<double> grid;
  std::vector<double> eps_values;
  std::vector<double> pay_values;
  double c1 = 0;
  double c2 = 0;
};

// Starts from 64 grid intervals and doubles until the objective moves by
// less than 1e-6 relative or the next doubling would exceed `grid_size`.
// Fails if c1 cannot be bracketed or eps is non-positive or increasing
// anywhere on the grid.
absl::StatusOr<ContinuousMenu> SolveContinuous(
    const ContinuousScenario& scenario, int grid_size);

// Piecewise-linear interpolation. theta must lie in the support.
absl::StatusOr<ContractItem> EvalMenu(const ContinuousMenu& menu,
                                      double theta);

// int h / eps^2 over the support (composite Simpson on the menu grid).
double ObjectiveContinuous(const ContinuousMenu& menu,
                           const ContinuousScenario& scenario);

// n int p h over the support; equals the budget at the optimum.
double BudgetSpent(const ContinuousMenu& menu,
                   const ContinuousScenario& scenario);

// k equal-width cells; type i sits at the upper edge of cell i with
// lambda_i = n * P(cell i).
absl::StatusOr<DiscreteScenario> DiscretizeDensity(
    const ContinuousScenario& scenario, int k);

}  // namespace reap

#endif  // REAP_CONTRACT_CONTINUOUS_H_
