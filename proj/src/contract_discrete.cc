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

#include "reap/contract_discrete.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace reap {

absl::StatusOr<DiscreteScenario> DiscreteScenario::Create(
    double budget, std::vector<PuType> types, double gamma, double delta) {
  if (!(budget > 0) || !std::isfinite(budget)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("budget must be positive and finite, got %g", budget));
  }
  if (types.empty()) {
    return absl::InvalidArgumentError("types must be nonempty");
  }
  for (size_t i = 0; i < types.size(); ++i) {
    if (!(types[i].theta > 0) || !std::isfinite(types[i].theta)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "types[%d].theta must be positive, got %g", i, types[i].theta));
    }
    if (!(types[i].lambda >= 0) || !std::isfinite(types[i].lambda)) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "types[%d].lambda must be nonnegative, got %g", i, types[i].lambda));
    }
  }

  std::vector<size_t> order(types.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) {
    return types[a].theta < types[b].theta;
  });

  std::vector<PuType> sorted;
  std::vector<size_t> original;
  double total = 0;
  for (size_t idx : order) {
    if (types[idx].lambda == 0) continue;
    sorted.push_back(types[idx]);
    original.push_back(idx);
    total += types[idx].lambda;
  }
  if (sorted.empty()) {
    return absl::InvalidArgumentError("every type has zero population");
  }
  const double rounded = std::round(total);
  if (rounded < 1 || std::abs(total - rounded) > 1e-6 * total) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "sum of lambda must be a positive integer population, got %.10g",
        total));
  }
  auto ctx = SensingContext::Create(gamma, delta, static_cast<int>(rounded));
  if (!ctx.ok()) return ctx.status();
  return DiscreteScenario(budget, std::move(sorted), std::move(original),
                          *ctx);
}

DiscreteScenario DiscreteScenario::WithBudget(double budget) const {
  assert(budget > 0);
  DiscreteScenario copy = *this;
  copy.budget_ = budget;
  return copy;
}

std::string_view RegimeName(Regime regime) {
  return regime == Regime::kComplete ? "complete" : "incomplete";
}

absl::StatusOr<Regime> ParseRegime(std::string_view name) {
  if (name == "complete") return Regime::kComplete;
  if (name == "incomplete") return Regime::kIncomplete;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown regime '%s'", std::string(name)));
}

double Utility(const ContractItem& item, double theta) {
  return item.payment - theta * item.epsilon;
}

ContractMenu SolveComplete(const DiscreteScenario& scenario) {
  const auto& types = scenario.types();
  double denom = 0;
  for (const PuType& t : types) denom += t.lambda * std::cbrt(t.theta * t.theta);
  ContractMenu menu{.items = {}, .regime = Regime::kComplete};
  menu.items.reserve(types.size());
  for (const PuType& t : types) {
    menu.items.push_back(
        {.epsilon = scenario.budget() / (std::cbrt(t.theta) * denom),
         .payment = scenario.budget() * std::cbrt(t.theta * t.theta) / denom});
  }
  return menu;
}

std::vector<double> BudgetWeights(const DiscreteScenario& scenario,
                                  Regime regime) {
  const auto& types = scenario.types();
  std::vector<double> w(types.size());
  double lower_population = 0;
  for (size_t i = 0; i < types.size(); ++i) {
    w[i] = types[i].lambda * types[i].theta;
    if (regime == Regime::kIncomplete && i > 0) {
      w[i] += (types[i].theta - types[i - 1].theta) * lower_population;
    }
    lower_population += types[i].lambda;
  }
  return w;
}

namespace {

// Menu with eps_i = G (lambda_i / H_i)^(1/3) over the given consecutive
// groups, each group sharing the epsilon of its pooled lambda and H.
ContractMenu IncompleteMenuOverGroups(const DiscreteScenario& scenario,
                                      const std::vector<size_t>& group_ends) {
  const auto& types = scenario.types();
  const size_t k = types.size();
  const std::vector<double> h = BudgetWeights(scenario, Regime::kIncomplete);

  std::vector<double> shape(k);
  double denom = 0;
  size_t begin = 0;
  for (size_t end : group_ends) {
    double lambda = 0, weight = 0;
    for (size_t i = begin; i < end; ++i) {
      lambda += types[i].lambda;
      weight += h[i];
    }
    for (size_t i = begin; i < end; ++i) shape[i] = std::cbrt(lambda / weight);
    denom += std::cbrt(weight * weight * lambda);
    begin = end;
  }
  const double g = scenario.budget() / denom;

  ContractMenu menu{.items = std::vector<ContractItem>(k),
                    .regime = Regime::kIncomplete};
  // Top type at zero utility, then p_i = theta_i eps_i +
  // sum_{j>i} (theta_j - theta_{j-1}) eps_j.
  // Pooled types get the item of the group's top type, which is the same
  // value up to rounding.
  double rent = 0;
  size_t group = group_ends.size();
  for (size_t i = k; i-- > 0;) {
    const double eps = g * shape[i];
    const bool top = i + 1 == group_ends[group - 1];
    if (top) {
      menu.items[i] = {.epsilon = eps, .payment = types[i].theta * eps + rent};
    } else {
      menu.items[i] = menu.items[i + 1];
    }
    if (i > 0) rent += (types[i].theta - types[i - 1].theta) * eps;
    if (group > 1 && i == group_ends[group - 2]) --group;
  }
  return menu;
}

}  // namespace

std::vector<size_t> IncompletePoolingGroups(const DiscreteScenario& scenario) {
  const auto& types = scenario.types();
  const std::vector<double> h = BudgetWeights(scenario, Regime::kIncomplete);
  struct Block {
    double lambda, weight;
    size_t end;
  };
  // Pool adjacent violators: lambda / H must be non-increasing across
  // groups, otherwise the lower type would receive the smaller epsilon.
  std::vector<Block> stack;
  for (size_t i = 0; i < types.size(); ++i) {
    stack.push_back({types[i].lambda, h[i], i + 1});
    while (stack.size() >= 2) {
      const Block& top = stack[stack.size() - 1];
      const Block& below = stack[stack.size() - 2];
      if (top.lambda * below.weight <= below.lambda * top.weight) break;
      const Block merged{below.lambda + top.lambda, below.weight + top.weight,
                         top.end};
      stack.pop_back();
      stack.back() = merged;
    }
  }
  std::vector<size_t> ends;
  ends.reserve(stack.size());
  for (const Block& b : stack) ends.push_back(b.end);
  return ends;
}

bool IsRegular(const DiscreteScenario& scenario) {
  return IncompletePoolingGroups(scenario).size() == scenario.k();
}

ContractMenu UnpooledIncomplete(const DiscreteScenario& scenario) {
  std::vector<size_t> ends(scenario.k());
  for (size_t i = 0; i < ends.size(); ++i) ends[i] = i + 1;
  return IncompleteMenuOverGroups(scenario, ends);
}

ContractMenu SolveIncomplete(const DiscreteScenario& scenario) {
  return IncompleteMenuOverGroups(scenario, IncompletePoolingGroups(scenario));
}

ContractMenu Solve(const DiscreteScenario& scenario, Regime regime) {
  return regime == Regime::kComplete ? SolveComplete(scenario)
                                     : SolveIncomplete(scenario);
}

namespace {

double PaymentScale(const ContractItem& item, double theta) {
  return std::max({std::abs(item.payment), theta * item.epsilon,
                   std::numeric_limits<double>::min()});
}

}  // namespace

absl::StatusOr<ConstraintReport> CheckConstraints(
    const ContractMenu& menu, const DiscreteScenario& scenario) {
  const auto& types = scenario.types();
  const size_t k = types.size();
  if (menu.items.size() != k) {
    return absl::InvalidArgumentError(
        absl::StrFormat("menu has %d items but the scenario has %d types",
                        menu.items.size(), k));
  }
  ConstraintReport report;
  report.ir_residuals.resize(k);
  report.ic_matrix.assign(k, std::vector<double>(k));
  double spent = 0;
  for (size_t i = 0; i < k; ++i) {
    report.ir_residuals[i] = Utility(menu.items[i], types[i].theta);
    for (size_t j = 0; j < k; ++j) {
      report.ic_matrix[i][j] = Utility(menu.items[j], types[i].theta);
    }
    spent += types[i].lambda * menu.items[i].payment;
  }
  report.budget_residual = scenario.budget() - spent;
  report.monotonic = true;
  for (size_t i = 1; i < k; ++i) {
    if (menu.items[i].epsilon > menu.items[i - 1].epsilon) {
      report.monotonic = false;
    }
  }
  report.payment_scales.resize(k);
  for (size_t i = 0; i < k; ++i) {
    report.payment_scales[i] = PaymentScale(menu.items[i], types[i].theta);
  }
  return report;
}

double ConstraintReport::MaxRelativeIcViolation() const {
  double worst = -std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ic_matrix.size(); ++i) {
    for (size_t j = 0; j < ic_matrix.size(); ++j) {
      if (i == j) continue;
      worst = std::max(worst,
                       (ic_matrix[i][j] - ic_matrix[i][i]) / payment_scales[i]);
    }
  }
  return ic_matrix.size() < 2 ? 0.0 : worst;
}

double ConstraintReport::MinRelativeIrResidual() const {
  double worst = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < ir_residuals.size(); ++i) {
    worst = std::min(worst, ir_residuals[i] / payment_scales[i]);
  }
  return worst;
}

double ObjectiveValue(const ContractMenu& menu,
                      const DiscreteScenario& scenario) {
  const auto& types = scenario.types();
  assert(menu.items.size() == types.size());
  double sum = 0;
  for (size_t i = 0; i < types.size(); ++i) {
    const double eps = menu.items[i].epsilon;
    sum += types[i].lambda / (eps * eps);
  }
  return sum;
}

double AlphaOfMenu(const ContractMenu& menu, const DiscreteScenario& scenario) {
  return AccuracyFromInverseSquareSum(scenario.ctx(),
                                      ObjectiveValue(menu, scenario));
}

double AccuracyRatio(const DiscreteScenario& scenario) {
  return AlphaOfMenu(SolveIncomplete(scenario), scenario) /
         AlphaOfMenu(SolveComplete(scenario), scenario);
}

}  // namespace reap
