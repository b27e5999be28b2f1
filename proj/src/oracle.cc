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

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "reap/random_stream.h"

namespace reap {
namespace {

constexpr size_t kMaxTypes = 3;
// Epsilon ratios eps_i / eps_1 are searched over [1e-4, 1e4] at first.
constexpr double kRatioHalfWidth = 9.210340371976184;  // ln(1e4)
constexpr double kReducedShrink = 5.0;
constexpr double kUnrestrictedShrink = 2.0;
constexpr double kUnrestrictedEvalsPerRound = 1e6;
constexpr int kMaxPointsPerAxis = 1000;
constexpr int kNonMonotoneSamples = 2000;
constexpr uint64_t kNonMonotoneSeed = 0x5eed0de5ULL;

double Spent(const std::vector<ContractItem>& items,
             const DiscreteScenario& scenario) {
  double spent = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    spent += scenario.types()[i].lambda * items[i].payment;
  }
  return spent;
}

// Full inequality check: budget, every IR and (optionally) every IC.
bool Feasible(const std::vector<ContractItem>& items,
              const DiscreteScenario& scenario, bool include_ic, double tol) {
  const auto& types = scenario.types();
  if (Spent(items, scenario) > scenario.budget() * (1.0 + tol)) return false;
  for (size_t i = 0; i < types.size(); ++i) {
    const double own = Utility(items[i], types[i].theta);
    const double scale =
        std::max(std::abs(items[i].payment), types[i].theta * items[i].epsilon);
    if (own < -tol * scale) return false;
    if (!include_ic) continue;
    for (size_t j = 0; j < types.size(); ++j) {
      if (j == i) continue;
      if (own - Utility(items[j], types[i].theta) < -tol * scale) return false;
    }
  }
  return true;
}

double Objective(const std::vector<ContractItem>& items,
                 const DiscreteScenario& scenario) {
  double sum = 0;
  for (size_t i = 0; i < items.size(); ++i) {
    sum += scenario.types()[i].lambda / (items[i].epsilon * items[i].epsilon);
  }
  return sum;
}

// IR and IC are homogeneous of degree one in (eps, p) and the objective
// strictly decreases when every eps grows, so an optimal menu spends the
// whole budget: rescale a candidate direction onto the budget surface.
bool ScaleToBudget(const DiscreteScenario& scenario,
                   std::vector<ContractItem>& items) {
  const double spent = Spent(items, scenario);
  if (!(spent > 0) || !std::isfinite(spent)) return false;
  const double c = scenario.budget() / spent;
  for (ContractItem& item : items) {
    item.epsilon *= c;
    item.payment *= c;
  }
  return true;
}

// Lexicographic epsilon order, for deterministic tie-breaking.
bool EpsLess(const std::vector<ContractItem>& a,
             const std::vector<ContractItem>& b) {
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].epsilon != b[i].epsilon) return a[i].epsilon < b[i].epsilon;
  }
  return false;
}

struct Axis {
  double center;
  double half_width;
  // Log axes hold log-values and are exponentiated before decoding; linear
  // axes are clipped to stay >= 0.
  bool log_scale;
};

struct SearchResult {
  std::vector<ContractItem> items;
  double objective = std::numeric_limits<double>::infinity();
  bool found = false;
};

// Exhaustive tensor grid over `axes`, refined `rounds` times around the
// incumbent with every half-width divided by `shrink`. `decode(values,
// items)` fills a candidate menu and returns false for points outside its
// parametrization; survivors are filtered on the full constraint set.
template <typename Decode>
SearchResult GridSearch(const DiscreteScenario& scenario,
                        std::vector<Axis> axes, int points, int rounds,
                        double shrink, const Decode& decode, bool include_ic,
                        double tol) {
  const size_t dims = axes.size();
  if (dims == 0) {
    points = 1;
    rounds = 0;
  }
  SearchResult best;
  std::vector<ContractItem> items(scenario.k());
  std::vector<std::vector<double>> raw(dims, std::vector<double>(points));
  std::vector<std::vector<double>> value(dims, std::vector<double>(points));
  std::vector<double> values(dims);
  std::vector<int> counter(dims);
  std::vector<double> best_raw(dims);

  for (int round = 0; round <= rounds; ++round) {
    for (size_t d = 0; d < dims; ++d) {
      Axis& a = axes[d];
      double lo = a.center - a.half_width;
      if (!a.log_scale && lo < 0) lo = 0;
      const double step =
          points > 1 ? (a.center + a.half_width - lo) / (points - 1) : 0.0;
      for (int t = 0; t < points; ++t) {
        raw[d][t] = lo + step * t;
        value[d][t] = a.log_scale ? std::exp(raw[d][t]) : raw[d][t];
      }
    }
    std::fill(counter.begin(), counter.end(), 0);
    while (true) {
      for (size_t d = 0; d < dims; ++d) values[d] = value[d][counter[d]];
      if (decode(values, items) && ScaleToBudget(scenario, items) &&
          Feasible(items, scenario, include_ic, tol)) {
        const double obj = Objective(items, scenario);
        if (obj < best.objective ||
            (obj == best.objective && EpsLess(items, best.items))) {
          best.objective = obj;
          best.items = items;
          best.found = true;
          for (size_t d = 0; d < dims; ++d) best_raw[d] = raw[d][counter[d]];
        }
      }
      size_t d = 0;
      while (d < dims && ++counter[d] == points) counter[d++] = 0;
      if (d == dims) break;
    }
    if (!best.found) break;
    for (size_t d = 0; d < dims; ++d) {
      axes[d].center = best_raw[d];
      axes[d].half_width /= shrink;
    }
  }
  return best;
}

absl::Status ValidateInputs(const DiscreteScenario& scenario,
                            const OracleSettings& settings) {
  if (settings.grid_points_per_dim < 2 || settings.refinement_rounds < 0 ||
      !(settings.feasibility_tol > 0) || !(settings.active_tol > 0)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "invalid oracle settings: grid_points_per_dim=%d "
        "refinement_rounds=%d feasibility_tol=%g active_tol=%g",
        settings.grid_points_per_dim, settings.refinement_rounds,
        settings.feasibility_tol, settings.active_tol));
  }
  if (scenario.k() > kMaxTypes) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "brute-force oracle supports at most %d types, got %d", kMaxTypes,
        scenario.k()));
  }
  return absl::OkStatus();
}

// One log axis per ratio eps_i / eps_1, i >= 1.
std::vector<Axis> RatioAxes(size_t k) {
  return std::vector<Axis>(k > 0 ? k - 1 : 0,
                           Axis{.center = 0,
                                .half_width = kRatioHalfWidth,
                                .log_scale = true});
}

void FillRatios(const std::vector<double>& v, std::vector<ContractItem>& items) {
  items[0].epsilon = 1.0;
  for (size_t i = 1; i < items.size(); ++i) items[i].epsilon = v[i - 1];
}

// Joint search over epsilon ratios and relative utilities
// v_i = (p_i - theta_i eps_i) / (theta_i eps_i) >= 0. IR is the domain
// v >= 0; IC is only filtered.
SearchResult UnrestrictedPass(const DiscreteScenario& scenario,
                              const OracleSettings& settings,
                              bool include_ic) {
  const size_t k = scenario.k();
  const auto& types = scenario.types();
  std::vector<Axis> axes = RatioAxes(k);
  for (size_t i = 0; i < k; ++i) {
    // Paying every type theta_k eps_i makes any epsilon profile IC, so
    // this box always contains feasible points.
    const double vmax = types.back().theta / types[i].theta;
    axes.push_back(
        Axis{.center = 0.5 * vmax, .half_width = 0.5 * vmax, .log_scale = false});
  }
  const int points = std::clamp(
      static_cast<int>(
          std::floor(std::pow(kUnrestrictedEvalsPerRound, 1.0 / axes.size()))),
      8, kMaxPointsPerAxis);
  const int rounds = 3 * (settings.refinement_rounds + 1);
  auto decode = [&](const std::vector<double>& v,
                    std::vector<ContractItem>& items) {
    FillRatios(v, items);
    for (size_t i = 0; i < k; ++i) {
      items[i].payment =
          types[i].theta * items[i].epsilon * (1.0 + v[k - 1 + i]);
    }
    return true;
  };
  return GridSearch(scenario, std::move(axes), points, rounds,
                    kUnrestrictedShrink, decode, include_ic,
                    settings.feasibility_tol);
}

// Payments from top-type IR and the adjacent IC chain:
// p_k = theta_k eps_k, p_i = p_{i+1} + theta_i (eps_i - eps_{i+1}).
void BindingPayments(const DiscreteScenario& scenario,
                     std::vector<ContractItem>& items) {
  const auto& types = scenario.types();
  const size_t k = types.size();
  items[k - 1].payment = types[k - 1].theta * items[k - 1].epsilon;
  for (size_t i = k - 1; i-- > 0;) {
    items[i].payment = items[i + 1].payment +
                       types[i].theta * (items[i].epsilon - items[i + 1].epsilon);
  }
}

ContractMenu ToMenu(std::vector<ContractItem> items, Regime regime) {
  return ContractMenu{.items = std::move(items), .regime = regime};
}

OracleResult Assemble(const DiscreteScenario& scenario,
                      const OracleSettings& settings, Regime regime,
                      const SearchResult& reduced,
                      const SearchResult& unrestricted) {
  const bool ic = regime == Regime::kIncomplete;
  OracleResult out;
  out.menu = ToMenu(reduced.items, regime);
  out.objective = reduced.objective;
  out.feasible = Feasible(reduced.items, scenario, ic, settings.feasibility_tol);
  out.active_constraints =
      ActiveConstraints(out.menu, scenario, ic, settings.active_tol);
  if (unrestricted.found) {
    out.unrestricted_menu = ToMenu(unrestricted.items, regime);
    out.unrestricted_objective = unrestricted.objective;
  } else {
    out.unrestricted_objective = std::numeric_limits<double>::infinity();
  }
  return out;
}

}  // namespace

std::vector<std::string> ActiveConstraints(const ContractMenu& menu,
                                           const DiscreteScenario& scenario,
                                           bool include_ic, double tol) {
  std::vector<std::string> active;
  const auto& types = scenario.types();
  if (std::abs(scenario.budget() - Spent(menu.items, scenario)) <=
      tol * scenario.budget()) {
    active.push_back("budget");
  }
  for (size_t i = 0; i < types.size(); ++i) {
    const ContractItem& own = menu.items[i];
    const double scale =
        std::max(std::abs(own.payment), types[i].theta * own.epsilon);
    const double u = Utility(own, types[i].theta);
    if (std::abs(u) <= tol * scale) active.push_back(absl::StrCat("IR[", i, "]"));
    if (!include_ic) continue;
    for (size_t j = 0; j < types.size(); ++j) {
      if (j == i) continue;
      if (std::abs(u - Utility(menu.items[j], types[i].theta)) <= tol * scale) {
        active.push_back(absl::StrCat("IC[", i, ",", j, "]"));
      }
    }
  }
  return active;
}

absl::StatusOr<OracleResult> OracleComplete(const DiscreteScenario& scenario,
                                            const OracleSettings& settings) {
  if (absl::Status s = ValidateInputs(scenario, settings); !s.ok()) return s;
  const auto& types = scenario.types();

  // IR slack only consumes budget, so the reduced pass pins p = theta eps;
  // the unrestricted pass checks that claim.
  auto decode = [&](const std::vector<double>& v,
                    std::vector<ContractItem>& items) {
    FillRatios(v, items);
    for (size_t i = 0; i < items.size(); ++i) {
      items[i].payment = types[i].theta * items[i].epsilon;
    }
    return true;
  };
  SearchResult reduced =
      GridSearch(scenario, RatioAxes(scenario.k()),
                 settings.grid_points_per_dim, settings.refinement_rounds,
                 kReducedShrink, decode, /*include_ic=*/false,
                 settings.feasibility_tol);
  if (!reduced.found) {
    return absl::InternalError("oracle found no feasible point");
  }
  return Assemble(scenario, settings, Regime::kComplete, reduced,
                  UnrestrictedPass(scenario, settings, false));
}

absl::StatusOr<OracleResult> OracleIncomplete(
    const DiscreteScenario& scenario, const OracleSettings& settings) {
  if (absl::Status s = ValidateInputs(scenario, settings); !s.ok()) return s;
  const size_t k = scenario.k();

  auto decode = [&](const std::vector<double>& v,
                    std::vector<ContractItem>& items) {
    FillRatios(v, items);
    for (size_t i = 1; i < k; ++i) {
      if (items[i].epsilon > items[i - 1].epsilon) return false;
    }
    BindingPayments(scenario, items);
    return true;
  };
  SearchResult reduced =
      GridSearch(scenario, RatioAxes(k), settings.grid_points_per_dim,
                 settings.refinement_rounds, kReducedShrink, decode,
                 /*include_ic=*/true, settings.feasibility_tol);
  if (!reduced.found) {
    return absl::InternalError("oracle found no feasible point");
  }
  OracleResult out =
      Assemble(scenario, settings, Regime::kIncomplete, reduced,
               UnrestrictedPass(scenario, settings, true));

  // Spot-check that tuples with an increasing step never beat the
  // incumbent.
  if (k > 1) {
    RandomStream rng(kNonMonotoneSeed);
    std::vector<ContractItem> items(k);
    while (out.non_monotone_samples < kNonMonotoneSamples) {
      for (size_t i = 0; i < k; ++i) {
        const double log_eps = std::log(reduced.items[i].epsilon) +
                               2.0 * (rng.NextUniform() - 0.5);
        items[i].epsilon = std::exp(log_eps);
      }
      // Force at least one increase by swapping a random adjacent pair.
      bool monotone = true;
      for (size_t i = 1; i < k; ++i) {
        if (items[i].epsilon > items[i - 1].epsilon) monotone = false;
      }
      if (monotone) {
        const size_t i = 1 + static_cast<size_t>(rng.NextUniform() * (k - 1));
        std::swap(items[i].epsilon, items[i - 1].epsilon);
        if (!(items[i].epsilon > items[i - 1].epsilon)) continue;
      }
      ++out.non_monotone_samples;
      BindingPayments(scenario, items);
      if (!ScaleToBudget(scenario, items) ||
          !Feasible(items, scenario, true, settings.feasibility_tol)) {
        continue;
      }
      ++out.non_monotone_feasible;
      if (Objective(items, scenario) < out.objective) {
        out.non_monotone_improved = true;
      }
    }
  }
  return out;
}

std::vector<double> KktResiduals(const ContractMenu& menu,
                                 const DiscreteScenario& scenario) {
  const auto& types = scenario.types();
  const std::vector<double> w = BudgetWeights(scenario, menu.regime);
  double objective = 0, spent = 0;
  for (size_t i = 0; i < types.size(); ++i) {
    const double eps = menu.items[i].epsilon;
    objective += types[i].lambda / (eps * eps);
    spent += w[i] * eps;
  }
  const double mu = 2.0 * objective / spent;
  // Runs of equal epsilon carry multipliers nu_i >= 0 on eps_{i+1} <= eps_i.
  // Stationarity then holds for the run as a whole, and nu_i is the partial
  // sum of the per-type gradients from the start of the run.
  std::vector<double> residuals(types.size());
  size_t begin = 0;
  while (begin < types.size()) {
    const double eps = menu.items[begin].epsilon;
    size_t end = begin + 1;
    while (end < types.size() &&
           std::abs(menu.items[end].epsilon - eps) <= 1e-12 * eps) {
      ++end;
    }
    double lambda = 0;
    for (size_t i = begin; i < end; ++i) lambda += types[i].lambda;
    double partial = 0;
    for (size_t i = begin; i < end; ++i) {
      partial += mu * w[i] * eps * eps * eps / 2.0 - types[i].lambda;
      residuals[i] = i + 1 == end ? partial / lambda
                                  : std::min(0.0, partial / lambda);
    }
    begin = end;
  }
  return residuals;
}

}  // namespace reap
