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

#include "reap/contract_continuous.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace reap {
namespace {

// 5-point Gauss-Legendre on [-1, 1].
constexpr std::array<double, 5> kGlNodes = {
    -0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
    0.9061798459386640};
constexpr std::array<double, 5> kGlWeights = {
    0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
    0.4786286704993665, 0.2369268850561891};

constexpr int kCdfCells = 4096;
constexpr int kInitialIntervals = 64;
constexpr double kRefineTol = 1e-6;

double GaussLegendre(const std::function<double(double)>& f, double a,
                     double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0;
  for (size_t i = 0; i < kGlNodes.size(); ++i) {
    sum += kGlWeights[i] * f(mid + half * kGlNodes[i]);
  }
  return sum * half;
}

double StdNormalCdf(double z) {
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

// Composite Simpson over an even number of uniform intervals.
double Simpson(const std::vector<double>& f, double dx) {
  const size_t m = f.size() - 1;
  double sum = f.front() + f.back();
  for (size_t j = 1; j < m; ++j) sum += (j % 2 == 1 ? 4.0 : 2.0) * f[j];
  return sum * dx / 3.0;
}

struct GridSolution {
  ContinuousMenu menu;
  double objective;
};

absl::StatusOr<GridSolution> SolveOnGrid(const ContinuousScenario& scenario,
                                         int intervals) {
  const TypeDensity& density = scenario.density();
  const double lo = density.theta_low();
  const double hi = density.theta_high();
  const double dx = (hi - lo) / intervals;
  const size_t nodes = static_cast<size_t>(intervals) + 1;

  std::vector<double> theta(nodes), pdf(nodes), shape(nodes);
  for (size_t j = 0; j < nodes; ++j) {
    theta[j] = j + 1 == nodes ? hi : lo + dx * static_cast<double>(j);
    pdf[j] = density.Pdf(theta[j]);
    // Virtual cost weight theta h + H; eps = (2 h / (c1 weight))^(1/3).
    const double weight = theta[j] * pdf[j] + density.Cdf(theta[j]);
    shape[j] = std::cbrt(2.0 * pdf[j] / weight);
    if (!(shape[j] > 0) || !std::isfinite(shape[j])) {
      return absl::InternalError(absl::StrFormat(
          "optimal epsilon is non-positive at theta=%g (h=%g, weight=%g)",
          theta[j], pdf[j], weight));
    }
  }

  std::vector<double> eps(nodes), pay(nodes), flux(nodes);
  auto fill = [&](double c1) {
    const double scale = 1.0 / std::cbrt(c1);
    for (size_t j = 0; j < nodes; ++j) eps[j] = shape[j] * scale;
    // x1(theta) = int_theta^hi eps, trapezoid from the top down.
    double tail = 0;
    for (size_t j = nodes; j-- > 0;) {
      if (j + 1 < nodes) tail += 0.5 * dx * (eps[j] + eps[j + 1]);
      pay[j] = theta[j] * eps[j] + tail;
      flux[j] = pay[j] * pdf[j];
    }
    return scenario.ctx().n() * Simpson(flux, dx);
  };

  // Spending decreases in c1. Bracket the root geometrically, then bisect
  // in log space.
  const double budget = scenario.budget();
  double c_lo = 1.0, c_hi = 1.0;
  int expansions = 0;
  while (fill(c_hi) > budget) {
    c_hi *= 8.0;
    if (++expansions > 400) {
      return absl::InternalError("could not bracket c1 from above");
    }
  }
  expansions = 0;
  while (fill(c_lo) < budget) {
    c_lo /= 8.0;
    if (++expansions > 400) {
      return absl::InternalError("could not bracket c1 from below");
    }
  }
  for (int iter = 0; iter < 300 && c_hi / c_lo - 1.0 > 1e-15; ++iter) {
    const double mid = std::sqrt(c_lo * c_hi);
    if (fill(mid) > budget) {
      c_lo = mid;
    } else {
      c_hi = mid;
    }
  }
  const double c1 = std::sqrt(c_lo * c_hi);
  fill(c1);

  for (size_t j = 1; j < nodes; ++j) {
    if (eps[j] > eps[j - 1] * (1.0 + 1e-12)) {
      return absl::InternalError(absl::StrFormat(
          "optimal epsilon increases between theta=%g and theta=%g; the "
          "density's virtual cost theta + H/h is not monotone",
          theta[j - 1], theta[j]));
    }
  }

  std::vector<double> integrand(nodes);
  for (size_t j = 0; j < nodes; ++j) integrand[j] = pdf[j] / (eps[j] * eps[j]);

  GridSolution out;
  out.objective = Simpson(integrand, dx);
  out.menu.theta_low = lo;
  out.menu.theta_high = hi;
  out.menu.budget = budget;
  out.menu.grid = std::move(theta);
  out.menu.eps_values = std::move(eps);
  out.menu.pay_values = std::move(pay);
  out.menu.c1 = c1;
  out.menu.c2 = c1 * density.Cdf(lo);
  return out;
}

}  // namespace

absl::StatusOr<TypeDensity> TypeDensity::Uniform(double theta_low,
                                                 double theta_high) {
  if (!(theta_low > 0) || !(theta_high > theta_low) ||
      !std::isfinite(theta_high)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "uniform support needs 0 < theta_low < theta_high, got [%g, %g]",
        theta_low, theta_high));
  }
  TypeDensity d;
  d.kind_ = Kind::kUniform;
  d.theta_low_ = theta_low;
  d.theta_high_ = theta_high;
  const double width = theta_high - theta_low;
  d.pdf_ = [=](double t) {
    return t >= theta_low && t <= theta_high ? 1.0 / width : 0.0;
  };
  d.cdf_ = [=](double t) {
    return std::clamp((t - theta_low) / width, 0.0, 1.0);
  };
  return d;
}

absl::StatusOr<TypeDensity> TypeDensity::TruncatedNormal(double mean,
                                                         double stddev,
                                                         double theta_low,
                                                         double theta_high) {
  if (!(theta_low > 0) || !(theta_high > theta_low) ||
      !std::isfinite(theta_high)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "support needs 0 < theta_low < theta_high, got [%g, %g]", theta_low,
        theta_high));
  }
  if (!(stddev > 0) || !std::isfinite(mean)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "truncated normal needs finite mean and stddev > 0, got (%g, %g)",
        mean, stddev));
  }
  const double a = StdNormalCdf((theta_low - mean) / stddev);
  const double mass = StdNormalCdf((theta_high - mean) / stddev) - a;
  if (!(mass > 1e-12)) {
    return absl::InvalidArgumentError(
        "truncated normal has no mass on the support");
  }
  TypeDensity d;
  d.kind_ = Kind::kTruncatedNormal;
  d.theta_low_ = theta_low;
  d.theta_high_ = theta_high;
  d.mean_ = mean;
  d.stddev_ = stddev;
  d.pdf_ = [=](double t) {
    if (t < theta_low || t > theta_high) return 0.0;
    const double z = (t - mean) / stddev;
    return std::exp(-0.5 * z * z) /
           (stddev * std::sqrt(2.0 * std::numbers::pi) * mass);
  };
  d.cdf_ = [=](double t) {
    if (t <= theta_low) return 0.0;
    if (t >= theta_high) return 1.0;
    return (StdNormalCdf((t - mean) / stddev) - a) / mass;
  };
  return d;
}

absl::StatusOr<TypeDensity> TypeDensity::Custom(
    double theta_low, double theta_high, std::function<double(double)> pdf,
    std::function<double(double)> cdf) {
  if (!(theta_low > 0) || !(theta_high > theta_low) ||
      !std::isfinite(theta_high)) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "support needs 0 < theta_low < theta_high, got [%g, %g]", theta_low,
        theta_high));
  }
  if (!pdf) return absl::InvalidArgumentError("pdf must be provided");

  // Cumulative mass at cell edges; also the normalization check.
  const double cell = (theta_high - theta_low) / kCdfCells;
  auto table = std::make_shared<std::vector<double>>(kCdfCells + 1, 0.0);
  for (int c = 0; c < kCdfCells; ++c) {
    const double left = theta_low + cell * c;
    const double mid = left + 0.5 * cell;
    if (!(pdf(mid) > 0) || !std::isfinite(pdf(mid))) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "pdf must be positive and finite inside the support; h(%g) = %g",
          mid, pdf(mid)));
    }
    (*table)[c + 1] = (*table)[c] + GaussLegendre(pdf, left, left + cell);
  }
  const double total = table->back();
  if (std::abs(total - 1.0) > 1e-6) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "pdf integrates to %.9g over the support, expected 1", total));
  }

  TypeDensity d;
  d.kind_ = Kind::kCustom;
  d.theta_low_ = theta_low;
  d.theta_high_ = theta_high;
  d.pdf_ = [=](double t) {
    return t >= theta_low && t <= theta_high ? pdf(t) : 0.0;
  };
  if (cdf) {
    d.cdf_ = std::move(cdf);
  } else {
    d.cdf_ = [=](double t) {
      if (t <= theta_low) return 0.0;
      if (t >= theta_high) return 1.0;
      const int c = std::min(kCdfCells - 1,
                             static_cast<int>((t - theta_low) / cell));
      const double left = theta_low + cell * c;
      return (*table)[c] + GaussLegendre(pdf, left, t);
    };
  }
  return d;
}

double TypeDensity::Pdf(double theta) const { return pdf_(theta); }
double TypeDensity::Cdf(double theta) const { return cdf_(theta); }

double TypeDensity::Quantile(double u) const {
  if (u <= 0) return theta_low_;
  if (u >= 1) return theta_high_;
  if (kind_ == Kind::kUniform) {
    return theta_low_ + u * (theta_high_ - theta_low_);
  }
  double a = theta_low_, b = theta_high_;
  for (int i = 0; i < 100 && b - a > 1e-13 * b; ++i) {
    const double mid = 0.5 * (a + b);
    if (Cdf(mid) < u) {
      a = mid;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

absl::StatusOr<ContinuousScenario> ContinuousScenario::Create(
    double budget, TypeDensity density, double gamma, double delta, int n) {
  if (!(budget > 0) || !std::isfinite(budget)) {
    return absl::InvalidArgumentError(
        absl::StrFormat("budget must be positive and finite, got %g", budget));
  }
  auto ctx = SensingContext::Create(gamma, delta, n);
  if (!ctx.ok()) return ctx.status();
  return ContinuousScenario(budget, std::move(density), *ctx);
}

ContinuousScenario ContinuousScenario::WithBudget(double budget) const {
  ContinuousScenario copy = *this;
  copy.budget_ = budget;
  return copy;
}

absl::StatusOr<ContinuousMenu> SolveContinuous(
    const ContinuousScenario& scenario, int grid_size) {
  if (grid_size < kInitialIntervals) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "grid_size must be at least %d, got %d", kInitialIntervals, grid_size));
  }
  int intervals = kInitialIntervals;
  auto current = SolveOnGrid(scenario, intervals);
  if (!current.ok()) return current.status();
  while (2 * intervals <= grid_size) {
    intervals *= 2;
    auto finer = SolveOnGrid(scenario, intervals);
    if (!finer.ok()) return finer.status();
    const double change = std::abs(finer->objective - current->objective) /
                          std::abs(finer->objective);
    current = std::move(finer);
    if (change < kRefineTol) break;
  }
  return std::move(current->menu);
}

absl::StatusOr<ContractItem> EvalMenu(const ContinuousMenu& menu,
                                      double theta) {
  if (!(theta >= menu.theta_low && theta <= menu.theta_high)) {
    return absl::OutOfRangeError(
        absl::StrFormat("theta=%g lies outside the support [%g, %g]", theta,
                        menu.theta_low, menu.theta_high));
  }
  const auto& grid = menu.grid;
  auto it = std::lower_bound(grid.begin(), grid.end(), theta);
  size_t j = static_cast<size_t>(it - grid.begin());
  if (j < grid.size() && grid[j] == theta) {
    return ContractItem{.epsilon = menu.eps_values[j],
                        .payment = menu.pay_values[j]};
  }
  // theta lies strictly between grid[j-1] and grid[j].
  const double t = (theta - grid[j - 1]) / (grid[j] - grid[j - 1]);
  auto lerp = [t](double a, double b) { return a + t * (b - a); };
  return ContractItem{
      .epsilon = lerp(menu.eps_values[j - 1], menu.eps_values[j]),
      .payment = lerp(menu.pay_values[j - 1], menu.pay_values[j])};
}

double ObjectiveContinuous(const ContinuousMenu& menu,
                           const ContinuousScenario& scenario) {
  std::vector<double> f(menu.grid.size());
  for (size_t j = 0; j < f.size(); ++j) {
    const double eps = menu.eps_values[j];
    f[j] = scenario.density().Pdf(menu.grid[j]) / (eps * eps);
  }
  const double dx = (menu.theta_high - menu.theta_low) / (f.size() - 1);
  return Simpson(f, dx);
}

double BudgetSpent(const ContinuousMenu& menu,
                   const ContinuousScenario& scenario) {
  std::vector<double> f(menu.grid.size());
  for (size_t j = 0; j < f.size(); ++j) {
    f[j] = menu.pay_values[j] * scenario.density().Pdf(menu.grid[j]);
  }
  const double dx = (menu.theta_high - menu.theta_low) / (f.size() - 1);
  return scenario.ctx().n() * Simpson(f, dx);
}

absl::StatusOr<DiscreteScenario> DiscretizeDensity(
    const ContinuousScenario& scenario, int k) {
  if (k < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("k must be positive, got %d", k));
  }
  const TypeDensity& density = scenario.density();
  const double lo = density.theta_low();
  const double width = (density.theta_high() - lo) / k;
  std::vector<PuType> types;
  types.reserve(k);
  double prev_cdf = 0;
  for (int i = 1; i <= k; ++i) {
    const double right = i == k ? density.theta_high() : lo + width * i;
    const double cdf = i == k ? 1.0 : density.Cdf(right);
    types.push_back(
        {.theta = right, .lambda = scenario.ctx().n() * (cdf - prev_cdf)});
    prev_cdf = cdf;
  }
  return DiscreteScenario::Create(scenario.budget(), std::move(types),
                                  scenario.ctx().gamma(),
                                  scenario.ctx().delta());
}

}  // namespace reap
