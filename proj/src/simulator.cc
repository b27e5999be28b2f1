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

#include <algorithm>
#include <cmath>

#include "absl/status/status.h"
#include "absl/strings/str_format.h"

namespace reap {
namespace {

constexpr double kTieTol = 1e-9;
constexpr uint64_t kRawStream = 0;
constexpr uint64_t kThetaStream = 1;
constexpr double kReportedQuantiles[] = {0.5, 0.9, 0.95, 0.99};

double DrawRaw(RawDistribution dist, double gamma, RandomStream& rng) {
  const double u = rng.NextUniform();
  switch (dist) {
    case RawDistribution::kUniform:
      return gamma * u;
    case RawDistribution::kBimodal: {
      const double v = rng.NextUniform();
      return u < 0.5 ? 0.2 * gamma * v : gamma * (0.8 + 0.2 * v);
    }
  }
  return 0;
}

// Item and contract index each agent ends up with.
struct Assignment {
  std::vector<int> chosen_index;
  std::vector<ContractItem> items;
};

absl::StatusOr<Assignment> Assign(const std::vector<Agent>& agents,
                                  const ContractMenu& menu) {
  Assignment a;
  const int k = static_cast<int>(menu.items.size());
  for (const Agent& agent : agents) {
    const bool typed = agent.type_index >= 0 && agent.type_index < k;
    size_t j;
    if (menu.regime == Regime::kComplete) {
      if (!typed) {
        return absl::InvalidArgumentError(absl::StrFormat(
            "agent %d has no type index into the %d-item complete menu",
            agent.id, k));
      }
      j = static_cast<size_t>(agent.type_index);
    } else {
      j = SelectItem(agent.theta, menu.items);
      if (typed) {
        const ContractItem& own = menu.items[agent.type_index];
        if (own.epsilon == menu.items[j].epsilon &&
            own.payment == menu.items[j].payment) {
          j = static_cast<size_t>(agent.type_index);
        }
      }
    }
    a.chosen_index.push_back(static_cast<int>(j));
    a.items.push_back(menu.items[j]);
  }
  return a;
}

absl::StatusOr<Assignment> Assign(const std::vector<Agent>& agents,
                                  const ContinuousMenu& menu) {
  Assignment a;
  for (const Agent& agent : agents) {
    auto item = EvalMenu(menu, agent.theta);
    if (!item.ok()) return item.status();
    a.chosen_index.push_back(-1);
    a.items.push_back(*item);
  }
  return a;
}

absl::Status CheckPopulation(const std::vector<Agent>& agents,
                             const SensingContext& ctx) {
  if (static_cast<int>(agents.size()) != ctx.n()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "population has %d agents but the sensing context expects n=%d",
        agents.size(), ctx.n()));
  }
  return absl::OkStatus();
}

absl::StatusOr<std::vector<LaplaceScale>> Scales(const Assignment& a,
                                                 const SensingContext& ctx) {
  std::vector<LaplaceScale> scales;
  scales.reserve(a.items.size());
  for (const ContractItem& item : a.items) {
    auto b = CalibrateLaplace(ctx.gamma(), item.epsilon);
    if (!b.ok()) return b.status();
    scales.push_back(*b);
  }
  return scales;
}

RoundResult Round(const std::vector<Agent>& agents, const Assignment& a,
                  const std::vector<LaplaceScale>& scales, RandomStream rng,
                  const NoiseFn& noise) {
  RoundResult r;
  r.chosen_index = a.chosen_index;
  r.reports.reserve(agents.size());
  double raw_sum = 0, report_sum = 0;
  for (size_t i = 0; i < agents.size(); ++i) {
    const double eta =
        noise ? noise(scales[i], rng) : SampleLaplace(scales[i], rng);
    const PerturbedReading reading =
        PerturbWithNoise(agents[i].raw_reading, scales[i], eta);
    r.reports.push_back(reading.noisy);
    raw_sum += reading.raw;
    report_sum += reading.noisy;
    r.total_payment += a.items[i].payment;
  }
  const double n = static_cast<double>(agents.size());
  r.s_true = raw_sum / n;
  r.s_hat = report_sum / n;
  r.abs_error = std::abs(r.s_hat - r.s_true);
  return r;
}

absl::StatusOr<RoundResult> RoundFor(const std::vector<Agent>& agents,
                                     const Assignment& a,
                                     const SensingContext& ctx, uint64_t seed,
                                     const NoiseFn& noise) {
  if (absl::Status s = CheckPopulation(agents, ctx); !s.ok()) return s;
  auto scales = Scales(a, ctx);
  if (!scales.ok()) return scales.status();
  return Round(agents, a, *scales, RandomStream::Derive(seed, 0), noise);
}

absl::StatusOr<MonteCarloRun> MonteCarloFor(const std::vector<Agent>& agents,
                                            const Assignment& a,
                                            const SensingContext& ctx,
                                            int64_t trials, uint64_t seed) {
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrFormat("trials must be at least 1, got %d", trials));
  }
  if (absl::Status s = CheckPopulation(agents, ctx); !s.ok()) return s;
  auto scales = Scales(a, ctx);
  if (!scales.ok()) return scales.status();

  double inverse_square_sum = 0;
  for (const ContractItem& item : a.items) {
    inverse_square_sum += 1.0 / (item.epsilon * item.epsilon);
  }

  MonteCarloRun run;
  MonteCarloReport& rep = run.report;
  rep.trials = trials;
  rep.predicted_alpha = AccuracyFromInverseSquareSum(ctx, inverse_square_sum);
  rep.allowed_violation_rate = 1.0 - ctx.delta();

  run.rows.reserve(static_cast<size_t>(trials));
  std::vector<double> errors;
  errors.reserve(static_cast<size_t>(trials));
  int64_t violations = 0;
  double abs_sum = 0, signed_sum = 0;
  for (int64_t t = 0; t < trials; ++t) {
    const RoundResult r = Round(agents, a, *scales,
                                RandomStream::Derive(seed, t), nullptr);
    run.rows.push_back({.trial = t,
                        .s_true = r.s_true,
                        .s_hat = r.s_hat,
                        .abs_error = r.abs_error,
                        .total_payment = r.total_payment});
    if (r.abs_error >= rep.predicted_alpha) ++violations;
    abs_sum += r.abs_error;
    signed_sum += r.s_hat - r.s_true;
    errors.push_back(r.abs_error);
  }
  rep.violation_rate = static_cast<double>(violations) / trials;
  rep.mean_abs_error = abs_sum / trials;
  rep.mean_signed_error = signed_sum / trials;

  std::sort(errors.begin(), errors.end());
  for (double q : kReportedQuantiles) {
    const auto rank = static_cast<size_t>(
        std::max(1.0, std::ceil(q * static_cast<double>(errors.size()))));
    rep.error_quantiles.emplace_back(q, errors[rank - 1]);
  }
  return run;
}

}  // namespace

absl::StatusOr<RawDistribution> ParseRawDistribution(const std::string& name) {
  if (name == "uniform") return RawDistribution::kUniform;
  if (name == "bimodal") return RawDistribution::kBimodal;
  return absl::InvalidArgumentError(
      absl::StrFormat("unknown raw distribution '%s'", name));
}

std::string RawDistributionName(RawDistribution dist) {
  return dist == RawDistribution::kUniform ? "uniform" : "bimodal";
}

absl::StatusOr<std::vector<Agent>> BuildPopulation(
    const DiscreteScenario& scenario, RawDistribution raw, uint64_t seed) {
  std::vector<int> counts;
  int total = 0;
  for (const PuType& t : scenario.types()) {
    const double rounded = std::round(t.lambda);
    if (std::abs(t.lambda - rounded) > 1e-6) {
      return absl::InvalidArgumentError(absl::StrFormat(
          "type theta=%g has non-integer population %g", t.theta, t.lambda));
    }
    counts.push_back(static_cast<int>(rounded));
    total += counts.back();
  }
  if (total != scenario.ctx().n()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "rounded populations sum to %d, expected n=%d", total,
        scenario.ctx().n()));
  }
  RandomStream rng = RandomStream::Derive(seed, kRawStream);
  std::vector<Agent> agents;
  agents.reserve(total);
  for (size_t i = 0; i < counts.size(); ++i) {
    for (int c = 0; c < counts[i]; ++c) {
      agents.push_back({.id = static_cast<int>(agents.size()),
                        .theta = scenario.types()[i].theta,
                        .raw_reading =
                            DrawRaw(raw, scenario.ctx().gamma(), rng),
                        .type_index = static_cast<int>(i)});
    }
  }
  return agents;
}

absl::StatusOr<std::vector<Agent>> BuildPopulation(
    const ContinuousScenario& scenario, RawDistribution raw, uint64_t seed) {
  RandomStream raw_rng = RandomStream::Derive(seed, kRawStream);
  RandomStream theta_rng = RandomStream::Derive(seed, kThetaStream);
  std::vector<Agent> agents;
  agents.reserve(scenario.ctx().n());
  for (int i = 0; i < scenario.ctx().n(); ++i) {
    const double theta = scenario.density().Quantile(theta_rng.NextUniform());
    agents.push_back(
        {.id = i,
         .theta = theta,
         .raw_reading = DrawRaw(raw, scenario.ctx().gamma(), raw_rng)});
  }
  return agents;
}

size_t SelectItem(double theta, std::span<const ContractItem> items) {
  size_t best = 0;
  double best_u = Utility(items[0], theta);
  for (size_t j = 1; j < items.size(); ++j) {
    const double u = Utility(items[j], theta);
    const double scale =
        std::max({std::abs(items[j].payment), theta * items[j].epsilon,
                  std::abs(items[best].payment), theta * items[best].epsilon});
    if (u > best_u + kTieTol * scale) {
      best = j;
      best_u = u;
    } else if (u >= best_u - kTieTol * scale &&
               items[j].epsilon > items[best].epsilon) {
      best = j;
      best_u = u;
    }
  }
  return best;
}

absl::StatusOr<RoundResult> RunRound(const std::vector<Agent>& agents,
                                     const ContractMenu& menu,
                                     const SensingContext& ctx, uint64_t seed,
                                     const NoiseFn& noise) {
  auto a = Assign(agents, menu);
  if (!a.ok()) return a.status();
  return RoundFor(agents, *a, ctx, seed, noise);
}

absl::StatusOr<RoundResult> RunRound(const std::vector<Agent>& agents,
                                     const ContinuousMenu& menu,
                                     const SensingContext& ctx, uint64_t seed,
                                     const NoiseFn& noise) {
  auto a = Assign(agents, menu);
  if (!a.ok()) return a.status();
  return RoundFor(agents, *a, ctx, seed, noise);
}

absl::StatusOr<MonteCarloRun> MonteCarlo(const std::vector<Agent>& agents,
                                         const ContractMenu& menu,
                                         const SensingContext& ctx,
                                         int64_t trials, uint64_t seed) {
  auto a = Assign(agents, menu);
  if (!a.ok()) return a.status();
  return MonteCarloFor(agents, *a, ctx, trials, seed);
}

absl::StatusOr<MonteCarloRun> MonteCarlo(const std::vector<Agent>& agents,
                                         const ContinuousMenu& menu,
                                         const SensingContext& ctx,
                                         int64_t trials, uint64_t seed) {
  auto a = Assign(agents, menu);
  if (!a.ok()) return a.status();
  return MonteCarloFor(agents, *a, ctx, trials, seed);
}

}  // namespace reap
