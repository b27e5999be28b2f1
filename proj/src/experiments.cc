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

#include "reap/experiments.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "json_util.h"
#include "reap/random_stream.h"
#include "reap/serialization.h"
#include "reap/simulator.h"

namespace reap {
namespace {

using json_util::Json;
using json_util::Reader;

absl::Status Invalid(std::string_view field, std::string_view message) {
  return absl::InvalidArgumentError(
      absl::StrCat("config.", std::string(field), ": ", std::string(message)));
}

std::vector<double> Linspace(double from, double to, int steps) {
  std::vector<double> out;
  if (steps == 1) return {from};
  for (int i = 0; i < steps; ++i) {
    out.push_back(i == steps - 1 ? to : from + (to - from) * i / (steps - 1));
  }
  return out;
}

absl::Status ValidateDensity(const DensitySpec& d) {
  if (d.kind != "uniform" && d.kind != "truncated_normal") {
    return Invalid("types.kind", absl::StrFormat(
        "expected uniform or truncated_normal, got '%s'", d.kind));
  }
  if (!(d.theta_low > 0)) return Invalid("types.theta_low", "must be > 0");
  if (!(d.theta_high > d.theta_low)) {
    return Invalid("types.theta_high", "must exceed theta_low");
  }
  if (d.k < 1) return Invalid("types.k", "must be >= 1");
  if (d.kind == "truncated_normal") {
    if (!d.mean.has_value()) {
      return Invalid("types.mean", "required for truncated_normal");
    }
    if (!d.stddev.has_value() || !(*d.stddev > 0)) {
      return Invalid("types.stddev", "required and must be > 0");
    }
  } else if (d.mean.has_value() || d.stddev.has_value()) {
    return Invalid("types", "mean and stddev apply to truncated_normal only");
  }
  return absl::OkStatus();
}

absl::Status ValidateSweep(const SweepSpec& s, const ExperimentConfig& c) {
  if (s.parameter != "budget" && s.parameter != "k" &&
      s.parameter != "lambda-grid") {
    return Invalid("sweep.parameter", absl::StrFormat(
        "expected budget, k or lambda-grid, got '%s'", s.parameter));
  }
  if (s.steps < 1) return Invalid("sweep.steps", "must be >= 1");
  if (!(s.from <= s.to)) return Invalid("sweep.to", "must be >= from");
  if (s.parameter == "budget" && !(s.from > 0)) {
    return Invalid("sweep.from", "budget must be > 0");
  }
  if (s.parameter == "k") {
    if (!std::holds_alternative<DensitySpec>(c.types)) {
      return Invalid("types", "a k sweep needs a density spec");
    }
    if (s.from < 1) return Invalid("sweep.from", "k must be >= 1");
  }
  if (s.parameter == "lambda-grid") {
    const auto* list = std::get_if<std::vector<PuType>>(&c.types);
    if (list == nullptr || list->size() != 3) {
      return Invalid("types", "a lambda-grid sweep needs exactly 3 types");
    }
    if (s.from < 0 || s.to > c.n) {
      return Invalid("sweep", "lambda_1 range must lie within [0, n]");
    }
    if (!(s.lambda_step > 0)) {
      return Invalid("sweep.lambda_step", "must be > 0");
    }
  }
  return absl::OkStatus();
}

Json TypesToJson(const ExperimentConfig& c) {
  if (const auto* list = std::get_if<std::vector<PuType>>(&c.types)) {
    Json out = Json::array();
    for (const PuType& t : *list) {
      out.push_back({{"theta", t.theta}, {"lambda", t.lambda}});
    }
    return out;
  }
  const DensitySpec& d = std::get<DensitySpec>(c.types);
  Json out = {{"kind", d.kind},
              {"theta_low", d.theta_low},
              {"theta_high", d.theta_high},
              {"k", d.k}};
  if (d.mean) out["mean"] = *d.mean;
  if (d.stddev) out["stddev"] = *d.stddev;
  return out;
}

double RelDiff(double a, double b) {
  return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

VerifyCheck AtMost(std::string name, double value, double tol) {
  return {.name = std::move(name),
          .passed = value <= tol,
          .value = value,
          .tolerance = tol};
}

// Two-regime comparison shared by the budget and type-count sweeps.
std::vector<double> RegimeRow(double value, const DiscreteScenario& s) {
  const ContractMenu complete = SolveComplete(s);
  const ContractMenu incomplete = SolveIncomplete(s);
  const double ac = AlphaOfMenu(complete, s);
  const double ai = AlphaOfMenu(incomplete, s);
  return {value, ac, ai, ai / ac, ObjectiveValue(complete, s),
          ObjectiveValue(incomplete, s)};
}

const std::vector<std::string> kRegimeColumns = {
    "value",      "alpha_complete",     "alpha_incomplete",
    "ratio",      "objective_complete", "objective_incomplete"};

}  // namespace

absl::StatusOr<ExperimentConfig> ParseConfig(const std::string& json) {
  auto parsed = json_util::Parse(json);
  if (!parsed.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("config: ", parsed.status().message()));
  }
  Reader r(*parsed, "config");
  r.Allow({"regime", "budget", "gamma", "delta", "n", "types", "sweep",
           "trials", "seed", "output", "grid_size", "raw_distribution"});

  ExperimentConfig c;
  if (r.Has("regime")) c.regime = r.String("regime");
  if (r.Has("budget")) c.budget = r.Number("budget");
  if (r.Has("gamma")) c.gamma = r.Number("gamma");
  if (r.Has("delta")) c.delta = r.Number("delta");
  if (r.Has("n")) c.n = static_cast<int>(r.Integer("n"));
  if (r.Has("trials")) c.trials = r.Integer("trials");
  if (r.Has("seed")) c.seed = r.Unsigned("seed");
  if (r.Has("output")) c.output = r.String("output");
  if (r.Has("grid_size")) c.grid_size = static_cast<int>(r.Integer("grid_size"));
  if (r.Has("raw_distribution")) {
    c.raw_distribution = r.String("raw_distribution");
  }
  if (r.Has("types")) {
    if (r.json()["types"].is_array()) {
      std::vector<PuType> list;
      for (const Reader& t : r.Array("types")) {
        t.Allow({"theta", "lambda"});
        list.push_back({.theta = t.Number("theta"),
                        .lambda = t.Number("lambda")});
      }
      c.types = std::move(list);
    } else {
      const Reader t = r.Object("types");
      t.Allow({"kind", "theta_low", "theta_high", "k", "mean", "stddev"});
      DensitySpec d;
      if (t.Has("kind")) d.kind = t.String("kind");
      if (t.Has("theta_low")) d.theta_low = t.Number("theta_low");
      if (t.Has("theta_high")) d.theta_high = t.Number("theta_high");
      if (t.Has("k")) d.k = static_cast<int>(t.Integer("k"));
      d.mean = t.OptionalNumber("mean");
      d.stddev = t.OptionalNumber("stddev");
      c.types = d;
    }
  }
  if (r.Has("sweep")) {
    const Reader s = r.Object("sweep");
    s.Allow({"parameter", "from", "to", "steps", "lambda_step"});
    SweepSpec sweep;
    sweep.parameter = s.String("parameter");
    sweep.from = s.Number("from");
    sweep.to = s.Number("to");
    sweep.steps = static_cast<int>(s.Integer("steps"));
    if (s.Has("lambda_step")) sweep.lambda_step = s.Number("lambda_step");
    c.sweep = sweep;
  }
  if (absl::Status s = r.status(); !s.ok()) return s;
  if (absl::Status s = ValidateConfig(c); !s.ok()) return s;
  return c;
}

std::string SerializeConfig(const ExperimentConfig& c) {
  Json out = {{"regime", c.regime},
              {"budget", c.budget},
              {"gamma", c.gamma},
              {"delta", c.delta},
              {"n", c.n},
              {"types", TypesToJson(c)}};
  if (c.sweep) {
    out["sweep"] = {{"parameter", c.sweep->parameter},
                    {"from", c.sweep->from},
                    {"to", c.sweep->to},
                    {"steps", c.sweep->steps},
                    {"lambda_step", c.sweep->lambda_step}};
  }
  out["trials"] = c.trials;
  out["seed"] = c.seed;
  out["output"] = c.output;
  out["grid_size"] = c.grid_size;
  out["raw_distribution"] = c.raw_distribution;
  return out.dump(2) + "\n";
}

absl::Status ValidateConfig(const ExperimentConfig& c) {
  if (c.regime != "complete" && c.regime != "incomplete" &&
      c.regime != "continuous") {
    return Invalid("regime", absl::StrFormat(
        "expected complete, incomplete or continuous, got '%s'", c.regime));
  }
  if (!(c.budget > 0)) return Invalid("budget", "must be > 0");
  if (!(c.gamma > 0)) return Invalid("gamma", "must be > 0");
  if (!(c.delta >= 0 && c.delta < 1)) {
    return Invalid("delta", "must lie in [0, 1)");
  }
  if (c.n < 1) return Invalid("n", "must be >= 1");
  if (c.trials < 1) return Invalid("trials", "must be >= 1");
  if (c.grid_size < 64) return Invalid("grid_size", "must be >= 64");
  if (c.output.empty()) return Invalid("output", "must not be empty");
  if (auto raw = ParseRawDistribution(c.raw_distribution); !raw.ok()) {
    return Invalid("raw_distribution", std::string(raw.status().message()));
  }
  if (const auto* d = std::get_if<DensitySpec>(&c.types)) {
    if (absl::Status s = ValidateDensity(*d); !s.ok()) return s;
  } else {
    const auto& list = std::get<std::vector<PuType>>(c.types);
    if (list.empty()) return Invalid("types", "must not be empty");
    if (c.regime == "continuous") {
      return Invalid("types", "the continuous regime needs a density spec");
    }
  }
  if (c.sweep) {
    if (absl::Status s = ValidateSweep(*c.sweep, c); !s.ok()) return s;
  }
  return absl::OkStatus();
}

absl::StatusOr<Regime> DiscreteRegimeOf(const ExperimentConfig& config) {
  if (config.regime == "continuous") {
    return absl::InvalidArgumentError(
        "config.regime: a discrete regime is required here");
  }
  return ParseRegime(config.regime);
}

absl::StatusOr<std::vector<PuType>> TypesOf(const ExperimentConfig& config) {
  if (const auto* list = std::get_if<std::vector<PuType>>(&config.types)) {
    return *list;
  }
  const DensitySpec& d = std::get<DensitySpec>(config.types);
  if (absl::Status s = ValidateDensity(d); !s.ok()) return s;
  const std::vector<double> thetas = Linspace(d.theta_low, d.theta_high, d.k);
  std::vector<double> weights(thetas.size(), 1.0);
  if (d.kind == "truncated_normal") {
    auto density = DensityOf(config);
    if (!density.ok()) return density.status();
    for (size_t i = 0; i < thetas.size(); ++i) {
      weights[i] = density->Pdf(thetas[i]);
    }
  }
  double total = 0;
  for (double w : weights) total += w;
  std::vector<PuType> types;
  for (size_t i = 0; i < thetas.size(); ++i) {
    types.push_back({.theta = thetas[i], .lambda = config.n * weights[i] / total});
  }
  return types;
}

absl::StatusOr<DiscreteScenario> DiscreteScenarioOf(
    const ExperimentConfig& config) {
  auto types = TypesOf(config);
  if (!types.ok()) return types.status();
  return DiscreteScenario::Create(config.budget, *std::move(types),
                                  config.gamma, config.delta);
}

absl::StatusOr<TypeDensity> DensityOf(const ExperimentConfig& config) {
  const auto* d = std::get_if<DensitySpec>(&config.types);
  if (d == nullptr) {
    return absl::InvalidArgumentError(
        "config.types: a density spec is required here");
  }
  if (d->kind == "truncated_normal") {
    return TypeDensity::TruncatedNormal(d->mean.value_or(0),
                                        d->stddev.value_or(0), d->theta_low,
                                        d->theta_high);
  }
  return TypeDensity::Uniform(d->theta_low, d->theta_high);
}

absl::StatusOr<ContinuousScenario> ContinuousScenarioOf(
    const ExperimentConfig& config) {
  auto density = DensityOf(config);
  if (!density.ok()) return density.status();
  return ContinuousScenario::Create(config.budget, *std::move(density),
                                    config.gamma, config.delta, config.n);
}

std::string Table::ToCsv() const {
  std::string out;
  for (size_t i = 0; i < columns.size(); ++i) {
    absl::StrAppend(&out, i ? "," : "", columns[i]);
  }
  out += "\n";
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) {
      absl::StrAppend(&out, i ? "," : "", FormatDouble(row[i]));
    }
    out += "\n";
  }
  return out;
}

std::string Table::ToJson() const {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json obj = Json::object();
    for (size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = row[i];
    out.push_back(std::move(obj));
  }
  return out.dump(2) + "\n";
}

absl::StatusOr<Table> BudgetSweep(const ExperimentConfig& config, double from,
                                  double to, int steps) {
  auto scenario = DiscreteScenarioOf(config);
  if (!scenario.ok()) return scenario.status();
  Table table{.columns = kRegimeColumns, .rows = {}};
  for (double b : Linspace(from, to, steps)) {
    if (!(b > 0)) return Invalid("sweep.from", "budget must be > 0");
    table.rows.push_back(RegimeRow(b, scenario->WithBudget(b)));
  }
  return table;
}

absl::StatusOr<Table> TypeCountSweep(const ExperimentConfig& config,
                                     double from, double to, int steps) {
  if (!std::holds_alternative<DensitySpec>(config.types)) {
    return Invalid("types", "a k sweep needs a density spec");
  }
  Table table{.columns = kRegimeColumns, .rows = {}};
  std::set<int> seen;
  for (double v : Linspace(from, to, steps)) {
    const int k = static_cast<int>(std::lround(v));
    if (!seen.insert(k).second) {
      return Invalid("sweep.steps",
                     absl::StrFormat("k value %d repeats after rounding", k));
    }
    ExperimentConfig c = config;
    std::get<DensitySpec>(c.types).k = k;
    auto scenario = DiscreteScenarioOf(c);
    if (!scenario.ok()) return scenario.status();
    table.rows.push_back(RegimeRow(k, *scenario));
  }
  return table;
}

absl::StatusOr<Table> LambdaGridSweep(const ExperimentConfig& config,
                                      double from, double to, int steps,
                                      double lambda_step) {
  const auto* list = std::get_if<std::vector<PuType>>(&config.types);
  if (list == nullptr || list->size() != 3) {
    return Invalid("types", "a lambda-grid sweep needs exactly 3 types");
  }
  if (!(lambda_step > 0)) return Invalid("sweep.lambda_step", "must be > 0");
  const double n = config.n;
  Table table{.columns = {"lambda1", "lambda2", "lambda3", "alpha_complete",
                          "alpha_incomplete", "ratio"},
              .rows = {}};
  for (double l1 : Linspace(from, to, steps)) {
    for (int j = 0;; ++j) {
      const double l2 = j * lambda_step;
      const double l3 = n - l1 - l2;
      if (l3 < -1e-9 * n) break;
      std::vector<PuType> types = *list;
      types[0].lambda = l1;
      types[1].lambda = l2;
      types[2].lambda = std::max(0.0, l3);
      auto s = DiscreteScenario::Create(config.budget, types, config.gamma,
                                        config.delta);
      if (!s.ok()) return s.status();
      const double ac = AlphaOfMenu(SolveComplete(*s), *s);
      const double ai = AlphaOfMenu(SolveIncomplete(*s), *s);
      table.rows.push_back({l1, l2, types[2].lambda, ac, ai, ai / ac});
    }
  }
  return table;
}

absl::StatusOr<Table> RunSweep(const ExperimentConfig& config) {
  if (!config.sweep) {
    return absl::InvalidArgumentError("config.sweep: missing sweep spec");
  }
  const SweepSpec& s = *config.sweep;
  if (s.parameter == "budget") return BudgetSweep(config, s.from, s.to, s.steps);
  if (s.parameter == "k") return TypeCountSweep(config, s.from, s.to, s.steps);
  if (s.parameter == "lambda-grid") {
    return LambdaGridSweep(config, s.from, s.to, s.steps, s.lambda_step);
  }
  return Invalid("sweep.parameter",
                 absl::StrFormat("unknown sweep parameter '%s'", s.parameter));
}

ExperimentConfig Fig2Config() {
  ExperimentConfig c;
  c.budget = 1000;
  c.gamma = 10;
  c.delta = 0.9;
  c.n = 300;
  c.types = std::vector<PuType>{{1, 100}, {2, 100}, {3, 100}};
  c.sweep = SweepSpec{.parameter = "lambda-grid",
                      .from = 0,
                      .to = 250,
                      .steps = 6,
                      .lambda_step = 10};
  return c;
}

absl::StatusOr<Table> FigureTable(const std::string& id,
                                  const ExperimentConfig& config) {
  if (id == "fig2") {
    ExperimentConfig c = Fig2Config();
    if (config.sweep && config.sweep->parameter == "lambda-grid") {
      c.sweep->lambda_step = config.sweep->lambda_step;
    }
    return RunSweep(c);
  }
  if (id == "fig5") return BudgetSweep(config, 500, 1000, 6);
  if (id == "fig6") return TypeCountSweep(config, 5, 20, 4);
  if (id != "fig3" && id != "fig4") {
    return absl::InvalidArgumentError(absl::StrFormat(
        "unknown figure '%s'; expected fig2, fig3, fig4, fig5 or fig6", id));
  }

  auto scenario = DiscreteScenarioOf(config);
  if (!scenario.ok()) return scenario.status();
  const ContractMenu complete = SolveComplete(*scenario);
  const ContractMenu incomplete = SolveIncomplete(*scenario);
  const auto& types = scenario->types();
  Table table;
  if (id == "fig3") {
    table.columns = {"type_index",       "theta",
                     "lambda",           "epsilon_complete",
                     "payment_complete", "epsilon_incomplete",
                     "payment_incomplete"};
    for (size_t i = 0; i < types.size(); ++i) {
      table.rows.push_back({static_cast<double>(i + 1), types[i].theta,
                            types[i].lambda, complete.items[i].epsilon,
                            complete.items[i].payment,
                            incomplete.items[i].epsilon,
                            incomplete.items[i].payment});
    }
    return table;
  }

  // fig4: utility of a few representative types for every item.
  std::vector<size_t> shown;
  for (size_t t : {5, 10, 15}) {
    if (t <= types.size()) shown.push_back(t);
  }
  if (shown.empty()) {
    return absl::InvalidArgumentError("fig4 needs at least 5 types");
  }
  table.columns = {"item"};
  for (size_t t : shown) table.columns.push_back(absl::StrCat("utility_type", t));
  for (size_t j = 0; j < incomplete.items.size(); ++j) {
    std::vector<double> row = {static_cast<double>(j + 1)};
    for (size_t t : shown) {
      row.push_back(Utility(incomplete.items[j], types[t - 1].theta));
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

bool VerifyReport::passed() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const VerifyCheck& c) { return c.passed; });
}

std::string VerifyReport::ToText() const {
  std::string out;
  for (const VerifyCheck& c : checks) {
    absl::StrAppendFormat(&out, "%s %-22s value=%.6g tol=%.3g\n",
                          c.passed ? "PASS" : "FAIL", c.name, c.value,
                          c.tolerance);
  }
  for (const std::string& n : notices) absl::StrAppend(&out, "NOTE ", n, "\n");
  absl::StrAppend(&out, passed() ? "verify: PASS\n" : "verify: FAIL\n");
  return out;
}

std::string VerifyReport::ToJson() const {
  Json checks_json = Json::array();
  for (const VerifyCheck& c : checks) {
    checks_json.push_back({{"name", c.name},
                           {"passed", c.passed},
                           {"value", c.value},
                           {"tolerance", c.tolerance}});
  }
  Json out = {{"passed", passed()},
              {"checks", checks_json},
              {"notices", notices}};
  return out.dump(2) + "\n";
}

absl::StatusOr<VerifyReport> VerifyDiscrete(const ContractMenu& menu,
                                            const DiscreteScenario& scenario,
                                            bool run_oracle,
                                            const OracleSettings& settings) {
  auto report = CheckConstraints(menu, scenario);
  if (!report.ok()) return report.status();
  const size_t k = scenario.k();
  const bool incomplete = menu.regime == Regime::kIncomplete;
  VerifyReport out;

  out.checks.push_back(AtMost(
      "budget", std::abs(report->budget_residual) / scenario.budget(),
      kEqualityTol));
  out.checks.push_back(
      AtMost("ir", 0.0 - report->MinRelativeIrResidual(), kEqualityTol));
  double ir_eq = 0;
  for (size_t i = incomplete ? k - 1 : 0; i < k; ++i) {
    ir_eq = std::max(
        ir_eq, std::abs(report->ir_residuals[i]) / report->payment_scales[i]);
  }
  out.checks.push_back(
      AtMost(incomplete ? "ir_top_equality" : "ir_equality", ir_eq,
             kEqualityTol));
  if (incomplete) {
    out.checks.push_back(
        AtMost("ic", report->MaxRelativeIcViolation(), kEqualityTol));
    double adjacent = 0;
    for (size_t i = 0; i + 1 < k; ++i) {
      const auto& row = report->ic_matrix[i];
      adjacent = std::max(adjacent, std::abs(row[i] - row[i + 1]) /
                                        report->payment_scales[i]);
    }
    out.checks.push_back(
        AtMost("adjacent_ic_equality", adjacent, kEqualityTol));
  } else {
    out.notices.push_back(
        "IC checks do not apply to complete-information menus");
  }
  out.checks.push_back({.name = "monotonic",
                        .passed = report->monotonic,
                        .value = report->monotonic ? 0.0 : 1.0,
                        .tolerance = 0});
  double kkt = 0;
  for (double r : KktResiduals(menu, scenario)) kkt = std::max(kkt, std::abs(r));
  out.checks.push_back(AtMost("kkt", kkt, kEqualityTol));

  if (!run_oracle) {
    out.notices.push_back("oracle comparison disabled");
    return out;
  }
  if (k > 3) {
    out.notices.push_back(absl::StrFormat(
        "oracle comparison skipped: k=%d exceeds the oracle limit of 3", k));
    return out;
  }
  auto oracle = incomplete ? OracleIncomplete(scenario, settings)
                           : OracleComplete(scenario, settings);
  if (!oracle.ok()) return oracle.status();
  const double objective = ObjectiveValue(menu, scenario);
  out.checks.push_back({.name = "oracle_feasible",
                        .passed = oracle->feasible,
                        .value = oracle->feasible ? 0.0 : 1.0,
                        .tolerance = 0});
  out.checks.push_back(AtMost("oracle_objective",
                              RelDiff(oracle->objective, objective),
                              kOracleTol));
  out.checks.push_back(AtMost(
      "oracle_unrestricted",
      std::max(0.0, (objective - oracle->unrestricted_objective) / objective),
      kOracleTol));
  if (incomplete) {
    out.checks.push_back({.name = "oracle_non_monotone",
                          .passed = !oracle->non_monotone_improved,
                          .value = oracle->non_monotone_improved ? 1.0 : 0.0,
                          .tolerance = 0});
  }
  return out;
}

absl::StatusOr<VerifyReport> VerifyContinuous(
    const ContinuousMenu& menu, const ContinuousScenario* scenario,
    uint64_t seed, int ic_pairs) {
  if (menu.grid.size() < 2) {
    return absl::InvalidArgumentError("continuous menu has fewer than 2 nodes");
  }
  VerifyReport out;
  const size_t last = menu.grid.size() - 1;
  out.checks.push_back(AtMost(
      "ir_top_equality",
      std::abs(menu.pay_values[last] - menu.theta_high * menu.eps_values[last]),
      kContinuousTol));

  double ir = 0, monotone = 0;
  for (size_t i = 0; i <= last; ++i) {
    ir = std::max(ir, -(menu.pay_values[i] - menu.grid[i] * menu.eps_values[i]));
    if (i > 0) {
      monotone =
          std::max(monotone, menu.eps_values[i] - menu.eps_values[i - 1]);
    }
  }
  out.checks.push_back(AtMost("ir", ir, kContinuousTol));
  out.checks.push_back({.name = "monotonic",
                        .passed = monotone <= 0,
                        .value = monotone,
                        .tolerance = 0});

  RandomStream rng(seed);
  const double width = menu.theta_high - menu.theta_low;
  double ic = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < ic_pairs; ++i) {
    const double theta = menu.theta_low + width * rng.NextUniform();
    const double report = menu.theta_low + width * rng.NextUniform();
    auto own = EvalMenu(menu, theta);
    auto other = EvalMenu(menu, report);
    if (!own.ok()) return own.status();
    if (!other.ok()) return other.status();
    ic = std::max(ic, Utility(*other, theta) - Utility(*own, theta));
  }
  out.checks.push_back(AtMost("ic_sampled", ic, kContinuousTol));

  if (scenario != nullptr) {
    const double spent = BudgetSpent(menu, *scenario);
    out.checks.push_back(AtMost(
        "budget", std::abs(spent - scenario->budget()) / scenario->budget(),
        kContinuousTol));
  } else {
    out.notices.push_back("budget check skipped: no type density supplied");
  }
  return out;
}

}  // namespace reap
