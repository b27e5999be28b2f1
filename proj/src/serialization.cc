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

#include "reap/serialization.h"

#include <cmath>
#include <initializer_list>
#include <string_view>

#include "absl/status/status.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "json.hpp"
#include "json_util.h"

namespace reap {
namespace {

using Json = nlohmann::ordered_json;

Json MenuTypesToJson(const std::vector<PuType>& types) {
  Json out = Json::array();
  for (const PuType& t : types) {
    out.push_back({{"theta", t.theta}, {"lambda", t.lambda}});
  }
  return out;
}

}  // namespace

std::string FormatDouble(double value) {
  return absl::StrFormat("%.17g", value);
}

MenuDocument MakeMenuDocument(const ContractMenu& menu,
                              const DiscreteScenario& scenario) {
  return {.regime = menu.regime,
          .types = scenario.types(),
          .items = menu.items,
          .budget = scenario.budget(),
          .gamma = scenario.ctx().gamma(),
          .delta = scenario.ctx().delta()};
}

std::string MenuToJson(const MenuDocument& doc) {
  Json items = Json::array();
  for (const ContractItem& item : doc.items) {
    items.push_back({{"epsilon", item.epsilon}, {"payment", item.payment}});
  }
  Json out = {{"regime", std::string(RegimeName(doc.regime))},
              {"types", MenuTypesToJson(doc.types)},
              {"items", items},
              {"budget", doc.budget},
              {"gamma", doc.gamma},
              {"delta", doc.delta}};
  return out.dump(2) + "\n";
}

absl::StatusOr<MenuDocument> MenuFromJson(const std::string& text) {
  auto parsed = json_util::Parse(text);
  if (!parsed.ok()) return parsed.status();
  const Json& j = *parsed;
  json_util::Reader r(j, "menu");
  r.Allow({"regime", "types", "items", "budget", "gamma", "delta"});

  MenuDocument doc;
  std::string regime = r.String("regime");
  doc.budget = r.Number("budget");
  doc.gamma = r.Number("gamma");
  doc.delta = r.Number("delta");
  for (const json_util::Reader& t : r.Array("types")) {
    t.Allow({"theta", "lambda"});
    doc.types.push_back({.theta = t.Number("theta"),
                         .lambda = t.Number("lambda")});
  }
  for (const json_util::Reader& item : r.Array("items")) {
    item.Allow({"epsilon", "payment"});
    doc.items.push_back({.epsilon = item.Number("epsilon"),
                         .payment = item.Number("payment")});
  }
  if (absl::Status s = r.status(); !s.ok()) return s;

  auto parsed_regime = ParseRegime(regime);
  if (!parsed_regime.ok()) {
    return absl::InvalidArgumentError(
        absl::StrCat("menu.regime: ", parsed_regime.status().message()));
  }
  doc.regime = *parsed_regime;
  if (doc.items.size() != doc.types.size()) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "menu has %d types but %d items", doc.types.size(), doc.items.size()));
  }
  if (doc.items.empty()) {
    return absl::InvalidArgumentError("menu.items: must not be empty");
  }
  return doc;
}

absl::StatusOr<DiscreteScenario> ScenarioOf(const MenuDocument& doc) {
  auto scenario =
      DiscreteScenario::Create(doc.budget, doc.types, doc.gamma, doc.delta);
  if (!scenario.ok()) return scenario.status();
  if (scenario->k() != doc.types.size()) {
    return absl::InvalidArgumentError(
        "menu.types: zero-population types must not carry items");
  }
  for (size_t i = 0; i < doc.types.size(); ++i) {
    if (scenario->original_index()[i] != i) {
      return absl::InvalidArgumentError(
          "menu.types: must be sorted ascending by theta");
    }
  }
  return scenario;
}

std::string ContinuousMenuToJson(const ContinuousMenu& menu) {
  Json out = {{"regime", "continuous"},
              {"theta_low", menu.theta_low},
              {"theta_high", menu.theta_high},
              {"grid", menu.grid},
              {"epsilon", menu.eps_values},
              {"payment", menu.pay_values},
              {"c1", menu.c1},
              {"c2", menu.c2},
              {"budget", menu.budget}};
  return out.dump(2) + "\n";
}

absl::StatusOr<ContinuousMenu> ContinuousMenuFromJson(const std::string& text) {
  auto parsed = json_util::Parse(text);
  if (!parsed.ok()) return parsed.status();
  json_util::Reader r(*parsed, "menu");
  r.Allow({"regime", "theta_low", "theta_high", "grid", "epsilon", "payment",
           "c1", "c2", "budget"});
  ContinuousMenu menu;
  const std::string regime = r.String("regime");
  menu.theta_low = r.Number("theta_low");
  menu.theta_high = r.Number("theta_high");
  menu.grid = r.NumberArray("grid");
  menu.eps_values = r.NumberArray("epsilon");
  menu.pay_values = r.NumberArray("payment");
  menu.c1 = r.Number("c1");
  menu.c2 = r.Number("c2");
  menu.budget = r.Number("budget");
  if (absl::Status s = r.status(); !s.ok()) return s;

  if (regime != "continuous") {
    return absl::InvalidArgumentError(
        absl::StrFormat("menu.regime: expected 'continuous', got '%s'", regime));
  }
  if (menu.grid.size() < 2 || menu.eps_values.size() != menu.grid.size() ||
      menu.pay_values.size() != menu.grid.size()) {
    return absl::InvalidArgumentError(
        "menu: grid, epsilon and payment must have equal length >= 2");
  }
  for (size_t i = 1; i < menu.grid.size(); ++i) {
    if (!(menu.grid[i] > menu.grid[i - 1])) {
      return absl::InvalidArgumentError(
          "menu.grid: must be strictly increasing");
    }
  }
  if (menu.grid.front() != menu.theta_low ||
      menu.grid.back() != menu.theta_high) {
    return absl::InvalidArgumentError(
        "menu.grid: must start at theta_low and end at theta_high");
  }
  return menu;
}

absl::StatusOr<bool> IsContinuousMenuJson(const std::string& text) {
  auto parsed = json_util::Parse(text);
  if (!parsed.ok()) return parsed.status();
  if (!parsed->is_object()) {
    return absl::InvalidArgumentError("menu: expected a JSON object");
  }
  auto it = parsed->find("regime");
  return it != parsed->end() && it->is_string() && *it == "continuous";
}

std::string MonteCarloReportToJson(const MonteCarloReport& report) {
  Json quantiles = Json::array();
  for (const auto& [q, v] : report.error_quantiles) {
    quantiles.push_back({{"q", q}, {"abs_error", v}});
  }
  Json out = {{"trials", report.trials},
              {"predicted_alpha", report.predicted_alpha},
              {"allowed_violation_rate", report.allowed_violation_rate},
              {"violation_rate", report.violation_rate},
              {"mean_abs_error", report.mean_abs_error},
              {"mean_signed_error", report.mean_signed_error},
              {"error_quantiles", quantiles}};
  return out.dump(2) + "\n";
}

std::string TrialRowsToCsv(const std::vector<TrialRow>& rows) {
  std::string out = "trial,s_true,s_hat,abs_error,total_payment\n";
  for (const TrialRow& row : rows) {
    absl::StrAppend(&out, row.trial, ",", FormatDouble(row.s_true), ",",
                    FormatDouble(row.s_hat), ",", FormatDouble(row.abs_error),
                    ",", FormatDouble(row.total_payment), "\n");
  }
  return out;
}

}  // namespace reap
