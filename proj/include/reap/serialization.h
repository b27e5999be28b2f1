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

#ifndef REAP_SERIALIZATION_H_
#define REAP_SERIALIZATION_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "reap/contract_continuous.h"
#include "reap/contract_discrete.h"
#include "reap/simulator.h"

namespace reap {

// A discrete menu together with the scenario it was designed for. Types and
// items are index-aligned and sorted ascending by theta.
struct MenuDocument {
  Regime regime = Regime::kIncomplete;
  std::vector<PuType> types;
  std::vector<ContractItem> items;
  double budget = 0;
  double gamma = 0;
  double delta = 0;
};

MenuDocument MakeMenuDocument(const ContractMenu& menu,
                              const DiscreteScenario& scenario);
std::string MenuToJson(const MenuDocument& doc);
// Rejects unknown fields, missing fields and a types/items length mismatch.
absl::StatusOr<MenuDocument> MenuFromJson(const std::string& text);
absl::StatusOr<DiscreteScenario> ScenarioOf(const MenuDocument& doc);

std::string ContinuousMenuToJson(const ContinuousMenu& menu);
absl::StatusOr<ContinuousMenu> ContinuousMenuFromJson(const std::string& text);

// True when the document carries "regime": "continuous".
absl::StatusOr<bool> IsContinuousMenuJson(const std::string& text);

std::string MonteCarloReportToJson(const MonteCarloReport& report);
std::string TrialRowsToCsv(const std::vector<TrialRow>& rows);

// Shared CSV cell formatting; round-trips doubles exactly.
std::string FormatDouble(double value);

}  // namespace reap

#endif  // REAP_SERIALIZATION_H_
