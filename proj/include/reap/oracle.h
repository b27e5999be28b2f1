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

// Brute-force reference solver for small discrete instances (k <= 3).
//
// Nothing here uses the closed-form menus. Two independent passes are run:
//
//  * a reduced pass over log-spaced epsilon grids, with payments fixed by
//    the binding constraints (p = theta eps for complete information; top
//    IR plus the adjacent IC chain, over non-increasing epsilon tuples, for
//    incomplete information), and
//  * an unrestricted pass over joint (eps, p) grids that only filters on
//    the inequality form of IR, IC and budget.
//
// Every candidate in either pass is filtered against the full constraint
// set. Each pass refines its grid around the incumbent.

#ifndef REAP_ORACLE_H_
#define REAP_ORACLE_H_

#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "reap/contract_discrete.h"

namespace reap {

struct OracleSettings {
  int grid_points_per_dim = 200;
  // Window shrinks 5x around the incumbent each round.
  int refinement_rounds = 3;
  // Relative slack allowed on every inequality.
  double feasibility_tol = 1e-7;
  // Relative residual under which a constraint is reported as tight.
  double active_tol = 1e-3;
};

struct OracleResult {
  // Best point of the reduced pass.
  ContractMenu menu;
  double objective = 0;
  bool feasible = false;
  // "budget", "IR[i]" and "IC[i,j]" (type i indifferent to item j), 0-based.
  std::vector<std::string> active_constraints;

  // Best point of the unrestricted pass.
  ContractMenu unrestricted_menu;
  double unrestricted_objective = 0;

  // Incomplete information only: random non-increasing-violating epsilon
  // tuples tried with binding payments, how many of them were feasible, and
  // whether any beat the incumbent.
  int non_monotone_samples = 0;
  int non_monotone_feasible = 0;
  bool non_monotone_improved = false;
};

absl::StatusOr<OracleResult> OracleComplete(const DiscreteScenario& scenario,
                                            const OracleSettings& settings = {});
absl::StatusOr<OracleResult> OracleIncomplete(
    const DiscreteScenario& scenario, const OracleSettings& settings = {});

// Relative stationarity residuals mu w_i eps_i^3 / (2 lambda_i) - 1 of
// sum lambda_i / eps_i^2 + mu (sum w_i eps_i - B), with budget weights w_i
// of the menu's regime. The multiplier is the one consistent with all types
// at once, mu = 2 sum(lambda_i / eps_i^2) / sum(w_i eps_i), so perturbing
// any single epsilon shows up in that type's residual. Within a run of types
// sharing one epsilon only the last entry holds the run's stationarity
// residual; the others are negative when a monotonicity multiplier would
// have to be negative, and zero otherwise.
std::vector<double> KktResiduals(const ContractMenu& menu,
                                 const DiscreteScenario& scenario);

// Constraint identifiers whose relative residual is within `tol`.
std::vector<std::string> ActiveConstraints(const ContractMenu& menu,
                                           const DiscreteScenario& scenario,
                                           bool include_ic, double tol);

}  // namespace reap

#endif  // REAP_ORACLE_H_
