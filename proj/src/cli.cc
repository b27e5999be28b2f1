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

#include "reap/cli.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/str_format.h"
#include "reap/contract_continuous.h"
#include "reap/contract_discrete.h"
#include "reap/experiments.h"
#include "reap/serialization.h"
#include "reap/simulator.h"

namespace reap::cli {
namespace {

namespace fs = std::filesystem;

struct GlobalFlags {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir;
  std::string format = "csv";
};

int ExitFor(const absl::Status& status) {
  switch (status.code()) {
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange:
    case absl::StatusCode::kNotFound:
    case absl::StatusCode::kFailedPrecondition:
      return kUsage;
    default:
      return kNumerical;
  }
}

int Fail(std::ostream& err, const absl::Status& status) {
  err << "error: " << status.message() << "\n";
  return ExitFor(status);
}

absl::StatusOr<std::string> ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(absl::StrFormat("cannot read '%s'", path));
  }
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes through a temporary file in the same directory, then renames.
absl::Status WriteAtomically(const fs::path& path, const std::string& body) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) {
    return absl::InvalidArgumentError(absl::StrFormat(
        "cannot create directory '%s': %s", path.parent_path().string(),
        ec.message()));
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) {
      return absl::InvalidArgumentError(
          absl::StrFormat("cannot write '%s'", tmp.string()));
    }
    f << body;
    if (!f.flush()) {
      return absl::InternalError(
          absl::StrFormat("short write to '%s'", tmp.string()));
    }
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    return absl::InternalError(absl::StrFormat(
        "cannot rename '%s': %s", tmp.string(), ec.message()));
  }
  return absl::OkStatus();
}

class Runner {
 public:
  Runner(const GlobalFlags& flags, std::ostream& out, std::ostream& err)
      : flags_(flags), out_(out), err_(err) {}

  int Design();
  int Verify(const std::string& menu_path);
  int Simulate();
  int Sweep();
  int Figure(const std::string& id);

 private:
  absl::Status LoadConfig();
  fs::path OutPath(const std::string& name) const {
    return fs::path(config_.output) / name;
  }
  absl::Status Emit(const std::string& name, const std::string& body);
  absl::Status EmitTable(const std::string& stem, const Table& table);
  int Report(const VerifyReport& report);

  GlobalFlags flags_;
  std::ostream& out_;
  std::ostream& err_;
  ExperimentConfig config_;
};

absl::Status Runner::LoadConfig() {
  if (!flags_.config_path.empty()) {
    auto text = ReadFile(flags_.config_path);
    if (!text.ok()) return text.status();
    auto parsed = ParseConfig(*text);
    if (!parsed.ok()) return parsed.status();
    config_ = *std::move(parsed);
  }
  if (flags_.seed) config_.seed = *flags_.seed;
  if (!flags_.out_dir.empty()) config_.output = flags_.out_dir;
  return ValidateConfig(config_);
}

absl::Status Runner::Emit(const std::string& name, const std::string& body) {
  const fs::path path = OutPath(name);
  if (absl::Status s = WriteAtomically(path, body); !s.ok()) return s;
  out_ << "wrote " << path.string() << "\n";
  return absl::OkStatus();
}

absl::Status Runner::EmitTable(const std::string& stem, const Table& table) {
  if (flags_.format == "json") return Emit(stem + ".json", table.ToJson());
  return Emit(stem + ".csv", table.ToCsv());
}

int Runner::Report(const VerifyReport& report) {
  out_ << report.ToText();
  if (absl::Status s = Emit("verify.json", report.ToJson()); !s.ok()) {
    return Fail(err_, s);
  }
  return report.passed() ? kOk : kVerifyFailed;
}

int Runner::Design() {
  if (absl::Status s = LoadConfig(); !s.ok()) return Fail(err_, s);
  if (config_.regime == "continuous") {
    auto scenario = ContinuousScenarioOf(config_);
    if (!scenario.ok()) return Fail(err_, scenario.status());
    auto menu = SolveContinuous(*scenario, config_.grid_size);
    if (!menu.ok()) return Fail(err_, menu.status());
    const double objective = ObjectiveContinuous(*menu, *scenario);
    // Per-PU objective scaled to the population for the accuracy bound.
    const double alpha = AccuracyFromInverseSquareSum(
        scenario->ctx(), scenario->ctx().n() * objective);
    out_ << absl::StrFormat("alpha=%.10g objective=%.10g\n", alpha, objective);
    if (absl::Status s = Emit("menu.json", ContinuousMenuToJson(*menu));
        !s.ok()) {
      return Fail(err_, s);
    }
    return kOk;
  }
  auto regime = DiscreteRegimeOf(config_);
  if (!regime.ok()) return Fail(err_, regime.status());
  auto scenario = DiscreteScenarioOf(config_);
  if (!scenario.ok()) return Fail(err_, scenario.status());
  const ContractMenu menu = Solve(*scenario, *regime);
  out_ << absl::StrFormat("k=%d alpha=%.10g objective=%.10g\n", scenario->k(),
                          AlphaOfMenu(menu, *scenario),
                          ObjectiveValue(menu, *scenario));
  if (*regime == Regime::kIncomplete && !IsRegular(*scenario)) {
    out_ << absl::StrFormat(
        "note: %d types pooled into %d shared items to keep the menu "
        "monotone\n",
        scenario->k(), IncompletePoolingGroups(*scenario).size());
  }
  if (absl::Status s =
          Emit("menu.json", MenuToJson(MakeMenuDocument(menu, *scenario)));
      !s.ok()) {
    return Fail(err_, s);
  }
  return kOk;
}

int Runner::Verify(const std::string& menu_path) {
  if (absl::Status s = LoadConfig(); !s.ok()) return Fail(err_, s);
  if (!menu_path.empty()) {
    auto text = ReadFile(menu_path);
    if (!text.ok()) return Fail(err_, text.status());
    auto continuous = IsContinuousMenuJson(*text);
    if (!continuous.ok()) return Fail(err_, continuous.status());
    if (*continuous) {
      auto menu = ContinuousMenuFromJson(*text);
      if (!menu.ok()) return Fail(err_, menu.status());
      auto report = VerifyContinuous(*menu, nullptr, config_.seed);
      if (!report.ok()) return Fail(err_, report.status());
      return Report(*report);
    }
    auto doc = MenuFromJson(*text);
    if (!doc.ok()) return Fail(err_, doc.status());
    auto scenario = ScenarioOf(*doc);
    if (!scenario.ok()) return Fail(err_, scenario.status());
    auto report = VerifyDiscrete({doc->items, doc->regime}, *scenario);
    if (!report.ok()) return Fail(err_, report.status());
    return Report(*report);
  }

  if (config_.regime == "continuous") {
    auto scenario = ContinuousScenarioOf(config_);
    if (!scenario.ok()) return Fail(err_, scenario.status());
    auto menu = SolveContinuous(*scenario, config_.grid_size);
    if (!menu.ok()) return Fail(err_, menu.status());
    auto report = VerifyContinuous(*menu, &*scenario, config_.seed);
    if (!report.ok()) return Fail(err_, report.status());
    return Report(*report);
  }
  auto regime = DiscreteRegimeOf(config_);
  if (!regime.ok()) return Fail(err_, regime.status());
  auto scenario = DiscreteScenarioOf(config_);
  if (!scenario.ok()) return Fail(err_, scenario.status());
  auto report = VerifyDiscrete(Solve(*scenario, *regime), *scenario);
  if (!report.ok()) return Fail(err_, report.status());
  return Report(*report);
}

int Runner::Simulate() {
  if (absl::Status s = LoadConfig(); !s.ok()) return Fail(err_, s);
  auto raw = ParseRawDistribution(config_.raw_distribution);
  if (!raw.ok()) return Fail(err_, raw.status());

  absl::StatusOr<MonteCarloRun> run;
  double delta = config_.delta;
  if (config_.regime == "continuous") {
    auto scenario = ContinuousScenarioOf(config_);
    if (!scenario.ok()) return Fail(err_, scenario.status());
    auto menu = SolveContinuous(*scenario, config_.grid_size);
    if (!menu.ok()) return Fail(err_, menu.status());
    auto agents = BuildPopulation(*scenario, *raw, config_.seed);
    if (!agents.ok()) return Fail(err_, agents.status());
    run = MonteCarlo(*agents, *menu, scenario->ctx(), config_.trials,
                     config_.seed);
  } else {
    auto regime = DiscreteRegimeOf(config_);
    if (!regime.ok()) return Fail(err_, regime.status());
    auto scenario = DiscreteScenarioOf(config_);
    if (!scenario.ok()) return Fail(err_, scenario.status());
    auto agents = BuildPopulation(*scenario, *raw, config_.seed);
    if (!agents.ok()) return Fail(err_, agents.status());
    run = MonteCarlo(*agents, Solve(*scenario, *regime), scenario->ctx(),
                     config_.trials, config_.seed);
  }
  if (!run.ok()) return Fail(err_, run.status());

  const MonteCarloReport& rep = run->report;
  const double allowed = 1.0 - delta;
  const double slack =
      3.0 * std::sqrt(allowed * delta / static_cast<double>(rep.trials));
  out_ << absl::StrFormat(
      "trials=%d predicted_alpha=%.10g violation_rate=%.6g "
      "allowed=1-delta=%.6g (+3 s.e. %.3g)\n",
      rep.trials, rep.predicted_alpha, rep.violation_rate, allowed, slack);
  if (absl::Status s = Emit("trials.csv", TrialRowsToCsv(run->rows)); !s.ok()) {
    return Fail(err_, s);
  }
  if (absl::Status s = Emit("report.json", MonteCarloReportToJson(rep));
      !s.ok()) {
    return Fail(err_, s);
  }
  return kOk;
}

int Runner::Sweep() {
  if (absl::Status s = LoadConfig(); !s.ok()) return Fail(err_, s);
  auto table = RunSweep(config_);
  if (!table.ok()) return Fail(err_, table.status());
  out_ << absl::StrFormat("sweep %s: %d rows\n", config_.sweep->parameter,
                          table->rows.size());
  if (absl::Status s = EmitTable("sweep", *table); !s.ok()) {
    return Fail(err_, s);
  }
  return kOk;
}

int Runner::Figure(const std::string& id) {
  if (absl::Status s = LoadConfig(); !s.ok()) return Fail(err_, s);
  auto table = FigureTable(id, config_);
  if (!table.ok()) return Fail(err_, table.status());
  if (absl::Status s = EmitTable(id, *table); !s.ok()) return Fail(err_, s);
  return kOk;
}

}  // namespace

int Main(int argc, const char* const* argv, std::ostream& out,
         std::ostream& err) {
  CLI::App app{"Privacy-aware data aggregation contract designer"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalFlags flags;
  app.add_option("--config", flags.config_path, "JSON experiment config");
  app.add_option("--seed", flags.seed, "Random seed (overrides config)");
  app.add_option("--out", flags.out_dir, "Output directory (overrides config)");
  app.add_option("--format", flags.format, "Table format for sweep/figure")
      ->check(CLI::IsMember({"csv", "json"}));

  CLI::App* design = app.add_subcommand("design", "Solve and write a menu");
  std::string menu_path;
  CLI::App* verify =
      app.add_subcommand("verify", "Check a menu's constraints and optimality");
  verify->add_option("--menu", menu_path, "Menu JSON to verify");
  CLI::App* simulate =
      app.add_subcommand("simulate", "Monte Carlo accuracy experiment");
  CLI::App* sweep = app.add_subcommand("sweep", "Parameter sweep");
  std::string figure_id;
  CLI::App* figure = app.add_subcommand("figure", "Emit figure data");
  figure->add_option("id", figure_id, "fig2, fig3, fig4, fig5 or fig6")
      ->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  Runner runner(flags, out, err);
  if (*design) return runner.Design();
  if (*verify) return runner.Verify(menu_path);
  if (*simulate) return runner.Simulate();
  if (*sweep) return runner.Sweep();
  return runner.Figure(figure_id);
}

}  // namespace reap::cli
