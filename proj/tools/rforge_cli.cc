// Copyright 2026 The rforge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// rforge command-line front end. A thin layer over the C interface:
//
//   rforge search --config <path> [--seed N] [--budget N] [--out <dir>]
//   rforge replay --point <path> --spec <path> [--rules <path>]
//   rforge check-space --space <path> --anomalies <path>
//   rforge gen-defaults --out <dir>
//
// Exit status: 0 clean, 2 anomalies found (search, replay) or witnesses
// found (check-space), 1 on any error.

#include <cstdint>
#include <cstdio>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rforge/rforge.h"

namespace {

constexpr int kExitClean = 0;
constexpr int kExitError = 1;
constexpr int kExitFound = 2;

int ReportError(const char* command) {
  std::fprintf(stderr, "rforge %s: error: %s\n", command, rforge_last_error());
  return kExitError;
}

// Prints and releases a string owned by the library.
void PrintOwned(char* text) {
  std::fputs(text, stdout);
  rforge_string_free(text);
}

struct SearchArgs {
  std::string config;
  std::optional<uint64_t> seed;
  std::optional<int64_t> budget;
  std::string out;
};

int RunSearch(const SearchArgs& args) {
  rforge_campaign* campaign = nullptr;
  if (rforge_campaign_load(args.config.c_str(), &campaign) != RFORGE_OK) {
    return ReportError("search");
  }
  int exit_code = kExitClean;
  int32_t found = 0;
  if ((args.seed &&
       rforge_campaign_set_seed(campaign, *args.seed) != RFORGE_OK) ||
      (args.budget &&
       rforge_campaign_set_budget(campaign, *args.budget) != RFORGE_OK) ||
      (!args.out.empty() &&
       rforge_campaign_set_output_dir(campaign, args.out.c_str()) !=
           RFORGE_OK) ||
      rforge_campaign_run(campaign, &found) != RFORGE_OK) {
    exit_code = ReportError("search");
  } else {
    std::printf("%d new anomal%s found\n", found, found == 1 ? "y" : "ies");
    exit_code = found > 0 ? kExitFound : kExitClean;
  }
  rforge_campaign_free(campaign);
  return exit_code;
}

struct ReplayArgs {
  std::string point;
  std::string spec;
  std::string rules;
};

int RunReplay(const ReplayArgs& args) {
  char* out = nullptr;
  rforge_verdict verdict = RFORGE_VERDICT_NONE;
  if (rforge_replay(args.point.c_str(), args.spec.c_str(),
                    args.rules.empty() ? nullptr : args.rules.c_str(), &out,
                    &verdict) != RFORGE_OK) {
    return ReportError("replay");
  }
  PrintOwned(out);
  return verdict == RFORGE_VERDICT_NONE ? kExitClean : kExitFound;
}

struct CheckSpaceArgs {
  std::string space;
  std::string anomalies;
};

int RunCheckSpace(const CheckSpaceArgs& args) {
  char* out = nullptr;
  int32_t witnesses = 0;
  if (rforge_check_space(args.space.c_str(), args.anomalies.c_str(), &out,
                         &witnesses) != RFORGE_OK) {
    return ReportError("check-space");
  }
  PrintOwned(out);
  return witnesses > 0 ? kExitFound : kExitClean;
}

int RunGenDefaults(const std::string& out_dir) {
  if (rforge_gen_defaults(out_dir.c_str()) != RFORGE_OK) {
    return ReportError("gen-defaults");
  }
  std::printf("wrote reference_subsystem.json, reference_rules.json, "
              "default_space.json and reference_campaign.json to %s\n",
              out_dir.c_str());
  return kExitClean;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Search RDMA workloads for performance anomalies", "rforge"};
  app.set_version_flag("--version", std::string(rforge_version()));
  app.require_subcommand(1);

  SearchArgs search;
  CLI::App* search_cmd =
      app.add_subcommand("search", "Run a search campaign from a config file");
  search_cmd->add_option("--config", search.config, "Campaign config (JSON)")
      ->required();
  search_cmd->add_option("--seed", search.seed, "Override the config seed");
  search_cmd->add_option("--budget", search.budget,
                         "Override the evaluation budget")
      ->check(CLI::PositiveNumber);
  search_cmd->add_option("--out", search.out,
                         "Override the output directory");

  ReplayArgs replay;
  CLI::App* replay_cmd = app.add_subcommand(
      "replay", "Evaluate one workload point and print the verdict");
  replay_cmd->add_option("--point", replay.point, "Workload point (JSON)")
      ->required();
  replay_cmd->add_option("--spec", replay.spec, "Subsystem spec (JSON)")
      ->required();
  replay_cmd->add_option("--rules", replay.rules, "Anomaly rule library");

  CheckSpaceArgs check;
  CLI::App* check_cmd = app.add_subcommand(
      "check-space",
      "Check a restricted search space against known anomalies");
  check_cmd->add_option("--space", check.space, "Search space (JSON)")
      ->required();
  check_cmd->add_option("--anomalies", check.anomalies, "anomalies.json")
      ->required();

  std::string gen_out;
  CLI::App* gen_cmd = app.add_subcommand(
      "gen-defaults", "Write the reference subsystem, rules and space");
  gen_cmd->add_option("--out", gen_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11 uses 0 for --help/--version; all usage errors map to 1.
    const int code = app.exit(e);
    return code == 0 ? kExitClean : kExitError;
  }

  if (*search_cmd) return RunSearch(search);
  if (*replay_cmd) return RunReplay(replay);
  if (*check_cmd) return RunCheckSpace(check);
  if (*gen_cmd) return RunGenDefaults(gen_out);
  return kExitError;
}
