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

#ifndef RFORGE_IO_CONFIG_H_
#define RFORGE_IO_CONFIG_H_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "io/json_codec.h"
#include "monitor/detect.h"
#include "monitor/record.h"
#include "search/energy.h"
#include "search/search.h"
#include "sim/subsystem.h"
#include "workload/space.h"

namespace rforge {

// External tester: a child process speaking newline-delimited JSON.
struct AdapterConfig {
  // argv of the adapter; command[0] is looked up on PATH.
  std::vector<std::string> command;
  // Longest wait for one response before the campaign aborts.
  double deadline_s = 120.0;
  // Traffic duration requested per measurement.
  int64_t duration_s = 30;

  bool operator==(const AdapterConfig&) const = default;
};

// A loaded campaign configuration. Paths are absolute.
struct CampaignConfig {
  std::filesystem::path config_path;
  std::filesystem::path subsystem_path;
  // Exactly one of rules_path (simulator mode) and adapter is set.
  std::optional<std::filesystem::path> rules_path;
  std::optional<AdapterConfig> adapter;
  // Anomalies known before the search starts (an anomalies.json document).
  std::optional<std::filesystem::path> known_anomalies_path;
  std::filesystem::path output_dir;

  SubsystemSpec spec;
  std::vector<AnomalyRule> rules;
  // The space overrides exactly as written, and the resulting space.
  Json space_overrides = Json::object();
  SearchSpace space;
  SaConfig sa;
  DetectionPolicy detection;
  std::vector<CounterObjective> counters;
  std::vector<AnomalyRecord> known;
};

// Reads a file whole. NotFound names the path.
absl::StatusOr<std::string> ReadFile(const std::filesystem::path& path);
// ReadFile + ParseJson; syntax errors carry path:line:column.
absl::StatusOr<Json> ReadJsonFile(const std::filesystem::path& path);

// Loads a campaign config. Recognized keys:
//   subsystem          path to a SubsystemSpec file (required)
//   rules | adapter    rule-library path, or {command, deadline_s, duration_s}
//   space              overrides of the space derived from the subsystem
//   sa, detection      SaConfig / DetectionPolicy fields
//   counters           [{id, kind}], default the four diagnostic counters
//   known_anomalies    path to an anomalies.json to pre-load
//   output_dir         default "out"
//   seed               default 1
//   manifest           ignored (present in emitted manifests)
// Relative paths resolve against the config file's directory.
absl::StatusOr<CampaignConfig> LoadCampaignConfig(
    const std::filesystem::path& path);

// The config with every path absolute: the body of a reproducibility
// manifest, itself loadable by LoadCampaignConfig.
Json ResolvedConfigJson(const CampaignConfig& config);

}  // namespace rforge

#endif  // RFORGE_IO_CONFIG_H_
