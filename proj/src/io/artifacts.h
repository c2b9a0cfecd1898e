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

#ifndef RFORGE_IO_ARTIFACTS_H_
#define RFORGE_IO_ARTIFACTS_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "io/config.h"
#include "io/json_codec.h"
#include "search/evaluator.h"
#include "search/search.h"
#include "sim/subsystem.h"
#include "workload/mfs.h"

namespace rforge {

// Column headings of report.md, in order.
const std::vector<std::string>& ReportColumns();

// One table row per anomaly: the Mfs rendered in the anomaly-table style
// ("UD SEND", ">=64", "mix of <=1KB & >=64KB", ...). `rnic` fills the RNIC
// column. Features without a column of their own (placement, memory
// registration) are appended to the message-pattern cell.
std::vector<std::string> ReportRow(const AnomalyRecord& record,
                                   std::string_view rnic);
std::string ReportMarkdown(const CampaignReport& report,
                           const SubsystemSpec& spec);

// trajectory.csv: eval_index,counter_id,normalized_value,event. Values are
// divided by the maximum of the same counter over the whole trajectory.
std::string TrajectoryCsv(const std::vector<TrajectoryRow>& rows);
// Parses trajectory.csv back; `value` holds the normalized value.
absl::StatusOr<std::vector<TrajectoryRow>> ParseTrajectoryCsv(
    std::string_view text);

// Lower-case hex SHA-256 of `data`.
std::string Sha256Hex(std::string_view data);

// manifest.json: the resolved config (loadable as a config) plus a
// "manifest" block with the SHA-256 of every input file and of the resolved
// config itself.
absl::StatusOr<Json> ManifestJson(const CampaignConfig& config);

// Pretty-printed JSON with a trailing newline.
std::string DumpJson(const Json& j);

// Writes `contents` to `path` through a temporary file and a rename.
absl::Status WriteFileAtomic(const std::filesystem::path& path,
                             std::string_view contents);

// Creates config.output_dir and writes anomalies.json, report.md,
// trajectory.csv and manifest.json.
absl::Status WriteCampaignArtifacts(const CampaignConfig& config,
                                    const CampaignReport& report);

// Writes the reference subsystem, rule library and search space, plus a
// campaign config that uses them, into `dir` (created if needed):
// reference_subsystem.json, reference_rules.json, default_space.json,
// reference_campaign.json.
absl::Status WriteDefaultFiles(const std::filesystem::path& dir);

}  // namespace rforge

#endif  // RFORGE_IO_ARTIFACTS_H_
