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

#ifndef RFORGE_IO_JSON_CODEC_H_
#define RFORGE_IO_JSON_CODEC_H_

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "absl/status/statusor.h"
#include "monitor/detect.h"
#include "monitor/record.h"
#include "search/energy.h"
#include "search/search.h"
#include "sim/subsystem.h"
#include "workload/mfs.h"
#include "workload/point.h"
#include "workload/space.h"

namespace rforge {

// Key order is preserved so that emitted files are stable and diffable.
using Json = nlohmann::ordered_json;

// Every decoder reports schema problems as InvalidArgument naming the field
// path ("config.sa.alpha: expected a number"). Unknown keys are rejected so
// that typos do not silently fall back to defaults. Decoders that take a
// `base` fill absent keys from it.

Json PointToJson(const WorkloadPoint& point);
absl::StatusOr<WorkloadPoint> PointFromJson(const Json& j,
                                            std::string_view path = "point");

Json SpaceToJson(const SearchSpace& space);
// When `j` changes mtu_choices but not size_regions, the regions are rebuilt
// for the new MTUs with `burst_size_bytes`.
absl::StatusOr<SearchSpace> SpaceFromJson(const Json& j,
                                          const SearchSpace& base,
                                          int64_t burst_size_bytes,
                                          std::string_view path = "space");

Json SpecToJson(const SubsystemSpec& spec);
absl::StatusOr<SubsystemSpec> SpecFromJson(const Json& j,
                                           std::string_view path = "subsystem");

Json PredicateToJson(const FeaturePredicate& p);
absl::StatusOr<FeaturePredicate> PredicateFromJson(const Json& j,
                                                   std::string_view path);

Json RuleToJson(const AnomalyRule& rule);
absl::StatusOr<AnomalyRule> RuleFromJson(const Json& j, std::string_view path);
// A rule library: {"rules": [...]}.
Json RulesToJson(const std::vector<AnomalyRule>& rules);
absl::StatusOr<std::vector<AnomalyRule>> RulesFromJson(
    const Json& j, std::string_view path = "rules");

Json MfsToJson(const Mfs& mfs);
absl::StatusOr<Mfs> MfsFromJson(const Json& j, std::string_view path);

Json MeasurementToJson(const Measurement& m);
absl::StatusOr<Measurement> MeasurementFromJson(
    const Json& j, std::string_view path = "measurement");

Json RecordToJson(const AnomalyRecord& record);
absl::StatusOr<AnomalyRecord> RecordFromJson(const Json& j,
                                             std::string_view path);

Json SaConfigToJson(const SaConfig& sa);
absl::StatusOr<SaConfig> SaConfigFromJson(const Json& j, const SaConfig& base,
                                          std::string_view path = "sa");

Json PolicyToJson(const DetectionPolicy& policy);
absl::StatusOr<DetectionPolicy> PolicyFromJson(
    const Json& j, const DetectionPolicy& base,
    std::string_view path = "detection");

Json CounterToJson(const CounterObjective& counter);
absl::StatusOr<CounterObjective> CounterFromJson(const Json& j,
                                                 std::string_view path);

// The anomalies.json document of a campaign.
Json CampaignReportToJson(const CampaignReport& report);
// Records of an anomalies.json document.
absl::StatusOr<std::vector<AnomalyRecord>> RecordsFromReportJson(
    const Json& j, std::string_view path = "anomalies");

// Parses JSON text. Syntax errors name `source` and the line and column.
absl::StatusOr<Json> ParseJson(std::string_view text, std::string_view source);

}  // namespace rforge

#endif  // RFORGE_IO_JSON_CODEC_H_
