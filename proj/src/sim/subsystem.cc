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

#include "sim/subsystem.h"

#include <cmath>

#include "common/strings.h"

namespace rforge {

absl::Status SubsystemSpec::Validate() const {
  auto positive = [](double v, const char* field) -> absl::Status {
    if (!(v > 0.0) || !std::isfinite(v)) {
      return absl::InvalidArgumentError(StrCat(field, " must be > 0"));
    }
    return absl::OkStatus();
  };
  for (auto [v, field] :
       {std::pair{line_rate_bps, "line_rate_bps"}, {max_pps, "max_pps"},
        {pcie_bw_bps, "pcie_bw_bps"}}) {
    if (absl::Status s = positive(v, field); !s.ok()) return s;
  }
  if (pcie_wqe_fetch_cost_bytes < 0) {
    return absl::InvalidArgumentError("pcie_wqe_fetch_cost_bytes must be >= 0");
  }
  if (qp_cache_capacity < 0 || mr_cache_capacity < 0 ||
      recv_wqe_cache_capacity < 0) {
    return absl::InvalidArgumentError("cache capacities must be >= 0");
  }
  if (num_pus < 1 || pipeline_stages < 1) {
    return absl::InvalidArgumentError(
        "num_pus and pipeline_stages must be >= 1");
  }
  if (burst_size_bytes < 1) {
    return absl::InvalidArgumentError("burst_size_bytes must be >= 1");
  }
  if (!(loopback_pcie_multiplier >= 1.0) ||
      !(cross_socket_latency_penalty >= 1.0)) {
    return absl::InvalidArgumentError(
        "loopback_pcie_multiplier and cross_socket_latency_penalty must be "
        ">= 1");
  }
  if (!(noise_stddev_fraction >= 0.0 && noise_stddev_fraction <= 0.05)) {
    return absl::InvalidArgumentError(
        "noise_stddev_fraction must be in [0, 0.05]");
  }
  if (memory_devices.empty()) {
    return absl::InvalidArgumentError("memory_devices is empty");
  }
  return absl::OkStatus();
}

bool AnomalyRule::Matches(const WorkloadPoint& point) const {
  for (const FeaturePredicate& p : region) {
    if (!p.Matches(point)) return false;
  }
  return true;
}

Mfs AnomalyRule::AsMfs() const {
  Mfs mfs;
  mfs.anomaly_id = id;
  mfs.predicates = region;
  mfs.symptom = symptom == Symptom::kPauseStorm
                    ? SymptomKind::kPauseAnomaly
                    : SymptomKind::kThroughputAnomaly;
  return mfs;
}

absl::Status AnomalyRule::Validate() const {
  switch (symptom) {
    case Symptom::kPauseStorm:
      if (!(magnitude > 0.001 && magnitude <= 1.0)) {
        return absl::InvalidArgumentError(StrCat(
            "rule ", id, ": pause_ratio must be in (0.001, 1], got ",
            magnitude));
      }
      break;
    case Symptom::kThroughputCap:
      if (!(magnitude > 0.0 && magnitude < 0.8)) {
        return absl::InvalidArgumentError(StrCat(
            "rule ", id, ": fraction_of_bound must be in (0, 0.8), got ",
            magnitude));
      }
      break;
  }
  for (const FeaturePredicate& p : region) {
    if (p.kind == FeaturePredicate::Kind::kInRegion && p.lo > p.hi) {
      return absl::InvalidArgumentError(StrCat(
          "rule ", id, ": empty region on ", FeatureName(p.feature)));
    }
  }
  return absl::OkStatus();
}

std::string_view RuleSymptomName(AnomalyRule::Symptom s) {
  switch (s) {
    case AnomalyRule::Symptom::kPauseStorm: return "pause_storm";
    case AnomalyRule::Symptom::kThroughputCap: return "throughput_cap";
  }
  return "?";
}

std::optional<AnomalyRule::Symptom> ParseRuleSymptom(std::string_view s) {
  if (s == "pause_storm") return AnomalyRule::Symptom::kPauseStorm;
  if (s == "throughput_cap") return AnomalyRule::Symptom::kThroughputCap;
  return std::nullopt;
}

std::optional<double> Measurement::Counter(std::string_view id) const {
  if (auto it = perf_counters.find(id); it != perf_counters.end()) {
    return it->second;
  }
  if (auto it = diag_counters.find(id); it != diag_counters.end()) {
    return it->second;
  }
  return std::nullopt;
}

absl::Status ValidateMeasurement(const Measurement& m,
                                 const SubsystemSpec& spec) {
  if (!(m.achieved_bps >= 0.0 && m.achieved_bps <= spec.line_rate_bps)) {
    return absl::InvalidArgumentError(
        StrCat("achieved_bps ", m.achieved_bps, " outside [0, ",
                     spec.line_rate_bps, "]"));
  }
  if (!(m.achieved_pps >= 0.0 && m.achieved_pps <= spec.max_pps)) {
    return absl::InvalidArgumentError(
        StrCat("achieved_pps ", m.achieved_pps, " outside [0, ",
                     spec.max_pps, "]"));
  }
  if (!(m.pause_duration_ratio >= 0.0 && m.pause_duration_ratio <= 1.0)) {
    return absl::InvalidArgumentError("pause_duration_ratio outside [0, 1]");
  }
  for (const auto* counters : {&m.perf_counters, &m.diag_counters}) {
    for (const auto& [id, v] : *counters) {
      if (!(v >= 0.0) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(
            StrCat("counter ", id, " is negative or not finite"));
      }
    }
  }
  return absl::OkStatus();
}

SearchSpace SpaceForSubsystem(const SubsystemSpec& spec) {
  SearchSpace space = DefaultSearchSpace();
  space.memory_devices = spec.memory_devices;
  space.request_vector_len_n = spec.RequestVectorLen();
  space.size_regions = DefaultSizeRegions(
      space.mtu_choices, spec.burst_size_bytes, space.mr_size_max_bytes);
  return space;
}

}  // namespace rforge
