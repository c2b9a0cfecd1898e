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

#include "monitor/detect.h"

#include <algorithm>
#include <cmath>

#include "absl/strings/str_cat.h"
#include "common/rng.h"

namespace rforge {

absl::Status DetectionPolicy::Validate() const {
  if (!(pause_ratio_threshold > 0.0 && pause_ratio_threshold < 1.0)) {
    return absl::InvalidArgumentError(
        "pause_ratio_threshold must be in (0, 1)");
  }
  if (!(throughput_shortfall_fraction > 0.0 &&
        throughput_shortfall_fraction < 1.0)) {
    return absl::InvalidArgumentError(
        "throughput_shortfall_fraction must be in (0, 1)");
  }
  if (samples_per_iteration < 1) {
    return absl::InvalidArgumentError("samples_per_iteration must be >= 1");
  }
  if (!(signature_tolerance >= 0.0 && signature_tolerance < 1.0)) {
    return absl::InvalidArgumentError("signature_tolerance must be in [0, 1)");
  }
  return absl::OkStatus();
}

absl::StatusOr<Measurement> MeasureStable(const WorkloadPoint& point,
                                          Tester& tester,
                                          const DetectionPolicy& policy,
                                          uint64_t seed, int64_t eval_index) {
  const int n = std::max(1, policy.samples_per_iteration);
  Measurement sum;
  for (int i = 0; i < n; ++i) {
    EvalContext ctx{MixSeed(seed, static_cast<uint64_t>(i)), eval_index, i};
    absl::StatusOr<Measurement> m = tester.Measure(point, ctx);
    if (!m.ok()) return m.status();
    sum.achieved_bps += m->achieved_bps;
    sum.achieved_pps += m->achieved_pps;
    sum.pause_duration_ratio += m->pause_duration_ratio;
    for (const auto& [id, v] : m->perf_counters) sum.perf_counters[id] += v;
    for (const auto& [id, v] : m->diag_counters) sum.diag_counters[id] += v;
  }
  const double scale = static_cast<double>(n);
  sum.achieved_bps /= scale;
  sum.achieved_pps /= scale;
  sum.pause_duration_ratio /= scale;
  for (auto& [id, v] : sum.perf_counters) v /= scale;
  for (auto& [id, v] : sum.diag_counters) v /= scale;
  return sum;
}

std::optional<SymptomKind> Detect(const Measurement& m,
                                  const SubsystemSpec& spec,
                                  const DetectionPolicy& policy) {
  if (m.pause_duration_ratio > policy.pause_ratio_threshold) {
    return SymptomKind::kPauseAnomaly;
  }
  const double keep = 1.0 - policy.throughput_shortfall_fraction;
  if (m.achieved_bps < keep * spec.line_rate_bps &&
      m.achieved_pps < keep * spec.max_pps) {
    return SymptomKind::kThroughputAnomaly;
  }
  return std::nullopt;
}

int CompareSeverity(const AnomalySignature& a, const AnomalySignature& b,
                    double tolerance) {
  if (a.kind != b.kind) {
    return a.kind == SymptomKind::kPauseAnomaly ? 1 : -1;
  }
  if (a.kind == SymptomKind::kThroughputAnomaly) return 0;
  const double scale = std::max(a.pause_ratio, b.pause_ratio);
  if (std::fabs(a.pause_ratio - b.pause_ratio) <= tolerance * scale) return 0;
  return a.pause_ratio > b.pause_ratio ? 1 : -1;
}

}  // namespace rforge
