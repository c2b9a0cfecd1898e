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

#ifndef RFORGE_MONITOR_DETECT_H_
#define RFORGE_MONITOR_DETECT_H_

#include <cstdint>
#include <optional>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "monitor/tester.h"
#include "sim/subsystem.h"
#include "workload/point.h"
#include "workload/types.h"

namespace rforge {

struct DetectionPolicy {
  // A pause duration ratio strictly above this is a pause anomaly.
  double pause_ratio_threshold = 0.001;
  // Throughput is anomalous when it is more than this fraction below both
  // the bps and the pps bound.
  double throughput_shortfall_fraction = 0.20;
  int samples_per_iteration = 4;
  // Relative tolerance within which two pause ratios are taken to be the same
  // anomaly during MFS construction.
  double signature_tolerance = 0.10;

  absl::Status Validate() const;

  bool operator==(const DetectionPolicy&) const = default;
};

// Evaluates `point` policy.samples_per_iteration times and returns the
// per-field arithmetic mean. Sample i runs with seed MixSeed(seed, i).
absl::StatusOr<Measurement> MeasureStable(const WorkloadPoint& point,
                                          Tester& tester,
                                          const DetectionPolicy& policy,
                                          uint64_t seed,
                                          int64_t eval_index = 0);

// Pause anomaly if the pause ratio exceeds the threshold; otherwise a
// throughput anomaly if both bps and pps fall short of their bounds by more
// than the shortfall fraction.
std::optional<SymptomKind> Detect(const Measurement& m,
                                  const SubsystemSpec& spec,
                                  const DetectionPolicy& policy);

// What an anomaly looks like from outside: its kind and, for pause
// anomalies, the pause ratio. Used to tell overlapping anomalies apart.
struct AnomalySignature {
  SymptomKind kind = SymptomKind::kPauseAnomaly;
  double pause_ratio = 0.0;

  static AnomalySignature Of(SymptomKind kind, const Measurement& m) {
    return {kind, kind == SymptomKind::kPauseAnomaly ? m.pause_duration_ratio
                                                     : 0.0};
  }
};

// Orders signatures by severity: pause anomalies above throughput anomalies,
// pause anomalies by ratio. Ratios within `tolerance` (relative) compare
// equal. Returns <0, 0, >0.
int CompareSeverity(const AnomalySignature& a, const AnomalySignature& b,
                    double tolerance);

}  // namespace rforge

#endif  // RFORGE_MONITOR_DETECT_H_
