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

#ifndef RFORGE_MONITOR_MFS_BUILDER_H_
#define RFORGE_MONITOR_MFS_BUILDER_H_

#include <cstdint>
#include <functional>
#include <string>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "monitor/detect.h"
#include "monitor/tester.h"
#include "sim/subsystem.h"
#include "workload/mfs.h"
#include "workload/point.h"
#include "workload/space.h"

namespace rforge {

// Result of re-testing one ablated point.
enum class ProbeOutcome {
  // The anomaly under study is gone: no anomaly, or only a milder one.
  kClear,
  // Still anomalous with the same or a more severe signature.
  kAnomalous,
  // Not tested (invalid point, skip rule, or out of probe allowance). Such
  // grid values neither extend nor break a region on their own.
  kUntestable,
};

using ProbeFn =
    std::function<absl::StatusOr<ProbeOutcome>(const WorkloadPoint& point)>;

struct MfsConstruction {
  Mfs mfs;
  int64_t probes = 0;
  // The probe allowance ran out; features not yet ablated were pinned to
  // their discovery values.
  bool truncated = false;
};

// One-factor-at-a-time ablation around the anomalous `point`:
//  * a categorical feature enters the MFS (as equals) iff some alternative
//    value clears the anomaly; qp_type and opcode are varied while keeping
//    the other half of the verbs pair where the matrix allows it;
//  * a numeric feature is re-tested at every grid value and constrained to
//    the maximal contiguous anomalous run around the discovery value
//    (at_least / at_most / in_region, or any if the run spans the grid);
//  * with a single message per round, min and max message size cannot move
//    independently, so the one size is ablated and attributed to min
//    (lower bound) and max (upper bound).
// At most `max_probes` calls to `probe` are made.
absl::StatusOr<MfsConstruction> ConstructMfsWithProbe(
    const WorkloadPoint& point, const SearchSpace& space, const ProbeFn& probe,
    int64_t max_probes);

// Tester-driven construction: re-tests `point` first (an
// absl::FailedPreconditionError tagged "unstable anomaly" if it no longer
// reproduces), then ablates with MeasureStable + Detect. Probe i uses seed
// MixSeed(seed, i).
absl::StatusOr<MfsConstruction> ConstructMfs(const WorkloadPoint& point,
                                             Tester& tester,
                                             const SearchSpace& space,
                                             const SubsystemSpec& spec,
                                             const DetectionPolicy& policy,
                                             uint64_t seed,
                                             int64_t max_probes = 500);

// Classifies a re-test against the signature of the anomaly under study.
ProbeOutcome ClassifyProbe(const AnomalySignature& reference,
                           const std::optional<SymptomKind>& detected,
                           const Measurement& m, double tolerance);

}  // namespace rforge

#endif  // RFORGE_MONITOR_MFS_BUILDER_H_
