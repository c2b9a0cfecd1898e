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

#ifndef RFORGE_MONITOR_RECORD_H_
#define RFORGE_MONITOR_RECORD_H_

#include <cstdint>
#include <string>

#include "sim/subsystem.h"
#include "workload/mfs.h"
#include "workload/point.h"
#include "workload/types.h"

namespace rforge {

// One discovered anomaly.
struct AnomalyRecord {
  Mfs mfs;
  WorkloadPoint discovery_point;
  SymptomKind symptom = SymptomKind::kPauseAnomaly;
  // The averaged measurement at the discovery point.
  Measurement measurement;
  // Global evaluation index of the discovery (counts every evaluation,
  // including ranking and MFS probes).
  int64_t discovery_eval_index = 0;
  // Search-budget evaluations spent up to and including the discovery.
  int64_t discovery_budget_index = 0;
  // Evaluations spent constructing the MFS.
  int64_t mfs_evaluations = 0;
  // The counter whose search found it, or "random".
  std::string found_by;
  // The discovery point did not reproduce on re-test; such records do not
  // take part in the skip rule.
  bool unstable = false;
  // MFS construction hit its evaluation allowance.
  bool mfs_truncated = false;

  bool operator==(const AnomalyRecord&) const = default;
};

}  // namespace rforge

#endif  // RFORGE_MONITOR_RECORD_H_
