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

#ifndef RFORGE_SIM_SIMULATOR_H_
#define RFORGE_SIM_SIMULATOR_H_

#include <cstdint>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "sim/subsystem.h"
#include "workload/point.h"

namespace rforge {

struct Throughput {
  double bps = 0.0;
  double pps = 0.0;
};

// PCIe bandwidth left for payload: the raw link minus WQE fetches, divided by
// the loopback multiplier and the cross-socket penalty of each non-affine
// endpoint.
double PcieEffectiveBps(const WorkloadPoint& point, const SubsystemSpec& spec);

// Degradation factor in (0.96, 1] for `demand` entries competing for a cache
// of `capacity`.
double CacheFactor(double demand, double capacity);

// Closed-form bottleneck model of the healthy subsystem:
//   bps = min(line rate, PCIe effective bps, pps_limit x mean size x 8)
//   pps = min(bps / (8 x mean size), max_pps)
// where pps_limit is max_pps reduced by the QP, MR and WQE cache factors.
Throughput BaselineThroughput(const WorkloadPoint& point,
                              const SubsystemSpec& spec);

// Checks that `point` can run on `spec`: structurally valid, device indices
// in range and the round fits the request vector.
absl::Status ValidateForSubsystem(const WorkloadPoint& point,
                                  const SubsystemSpec& spec);

// Evaluates `point` on the simulated subsystem with `rules` injected.
// Deterministic in (point, spec, rules, seed); the seed only matters when
// spec.noise_stddev_fraction > 0.
absl::StatusOr<Measurement> Simulate(const WorkloadPoint& point,
                                     const SubsystemSpec& spec,
                                     const std::vector<AnomalyRule>& rules,
                                     uint64_t seed);

}  // namespace rforge

#endif  // RFORGE_SIM_SIMULATOR_H_
