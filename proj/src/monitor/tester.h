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

#ifndef RFORGE_MONITOR_TESTER_H_
#define RFORGE_MONITOR_TESTER_H_

#include <cstdint>
#include <vector>

#include "absl/status/statusor.h"
#include "sim/subsystem.h"
#include "workload/point.h"

namespace rforge {

// Identifies one tester call. `seed` drives any randomness of the tester;
// `eval_index` is the global evaluation counter of the campaign and `sample`
// the repetition within that evaluation.
struct EvalContext {
  uint64_t seed = 0;
  int64_t eval_index = 0;
  int sample = 0;
};

// Runs a workload and reports what the subsystem did: the simulator, or an
// external traffic engine behind the adapter protocol.
class Tester {
 public:
  virtual ~Tester() = default;
  virtual absl::StatusOr<Measurement> Measure(const WorkloadPoint& point,
                                              const EvalContext& ctx) = 0;
};

// Tester backed by the deterministic subsystem simulator.
class SimulatorTester : public Tester {
 public:
  SimulatorTester(SubsystemSpec spec, std::vector<AnomalyRule> rules)
      : spec_(std::move(spec)), rules_(std::move(rules)) {}

  absl::StatusOr<Measurement> Measure(const WorkloadPoint& point,
                                      const EvalContext& ctx) override;

  const SubsystemSpec& spec() const { return spec_; }
  const std::vector<AnomalyRule>& rules() const { return rules_; }

 private:
  SubsystemSpec spec_;
  std::vector<AnomalyRule> rules_;
};

}  // namespace rforge

#endif  // RFORGE_MONITOR_TESTER_H_
