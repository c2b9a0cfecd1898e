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

#ifndef RFORGE_SIM_REFERENCE_H_
#define RFORGE_SIM_REFERENCE_H_

#include <vector>

#include "sim/subsystem.h"
#include "workload/point.h"

namespace rforge {

// The reference subsystem (200 Gbps line rate, 2e8 pps, PCIe 256 Gbps).
SubsystemSpec ReferenceSubsystem();

// Six injected anomalies modeled on known anomalies of a 200 Gbps-class NIC
// and a 100 Gbps-class NIC, numbered by their row in the anomaly catalogue:
//   #1  UD SEND, WQE batch >= 64, WQ depth >= 256            pause 20%
//   #3  RC READ, MTU 1K, messages >= 16KB                    pause 10%
//   #7  RC WRITE, no WQE batching, messages <= 1KB, >= 12K MRs
//                                                            throughput 50%
//   #9  bidirectional, SG list >= 3, mix of <= 1KB and >= 64KB
//                                                            pause 25%
//   #13 loopback plus receiving (bidirectional) traffic      pause 5%
//   #15 UD SEND, WQ depth >= 64, >= 32 QPs                   pause 15%
std::vector<AnomalyRule> ReferenceRules();

// The simplified trigger setting of anomaly #1: one UD SEND QP, WQ depth 256,
// 64 single-SGE WQEs of 2KB per batch, MTU 2KB, one 64KB MR.
WorkloadPoint AnomalyOneTriggerPoint();

}  // namespace rforge

#endif  // RFORGE_SIM_REFERENCE_H_
