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

#ifndef RFORGE_SIM_SUBSYSTEM_H_
#define RFORGE_SIM_SUBSYSTEM_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "workload/mfs.h"
#include "workload/point.h"
#include "workload/space.h"

namespace rforge {

// Parameters of the simulated RDMA subsystem: two hosts, one RNIC each,
// joined by a single switch. Defaults are the reference subsystem, a
// 200 Gbps-class NIC on PCIe 4.0 x16.
struct SubsystemSpec {
  std::string name = "reference";
  // The two datasheet upper bounds.
  double line_rate_bps = 200e9;
  double max_pps = 2e8;
  double pcie_bw_bps = 256e9;
  double pcie_wqe_fetch_cost_bytes = 16;
  int64_t qp_cache_capacity = 256;
  int64_t mr_cache_capacity = 4096;
  int64_t recv_wqe_cache_capacity = 512;
  int64_t num_pus = 8;
  int64_t pipeline_stages = 16;
  int64_t burst_size_bytes = 16384;
  double loopback_pcie_multiplier = 1.2;
  double cross_socket_latency_penalty = 1.05;
  double noise_stddev_fraction = 0.0;
  // Memory devices reachable from the NIC; WorkloadPoint device indices
  // refer to this list.
  std::vector<MemoryDevice> memory_devices = DefaultSearchSpace().memory_devices;

  absl::Status Validate() const;
  // num_pus x pipeline_stages.
  int64_t RequestVectorLen() const { return num_pus * pipeline_stages; }

  bool operator==(const SubsystemSpec&) const = default;
};

// An injected anomaly: every point inside `region` shows `symptom`.
struct AnomalyRule {
  enum class Symptom { kPauseStorm, kThroughputCap };

  int id = 0;
  std::vector<FeaturePredicate> region;
  Symptom symptom = Symptom::kPauseStorm;
  // Pause duration ratio for kPauseStorm, fraction of the bounds for
  // kThroughputCap.
  double magnitude = 0.0;
  std::string comment;

  bool Matches(const WorkloadPoint& point) const;
  // The region as an Mfs, for ground-truth comparisons.
  Mfs AsMfs() const;
  absl::Status Validate() const;

  bool operator==(const AnomalyRule&) const = default;
};

std::string_view RuleSymptomName(AnomalyRule::Symptom s);
std::optional<AnomalyRule::Symptom> ParseRuleSymptom(std::string_view s);

// Counter identifiers.
inline constexpr std::string_view kTxBps = "tx_bps";
inline constexpr std::string_view kRxBps = "rx_bps";
inline constexpr std::string_view kTxPps = "tx_pps";
inline constexpr std::string_view kRecvWqeCacheMiss = "recv_wqe_cache_miss";
inline constexpr std::string_view kIcmCacheMiss = "icm_cache_miss";
inline constexpr std::string_view kPcieBackpressure = "pcie_backpressure";
inline constexpr std::string_view kPacketEngineStall = "packet_engine_stall";

// One evaluation of a workload.
struct Measurement {
  double achieved_bps = 0.0;
  double achieved_pps = 0.0;
  // Fraction of wall time the link was paused (0.01 = 10 ms per second).
  double pause_duration_ratio = 0.0;
  std::map<std::string, double, std::less<>> perf_counters;
  std::map<std::string, double, std::less<>> diag_counters;

  // Counter by id from either map.
  std::optional<double> Counter(std::string_view id) const;

  bool operator==(const Measurement&) const = default;
};

// Checks the Measurement invariants against `spec` (bounds, ratio range,
// non-negative counters).
absl::Status ValidateMeasurement(const Measurement& m,
                                 const SubsystemSpec& spec);

// The search space a campaign explores on `spec`: the default space with the
// subsystem's memory devices, request vector length and burst-aware size
// regions.
SearchSpace SpaceForSubsystem(const SubsystemSpec& spec);

}  // namespace rforge

#endif  // RFORGE_SIM_SUBSYSTEM_H_
