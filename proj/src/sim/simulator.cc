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

#include "sim/simulator.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "common/strings.h"
#include "common/rng.h"

namespace rforge {

namespace {

// Diagnostic counters are reported in events per second; the scale is
// arbitrary and only relative changes steer the search.
constexpr double kCounterScale = 1e6;
// Inside an injected anomaly region the internal bottleneck shows up as an
// order-of-magnitude jump in the diagnostic counters.
constexpr double kInRegionAmplification = 10.0;
// Share of the forward rate that a reliable transport spends on ACKs.
constexpr double kRcAckFraction = 0.02;

double PlacementPenalty(const WorkloadPoint& point, const SubsystemSpec& spec) {
  double penalty = point.loopback ? spec.loopback_pcie_multiplier : 1.0;
  for (int device : {point.src_device, point.dst_device}) {
    if (spec.memory_devices[device].locality != Locality::kNicAffine) {
      penalty *= spec.cross_socket_latency_penalty;
    }
  }
  return penalty;
}

// Packet rate the workload offers at line rate, as a fraction of max_pps.
double OfferedRate(const WorkloadPoint& point, const SubsystemSpec& spec) {
  const double pps = spec.line_rate_bps / (8.0 * point.MeanMessageBytes());
  return std::min(1.0, pps / spec.max_pps);
}

double RecvWqeCacheMiss(const WorkloadPoint& p, const SubsystemSpec& spec) {
  // Receive WQEs prefetched per QP ring (depth x batch) against the cache.
  const double per_qp = static_cast<double>(p.wq_depth) *
                        static_cast<double>(p.WqeCount());
  const double capacity =
      std::max<double>(1.0, static_cast<double>(spec.recv_wqe_cache_capacity));
  const double opcode = p.opcode == Opcode::kSendRecv ? 1.0 : 0.02;
  const double qp_type = p.qp_type == QpType::kUd   ? 1.0
                         : p.qp_type == QpType::kUc ? 0.3
                                                    : 0.2;
  return kCounterScale * OfferedRate(p, spec) *
         std::log2(1.0 + per_qp / capacity) * opcode * qp_type;
}

double IcmCacheMiss(const WorkloadPoint& p, const SubsystemSpec& spec) {
  const double qp_cap =
      std::max<double>(1.0, static_cast<double>(spec.qp_cache_capacity));
  const double mr_cap =
      std::max<double>(1.0, static_cast<double>(spec.mr_cache_capacity));
  const double pressure =
      std::log2(1.0 + static_cast<double>(p.qp_count) / qp_cap) +
      std::log2(1.0 + static_cast<double>(p.mr_count) / mr_cap);
  const double qp_type = p.qp_type == QpType::kRc   ? 1.0
                         : p.qp_type == QpType::kUc ? 0.6
                                                    : 0.3;
  const double opcode = p.opcode == Opcode::kWrite  ? 1.0
                        : p.opcode == Opcode::kRead ? 0.7
                                                    : 0.5;
  // Batching amortizes context lookups over several WQEs.
  const double batching = std::sqrt(static_cast<double>(p.WqeCount()));
  return kCounterScale * OfferedRate(p, spec) * pressure * qp_type * opcode /
         batching;
}

double PcieBackpressure(const WorkloadPoint& p, const SubsystemSpec& spec,
                        double utilization) {
  const double direction =
      p.direction == Direction::kBidirectional ? 2.0 : 1.0;
  const double size_mix =
      1.0 + std::log2(static_cast<double>(p.MaxMessageBytes()) /
                      static_cast<double>(p.MinMessageBytes()));
  const double loopback = p.loopback ? 2.0 : 1.0;
  return kCounterScale * utilization * direction * size_mix *
         static_cast<double>(p.SgePerWqe()) * loopback *
         PlacementPenalty(p, spec);
}

double PacketEngineStall(const WorkloadPoint& p, double utilization) {
  // Harmonic mean of the MTU-sized segments per message: every message that
  // stays short relative to the MTU holds the counter down.
  double inverse = 0.0;
  for (int64_t m : p.message_pattern) {
    const double segments = std::max(
        1.0, static_cast<double>(m) / static_cast<double>(p.mtu_bytes));
    inverse += 1.0 / segments;
  }
  const double segments =
      static_cast<double>(p.message_pattern.size()) / inverse;
  const double opcode = p.opcode == Opcode::kRead ? 1.0 : 0.3;
  const double qp_type = p.qp_type == QpType::kRc   ? 1.0
                         : p.qp_type == QpType::kUc ? 0.5
                                                    : 0.3;
  return kCounterScale * utilization * segments * opcode * qp_type;
}

// Multiplicative Gaussian noise, never negative.
double Noisy(double value, double stddev, Rng& rng) {
  if (stddev <= 0.0) return value;
  return std::max(0.0, value * (1.0 + stddev * rng.Gaussian()));
}

}  // namespace

double CacheFactor(double demand, double capacity) {
  if (demand <= capacity) return 1.0;
  return 1.0 - 0.04 * (1.0 - capacity / demand);
}

double PcieEffectiveBps(const WorkloadPoint& point, const SubsystemSpec& spec) {
  const double payload = static_cast<double>(std::accumulate(
      point.message_pattern.begin(), point.message_pattern.end(), int64_t{0}));
  const double fetch = static_cast<double>(point.WqeCount()) *
                       spec.pcie_wqe_fetch_cost_bytes;
  const double payload_fraction = payload / (payload + fetch);
  return spec.pcie_bw_bps * payload_fraction / PlacementPenalty(point, spec);
}

Throughput BaselineThroughput(const WorkloadPoint& point,
                              const SubsystemSpec& spec) {
  const double mean = point.MeanMessageBytes();
  const double pps_limit =
      spec.max_pps *
      CacheFactor(static_cast<double>(point.qp_count),
                  static_cast<double>(spec.qp_cache_capacity)) *
      CacheFactor(static_cast<double>(point.mr_count),
                  static_cast<double>(spec.mr_cache_capacity)) *
      CacheFactor(static_cast<double>(point.wq_depth * point.WqeCount()),
                  static_cast<double>(spec.recv_wqe_cache_capacity));
  Throughput t;
  t.bps = std::min({spec.line_rate_bps, PcieEffectiveBps(point, spec),
                    pps_limit * mean * 8.0});
  t.pps = std::min(t.bps / (8.0 * mean), spec.max_pps);
  return t;
}

absl::Status ValidateForSubsystem(const WorkloadPoint& point,
                                  const SubsystemSpec& spec) {
  if (absl::Status s = ValidateStructure(point); !s.ok()) return s;
  const int devices = static_cast<int>(spec.memory_devices.size());
  if (point.src_device < 0 || point.src_device >= devices ||
      point.dst_device < 0 || point.dst_device >= devices) {
    return absl::InvalidArgumentError(StrCat(
        "device index outside the subsystem's ", devices, " memory devices"));
  }
  if (static_cast<int64_t>(point.message_pattern.size()) >
      spec.RequestVectorLen()) {
    return absl::InvalidArgumentError(StrCat(
        "message_pattern has ", point.message_pattern.size(),
        " entries; the subsystem's request vector holds ",
        spec.RequestVectorLen()));
  }
  return absl::OkStatus();
}

absl::StatusOr<Measurement> Simulate(const WorkloadPoint& point,
                                     const SubsystemSpec& spec,
                                     const std::vector<AnomalyRule>& rules,
                                     uint64_t seed) {
  if (absl::Status s = spec.Validate(); !s.ok()) return s;
  if (absl::Status s = ValidateForSubsystem(point, spec); !s.ok()) return s;

  const Throughput base = BaselineThroughput(point, spec);
  double pause = 0.0;
  double cap = 1.0;
  bool in_region = false;
  for (const AnomalyRule& rule : rules) {
    if (!rule.Matches(point)) continue;
    in_region = true;
    if (rule.symptom == AnomalyRule::Symptom::kPauseStorm) {
      pause = std::max(pause, rule.magnitude);
    } else {
      cap = std::min(cap, rule.magnitude);
    }
  }

  Measurement m;
  m.pause_duration_ratio = pause;
  m.achieved_bps = base.bps * (1.0 - pause);
  m.achieved_pps = base.pps * (1.0 - pause);
  if (cap < 1.0) {
    m.achieved_bps = std::min(m.achieved_bps, cap * spec.line_rate_bps);
    m.achieved_pps = std::min(m.achieved_pps, cap * spec.max_pps);
  }

  const double utilization = base.bps / spec.pcie_bw_bps;
  const double amplify = in_region ? kInRegionAmplification : 1.0;
  m.diag_counters[std::string(kRecvWqeCacheMiss)] =
      amplify * RecvWqeCacheMiss(point, spec);
  m.diag_counters[std::string(kIcmCacheMiss)] =
      amplify * IcmCacheMiss(point, spec);
  m.diag_counters[std::string(kPcieBackpressure)] =
      amplify * PcieBackpressure(point, spec, utilization);
  m.diag_counters[std::string(kPacketEngineStall)] =
      amplify * PacketEngineStall(point, utilization);

  const double sigma = spec.noise_stddev_fraction;
  if (sigma > 0.0) {
    Rng rng(seed);
    m.achieved_bps = std::min(Noisy(m.achieved_bps, sigma, rng),
                              spec.line_rate_bps);
    m.achieved_pps = std::min(Noisy(m.achieved_pps, sigma, rng), spec.max_pps);
    if (m.pause_duration_ratio > 0.0) {
      m.pause_duration_ratio =
          std::min(1.0, Noisy(m.pause_duration_ratio, sigma, rng));
    }
    for (auto& [id, v] : m.diag_counters) v = Noisy(v, sigma, rng);
  }

  const bool reliable = point.qp_type == QpType::kRc;
  m.perf_counters[std::string(kTxBps)] = m.achieved_bps;
  m.perf_counters[std::string(kRxBps)] =
      point.direction == Direction::kBidirectional
          ? m.achieved_bps
          : (reliable ? kRcAckFraction * m.achieved_bps : 0.0);
  m.perf_counters[std::string(kTxPps)] = m.achieved_pps;
  return m;
}

}  // namespace rforge
