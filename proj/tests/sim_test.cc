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

#include <cmath>

#include "gtest/gtest.h"
#include "monitor/detect.h"
#include "sim/reference.h"
#include "sim/simulator.h"
#include "sim/subsystem.h"
#include "test_support.h"
#include "workload/mfs.h"
#include "workload/sampling.h"

namespace rforge {
namespace {

WorkloadPoint RcWrite(int64_t qps, int64_t message_bytes) {
  WorkloadPoint p;
  p.qp_type = QpType::kRc;
  p.opcode = Opcode::kWrite;
  p.qp_count = qps;
  p.mtu_bytes = 4096;
  p.wq_depth = 128;
  p.wqe_batch = {1};
  p.message_pattern = {message_bytes};
  return p;
}

TEST(BaselineTest, LineRateBindsForLargeMessages) {
  const SubsystemSpec spec = ReferenceSubsystem();
  const Throughput t = BaselineThroughput(RcWrite(8, 65536), spec);
  // min(200e9, 256e9 * 65536 / 65552, 2e8 * 65536 * 8) = 200e9.
  EXPECT_EQ(t.bps, 200e9);
  EXPECT_EQ(t.pps, 200e9 / (8.0 * 65536));
}

TEST(BaselineTest, PacketRateBindsForTinyMessages) {
  const SubsystemSpec spec = ReferenceSubsystem();
  const Throughput t = BaselineThroughput(RcWrite(1, 64), spec);
  // min(200e9, 256e9 * 64 / 80 = 204.8e9, 2e8 * 64 * 8 = 102.4e9).
  EXPECT_EQ(t.pps, spec.max_pps);
  EXPECT_EQ(t.bps, spec.max_pps * 512);
}

TEST(BaselineTest, PcieBindsWhenFetchOverheadDominates) {
  SubsystemSpec spec = ReferenceSubsystem();
  spec.pcie_bw_bps = 100e9;
  const WorkloadPoint p = RcWrite(1, 4096);
  // 100e9 * 4096 / (4096 + 16).
  const double expected = 100e9 * 4096.0 / 4112.0;
  EXPECT_DOUBLE_EQ(PcieEffectiveBps(p, spec), expected);
  EXPECT_DOUBLE_EQ(BaselineThroughput(p, spec).bps, expected);
}

TEST(BaselineTest, LoopbackMultiplierDividesPcieBandwidth) {
  SubsystemSpec spec = ReferenceSubsystem();
  spec.loopback_pcie_multiplier = 2.0;
  WorkloadPoint p = RcWrite(8, 65536);
  const double remote = PcieEffectiveBps(p, spec);
  p.loopback = true;
  EXPECT_DOUBLE_EQ(PcieEffectiveBps(p, spec), remote / 2.0);
}

TEST(BaselineTest, CrossSocketEndpointsArePenalized) {
  const SubsystemSpec spec = ReferenceSubsystem();
  WorkloadPoint p = RcWrite(8, 65536);
  const double affine = PcieEffectiveBps(p, spec);
  p.src_device = 1;  // cross-socket DRAM
  p.dst_device = 2;  // GPU behind another bridge
  EXPECT_DOUBLE_EQ(PcieEffectiveBps(p, spec),
                   affine / (spec.cross_socket_latency_penalty *
                             spec.cross_socket_latency_penalty));
}

TEST(BaselineTest, CacheOverflowLowersThePacketRate) {
  const SubsystemSpec spec = ReferenceSubsystem();
  EXPECT_EQ(CacheFactor(100, 256), 1.0);
  // 1 - 0.04 * (1 - 256 / 512).
  EXPECT_DOUBLE_EQ(CacheFactor(512, 256), 0.98);
  const Throughput small = BaselineThroughput(RcWrite(1, 64), spec);
  const Throughput many = BaselineThroughput(RcWrite(512, 64), spec);
  EXPECT_DOUBLE_EQ(many.pps, small.pps * 0.98);
}

TEST(SimulateTest, AnomalyOneTriggerPointPausesTwentyPercent) {
  const SubsystemSpec spec = ReferenceSubsystem();
  absl::StatusOr<Measurement> m =
      Simulate(AnomalyOneTriggerPoint(), spec, ReferenceRules(), 1);
  ASSERT_TRUE(m.ok()) << m.status();
  EXPECT_EQ(m->pause_duration_ratio, 0.20);
  const Throughput base = BaselineThroughput(AnomalyOneTriggerPoint(), spec);
  EXPECT_DOUBLE_EQ(m->achieved_bps, base.bps * 0.8);
}

TEST(SimulateTest, OutsideTheRegionTheBaselineHolds) {
  const SubsystemSpec spec = ReferenceSubsystem();
  WorkloadPoint p = AnomalyOneTriggerPoint();
  p.wq_depth = 128;
  absl::StatusOr<Measurement> m = Simulate(p, spec, ReferenceRules(), 1);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->pause_duration_ratio, 0.0);
  EXPECT_EQ(m->achieved_bps, BaselineThroughput(p, spec).bps);
}

TEST(SimulateTest, ThroughputCapWithoutPause) {
  const SubsystemSpec spec = ReferenceSubsystem();
  WorkloadPoint p = RcWrite(1, 1024);
  p.mr_count = 12288;
  absl::StatusOr<Measurement> m = Simulate(p, spec, ReferenceRules(), 1);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->pause_duration_ratio, 0.0);
  EXPECT_LE(m->achieved_bps, 0.5 * spec.line_rate_bps);
  EXPECT_LE(m->achieved_pps, 0.5 * spec.max_pps);
  EXPECT_EQ(Detect(*m, spec, DetectionPolicy{}),
            SymptomKind::kThroughputAnomaly);
}

TEST(SimulateTest, WorstSymptomWinsOnOverlap) {
  const SubsystemSpec spec = ReferenceSubsystem();
  // Inside both #1 (20%) and #15 (15%).
  WorkloadPoint p = AnomalyOneTriggerPoint();
  p.qp_count = 64;
  absl::StatusOr<Measurement> m = Simulate(p, spec, ReferenceRules(), 1);
  ASSERT_TRUE(m.ok());
  EXPECT_EQ(m->pause_duration_ratio, 0.20);
}

TEST(SimulateTest, DiagnosticCountersAmplifyInsideRegions) {
  const SubsystemSpec spec = ReferenceSubsystem();
  const WorkloadPoint p = AnomalyOneTriggerPoint();
  const Measurement with = *Simulate(p, spec, ReferenceRules(), 1);
  const Measurement without = *Simulate(p, spec, {}, 1);
  for (const auto& [id, v] : without.diag_counters) {
    EXPECT_DOUBLE_EQ(with.diag_counters.at(id), 10.0 * v) << id;
  }
}

TEST(SimulateTest, DeterministicWithAndWithoutNoise) {
  SubsystemSpec spec = ReferenceSubsystem();
  const WorkloadPoint p = SampleRandom(SpaceForSubsystem(spec), 3);
  EXPECT_EQ(*Simulate(p, spec, ReferenceRules(), 9),
            *Simulate(p, spec, ReferenceRules(), 9));
  spec.noise_stddev_fraction = 0.01;
  EXPECT_EQ(*Simulate(p, spec, ReferenceRules(), 9),
            *Simulate(p, spec, ReferenceRules(), 9));
  EXPECT_NE(*Simulate(p, spec, ReferenceRules(), 9),
            *Simulate(p, spec, ReferenceRules(), 10));
}

TEST(SimulateTest, RejectsInvalidPoints) {
  const SubsystemSpec spec = ReferenceSubsystem();
  WorkloadPoint p = AnomalyOneTriggerPoint();
  p.dst_device = 7;
  EXPECT_FALSE(Simulate(p, spec, {}, 1).ok());
  p = AnomalyOneTriggerPoint();
  p.wqe_batch.assign(65, 2);
  p.message_pattern.assign(130, 2048);  // request vector holds 128
  EXPECT_FALSE(Simulate(p, spec, {}, 1).ok());
  p = AnomalyOneTriggerPoint();
  p.opcode = Opcode::kRead;
  EXPECT_FALSE(Simulate(p, spec, {}, 1).ok());
}

TEST(SimulateTest, MeasurementsSatisfyTheirInvariants) {
  SubsystemSpec spec = ReferenceSubsystem();
  spec.noise_stddev_fraction = 0.05;
  const SearchSpace space = SpaceForSubsystem(spec);
  Rng rng(5);
  for (int i = 0; i < 5000; ++i) {
    const WorkloadPoint p = SampleRandom(space, rng);
    absl::StatusOr<Measurement> m = Simulate(p, spec, ReferenceRules(), i);
    ASSERT_TRUE(m.ok());
    ASSERT_TRUE(ValidateMeasurement(*m, spec).ok())
        << ValidateMeasurement(*m, spec);
    for (std::string_view id : {kTxBps, kRxBps, kTxPps}) {
      EXPECT_TRUE(m->Counter(id).has_value());
    }
    for (std::string_view id : {kRecvWqeCacheMiss, kIcmCacheMiss,
                                kPcieBackpressure}) {
      EXPECT_TRUE(m->Counter(id).has_value());
    }
  }
}

TEST(SimulateTest, IcmMissesNeverFallAsQpCountGrows) {
  const SubsystemSpec spec = ReferenceSubsystem();
  const SearchSpace space = SpaceForSubsystem(spec);
  Rng rng(8);
  for (int i = 0; i < 200; ++i) {
    WorkloadPoint p = SampleRandom(space, rng);
    double last = -1.0;
    for (int64_t q : space.QpCountGrid()) {
      p.qp_count = q;
      const double v = *Simulate(p, spec, {}, 1)->Counter(kIcmCacheMiss);
      EXPECT_GE(v, last);
      last = v;
    }
  }
}

// Every point inside an injected region is flagged; a grid neighbour that
// leaves the region through one of its predicates (and enters no other) is
// not.
TEST(SimulateTest, InjectedSymptomsAreSoundOnTheGrid) {
  const SubsystemSpec spec = ReferenceSubsystem();
  const SearchSpace space = SpaceForSubsystem(spec);
  const std::vector<AnomalyRule> rules = ReferenceRules();
  const DetectionPolicy policy;
  int checked = 0;
  for (const AnomalyRule& rule : rules) {
    const std::vector<SpaceWitness> w =
        CheckSpaceAgainstMfs(space, {rule.AsMfs()});
    ASSERT_EQ(w.size(), 1u) << rule.id;
    const WorkloadPoint center = w[0].point;
    for (int i = 0; i < kFeatureCount; ++i) {
      const Feature f = static_cast<Feature>(i);
      for (int64_t v : FeatureGrid(space, f)) {
        std::optional<WorkloadPoint> q = WithFeature(center, f, v, space);
        if (!q) continue;
        ++checked;
        const Measurement m = *Simulate(*q, spec, rules, 1);
        const bool flagged = Detect(m, spec, policy).has_value();
        if (rule.Matches(*q)) {
          EXPECT_TRUE(flagged) << "rule " << rule.id;
        } else {
          bool other = false;
          for (const AnomalyRule& r : rules) other = other || r.Matches(*q);
          if (!other) {
            EXPECT_FALSE(flagged) << "rule " << rule.id;
          }
        }
      }
    }
  }
  EXPECT_GT(checked, 100);
  EXPECT_LE(checked, 10000);
  // Random sweep: region membership and flags agree everywhere.
  Rng rng(21);
  for (int i = 0; i < 10000; ++i) {
    const WorkloadPoint p = SampleRandom(space, rng);
    bool inside = false;
    for (const AnomalyRule& r : rules) inside = inside || r.Matches(p);
    const Measurement m = *Simulate(p, spec, rules, 1);
    EXPECT_EQ(Detect(m, spec, policy).has_value(), inside);
  }
}

TEST(SubsystemSpecTest, Validation) {
  SubsystemSpec spec = ReferenceSubsystem();
  EXPECT_TRUE(spec.Validate().ok());
  EXPECT_EQ(spec.RequestVectorLen(), 128);
  spec.noise_stddev_fraction = 0.06;
  EXPECT_FALSE(spec.Validate().ok());
  spec = ReferenceSubsystem();
  spec.loopback_pcie_multiplier = 0.5;
  EXPECT_FALSE(spec.Validate().ok());
  spec = ReferenceSubsystem();
  spec.line_rate_bps = 0;
  EXPECT_FALSE(spec.Validate().ok());
}

TEST(AnomalyRuleTest, SymptomsMustBeDetectable) {
  for (const AnomalyRule& r : ReferenceRules()) EXPECT_TRUE(r.Validate().ok());
  AnomalyRule r = ReferenceRules()[0];
  r.magnitude = 0.001;
  EXPECT_FALSE(r.Validate().ok());
  r.symptom = AnomalyRule::Symptom::kThroughputCap;
  r.magnitude = 0.8;
  EXPECT_FALSE(r.Validate().ok());
  r.magnitude = 0.79;
  EXPECT_TRUE(r.Validate().ok());
}

TEST(ReferenceTest, RuleLibraryCoversTheSixRows) {
  std::vector<int> ids;
  for (const AnomalyRule& r : ReferenceRules()) ids.push_back(r.id);
  EXPECT_EQ(ids, (std::vector<int>{1, 3, 7, 9, 13, 15}));
}

}  // namespace
}  // namespace rforge
