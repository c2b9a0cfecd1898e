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

#include <deque>

#include "gtest/gtest.h"
#include "monitor/detect.h"
#include "monitor/mfs_builder.h"
#include "monitor/tester.h"
#include "sim/reference.h"
#include "sim/simulator.h"
#include "test_support.h"

namespace rforge {
namespace {

using P = FeaturePredicate;

// Returns scripted measurements in order.
class ScriptedTester : public Tester {
 public:
  explicit ScriptedTester(std::deque<Measurement> script)
      : script_(std::move(script)) {}
  absl::StatusOr<Measurement> Measure(const WorkloadPoint&,
                                      const EvalContext& ctx) override {
    contexts.push_back(ctx);
    if (script_.empty()) return absl::InternalError("script exhausted");
    Measurement m = script_.front();
    script_.pop_front();
    return m;
  }
  std::vector<EvalContext> contexts;

 private:
  std::deque<Measurement> script_;
};

Measurement WithPause(double ratio) {
  Measurement m;
  m.achieved_bps = 100e9;
  m.achieved_pps = 1e7;
  m.pause_duration_ratio = ratio;
  m.diag_counters["x"] = ratio * 10;
  return m;
}

// --- measure_stable -----------------------------------------------------------

TEST(MeasureStableTest, AveragesEveryField) {
  ScriptedTester tester({WithPause(0.10), WithPause(0.20), WithPause(0.20),
                         WithPause(0.30)});
  absl::StatusOr<Measurement> m =
      MeasureStable(WorkloadPoint{}, tester, DetectionPolicy{}, 5, 17);
  ASSERT_TRUE(m.ok());
  EXPECT_DOUBLE_EQ(m->pause_duration_ratio, 0.20);
  EXPECT_DOUBLE_EQ(m->diag_counters.at("x"), 2.0);
  EXPECT_DOUBLE_EQ(m->achieved_bps, 100e9);
  ASSERT_EQ(tester.contexts.size(), 4u);
  for (int i = 0; i < 4; ++i) {
    EXPECT_EQ(tester.contexts[i].sample, i);
    EXPECT_EQ(tester.contexts[i].eval_index, 17);
    EXPECT_EQ(tester.contexts[i].seed, MixSeed(5, i));
  }
}

TEST(MeasureStableTest, NoiselessMeanEqualsOneSample) {
  const SubsystemSpec spec = ReferenceSubsystem();
  SimulatorTester tester(spec, ReferenceRules());
  const WorkloadPoint p = AnomalyOneTriggerPoint();
  const Measurement single = *Simulate(p, spec, ReferenceRules(), 3);
  const Measurement mean = *MeasureStable(p, tester, DetectionPolicy{}, 3);
  EXPECT_EQ(mean, single);
}

TEST(MeasureStableTest, DeterministicWithNoise) {
  SubsystemSpec spec = ReferenceSubsystem();
  spec.noise_stddev_fraction = 0.02;
  SimulatorTester tester(spec, ReferenceRules());
  const WorkloadPoint p = AnomalyOneTriggerPoint();
  EXPECT_EQ(*MeasureStable(p, tester, DetectionPolicy{}, 3),
            *MeasureStable(p, tester, DetectionPolicy{}, 3));
}

TEST(MeasureStableTest, PropagatesTesterFailure) {
  ScriptedTester tester({WithPause(0.1)});
  absl::StatusOr<Measurement> m =
      MeasureStable(WorkloadPoint{}, tester, DetectionPolicy{}, 1);
  EXPECT_EQ(m.status().code(), absl::StatusCode::kInternal);
}

// --- detect -------------------------------------------------------------------

Measurement FullRate(const SubsystemSpec& spec) {
  Measurement m;
  m.achieved_bps = spec.line_rate_bps;
  m.achieved_pps = spec.max_pps;
  return m;
}

TEST(DetectTest, PauseThresholdIsExclusive) {
  const SubsystemSpec spec = ReferenceSubsystem();
  const DetectionPolicy policy;
  Measurement m = FullRate(spec);
  m.pause_duration_ratio = 0.001;
  EXPECT_EQ(Detect(m, spec, policy), std::nullopt);
  m.pause_duration_ratio = 0.001 + 1e-6;
  EXPECT_EQ(Detect(m, spec, policy), SymptomKind::kPauseAnomaly);
  m.pause_duration_ratio = 0.002;
  EXPECT_EQ(Detect(m, spec, policy), SymptomKind::kPauseAnomaly);
}

TEST(DetectTest, ThroughputMustMissBothBounds) {
  const SubsystemSpec spec = ReferenceSubsystem();
  const DetectionPolicy policy;
  Measurement m;
  m.achieved_bps = 160e9;  // exactly 80% of 200 Gbps
  m.achieved_pps = 1.6e8;  // exactly 80% of 2e8 pps
  EXPECT_EQ(Detect(m, spec, policy), std::nullopt);
  m.achieved_bps = 0.75 * spec.line_rate_bps;
  m.achieved_pps = 0.75 * spec.max_pps;
  EXPECT_EQ(Detect(m, spec, policy), SymptomKind::kThroughputAnomaly);
  // The packet-rate bound binds legitimately.
  m.achieved_bps = 0.1 * spec.line_rate_bps;
  m.achieved_pps = spec.max_pps;
  EXPECT_EQ(Detect(m, spec, policy), std::nullopt);
  // One side exactly on the boundary.
  m.achieved_bps = 100e9;
  m.achieved_pps = 1.6e8;
  EXPECT_EQ(Detect(m, spec, policy), std::nullopt);
}

TEST(DetectTest, PauseTakesPrecedence) {
  const SubsystemSpec spec = ReferenceSubsystem();
  Measurement m;
  m.achieved_bps = 1e9;
  m.achieved_pps = 1e5;
  m.pause_duration_ratio = 0.5;
  EXPECT_EQ(Detect(m, spec, DetectionPolicy{}), SymptomKind::kPauseAnomaly);
}

TEST(DetectTest, PolicyValidation) {
  DetectionPolicy p;
  EXPECT_TRUE(p.Validate().ok());
  p.pause_ratio_threshold = 0;
  EXPECT_FALSE(p.Validate().ok());
  p = DetectionPolicy{};
  p.throughput_shortfall_fraction = 1.0;
  EXPECT_FALSE(p.Validate().ok());
  p = DetectionPolicy{};
  p.samples_per_iteration = 0;
  EXPECT_FALSE(p.Validate().ok());
}

TEST(SeverityTest, OrdersSignatures) {
  const AnomalySignature pause20{SymptomKind::kPauseAnomaly, 0.20};
  const AnomalySignature pause21{SymptomKind::kPauseAnomaly, 0.21};
  const AnomalySignature pause10{SymptomKind::kPauseAnomaly, 0.10};
  const AnomalySignature tput{SymptomKind::kThroughputAnomaly, 0.0};
  EXPECT_EQ(CompareSeverity(pause20, pause21, 0.10), 0);
  EXPECT_GT(CompareSeverity(pause20, pause10, 0.10), 0);
  EXPECT_LT(CompareSeverity(pause10, pause20, 0.10), 0);
  EXPECT_GT(CompareSeverity(pause10, tput, 0.10), 0);
  EXPECT_EQ(CompareSeverity(tput, tput, 0.10), 0);
}

// --- construct_mfs --------------------------------------------------------------

class ConstructMfsTest : public ::testing::Test {
 protected:
  SubsystemSpec spec_ = ReferenceSubsystem();
  SearchSpace space_ = SpaceForSubsystem(spec_);
  DetectionPolicy policy_;
};

TEST_F(ConstructMfsTest, RowOneWithIncidentalQpCount) {
  SimulatorTester tester(spec_, ReferenceRules());
  WorkloadPoint p = AnomalyOneTriggerPoint();
  p.qp_count = 16;
  absl::StatusOr<MfsConstruction> c =
      ConstructMfs(p, tester, space_, spec_, policy_, 1);
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_FALSE(c->truncated);
  const AnomalyRule row1 = ReferenceRules()[0];
  EXPECT_TRUE(testing::SameOnGrid(c->mfs, row1.AsMfs(), space_));
  EXPECT_EQ(c->mfs.PredicateFor(Feature::kQpCount).kind, P::Kind::kAny);
  EXPECT_EQ(c->mfs.PredicateFor(Feature::kWqeBatch),
            P::AtLeast(Feature::kWqeBatch, 64));
  EXPECT_EQ(c->mfs.PredicateFor(Feature::kWqDepth),
            P::AtLeast(Feature::kWqDepth, 256));
  EXPECT_EQ(c->mfs.symptom, SymptomKind::kPauseAnomaly);
  EXPECT_TRUE(c->mfs.Matches(p));
}

TEST_F(ConstructMfsTest, SingleFeatureRuleYieldsOnePredicate) {
  AnomalyRule rule;
  rule.id = 1;
  rule.region = {P::AtLeast(Feature::kQpCount, 1024)};
  rule.magnitude = 0.3;
  SimulatorTester tester(spec_, {rule});
  WorkloadPoint p = AnomalyOneTriggerPoint();
  p.qp_count = 4096;
  absl::StatusOr<MfsConstruction> c =
      ConstructMfs(p, tester, space_, spec_, policy_, 1);
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(c->mfs.ConstrainedCount(), 1);
  EXPECT_EQ(c->mfs.PredicateFor(Feature::kQpCount),
            P::AtLeast(Feature::kQpCount, 1024));
}

TEST_F(ConstructMfsTest, InteriorRegionBecomesInRegion) {
  AnomalyRule rule;
  rule.id = 1;
  rule.region = {P::InRegion(Feature::kMrCount, 256, 4096)};
  rule.magnitude = 0.3;
  SimulatorTester tester(spec_, {rule});
  WorkloadPoint p = AnomalyOneTriggerPoint();
  p.mr_count = 1024;
  absl::StatusOr<MfsConstruction> c =
      ConstructMfs(p, tester, space_, spec_, policy_, 1);
  ASSERT_TRUE(c.ok()) << c.status();
  EXPECT_EQ(c->mfs.PredicateFor(Feature::kMrCount),
            P::InRegion(Feature::kMrCount, 256, 4096));
}

TEST_F(ConstructMfsTest, CostIsBoundedByTheSumOfGridSizes) {
  SimulatorTester tester(spec_, ReferenceRules());
  int64_t sum = 0;
  for (int i = 0; i < kFeatureCount; ++i) {
    sum += static_cast<int64_t>(FeatureGrid(space_, static_cast<Feature>(i)).size());
  }
  for (const AnomalyRule& rule : ReferenceRules()) {
    const WorkloadPoint p =
        CheckSpaceAgainstMfs(space_, {rule.AsMfs()}).at(0).point;
    absl::StatusOr<MfsConstruction> c =
        ConstructMfs(p, tester, space_, spec_, policy_, 1, 10000);
    ASSERT_TRUE(c.ok()) << c.status();
    EXPECT_LE(c->probes, sum) << rule.id;
  }
}

TEST_F(ConstructMfsTest, ReferenceRulesAreRecoveredSoundAndMinimal) {
  SimulatorTester tester(spec_, ReferenceRules());
  auto flagged = [&](const WorkloadPoint& q) {
    return Detect(*Simulate(q, spec_, ReferenceRules(), 1), spec_, policy_)
        .has_value();
  };
  for (const AnomalyRule& rule : ReferenceRules()) {
    const WorkloadPoint p =
        CheckSpaceAgainstMfs(space_, {rule.AsMfs()}).at(0).point;
    absl::StatusOr<MfsConstruction> c =
        ConstructMfs(p, tester, space_, spec_, policy_, 1);
    ASSERT_TRUE(c.ok()) << c.status();
    EXPECT_TRUE(testing::SameOnGrid(c->mfs, rule.AsMfs(), space_)) << rule.id;

    const std::vector<WorkloadPoint> pool =
        testing::MatchingPool(c->mfs, p, space_, 200, rule.id);
    for (const WorkloadPoint& q : pool) {
      EXPECT_TRUE(flagged(q)) << "rule " << rule.id;
    }
    int64_t used = 0;
    const std::vector<Feature> extra = testing::UnjustifiedPredicates(
        c->mfs, pool, space_, flagged, 10000, &used);
    std::string names;
    for (Feature f : extra) names += std::string(FeatureName(f)) + " ";
    EXPECT_TRUE(extra.empty()) << "rule " << rule.id << ": " << names
                               << "(pool " << pool.size() << ")";
    EXPECT_LE(used, 10000);
  }
}

TEST_F(ConstructMfsTest, ProbeAllowanceTruncates) {
  SimulatorTester tester(spec_, ReferenceRules());
  absl::StatusOr<MfsConstruction> c = ConstructMfs(
      AnomalyOneTriggerPoint(), tester, space_, spec_, policy_, 1, 5);
  ASSERT_TRUE(c.ok());
  EXPECT_TRUE(c->truncated);
  EXPECT_LE(c->probes, 5);
  EXPECT_TRUE(c->mfs.Matches(AnomalyOneTriggerPoint()));
}

// Flags the first evaluation only.
class FlakyTester : public Tester {
 public:
  absl::StatusOr<Measurement> Measure(const WorkloadPoint&,
                                      const EvalContext&) override {
    Measurement m;
    m.achieved_bps = 200e9;
    m.achieved_pps = 1e6;
    m.pause_duration_ratio = calls_++ < 4 ? 0.2 : 0.0;
    return m;
  }

 private:
  int calls_ = 0;
};

TEST_F(ConstructMfsTest, NonReproducingPointIsUnstable) {
  FlakyTester tester;
  ASSERT_TRUE(MeasureStable(AnomalyOneTriggerPoint(), tester, policy_, 1).ok());
  absl::StatusOr<MfsConstruction> c =
      ConstructMfs(AnomalyOneTriggerPoint(), tester, space_, spec_, policy_, 1);
  EXPECT_EQ(c.status().code(), absl::StatusCode::kFailedPrecondition);
  EXPECT_NE(c.status().message().find("unstable anomaly"), std::string::npos);
}

TEST(ClassifyProbeTest, MilderAnomalyCountsAsClear) {
  const AnomalySignature ref{SymptomKind::kPauseAnomaly, 0.20};
  EXPECT_EQ(ClassifyProbe(ref, std::nullopt, WithPause(0), 0.1),
            ProbeOutcome::kClear);
  EXPECT_EQ(ClassifyProbe(ref, SymptomKind::kPauseAnomaly, WithPause(0.15), 0.1),
            ProbeOutcome::kClear);
  EXPECT_EQ(ClassifyProbe(ref, SymptomKind::kPauseAnomaly, WithPause(0.20), 0.1),
            ProbeOutcome::kAnomalous);
  EXPECT_EQ(ClassifyProbe(ref, SymptomKind::kPauseAnomaly, WithPause(0.25), 0.1),
            ProbeOutcome::kAnomalous);
}

}  // namespace
}  // namespace rforge
