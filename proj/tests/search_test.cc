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
#include <set>

#include "gtest/gtest.h"
#include "search/energy.h"
#include "search/evaluator.h"
#include "search/search.h"
#include "sim/reference.h"
#include "test_support.h"

namespace rforge {
namespace {

// --- Energy -----------------------------------------------------------------

TEST(DeltaEnergyTest, PaperFormulas) {
  EXPECT_DOUBLE_EQ(DeltaEnergy(100, 80, CounterKind::kPerformance).delta, -0.2);
  EXPECT_DOUBLE_EQ(DeltaEnergy(500, 1000, CounterKind::kDiagnostic).delta,
                   -0.5);
  EXPECT_EQ(DeltaEnergy(42, 42, CounterKind::kPerformance).delta, 0.0);
  EXPECT_EQ(DeltaEnergy(42, 42, CounterKind::kDiagnostic).delta, 0.0);
  // Worsening moves are positive.
  EXPECT_DOUBLE_EQ(DeltaEnergy(80, 100, CounterKind::kPerformance).delta, 0.25);
  EXPECT_DOUBLE_EQ(DeltaEnergy(1000, 500, CounterKind::kDiagnostic).delta, 1.0);
}

TEST(DeltaEnergyTest, ZeroDenominatorUsesOne) {
  const DeltaEnergyResult perf = DeltaEnergy(0, 3, CounterKind::kPerformance);
  EXPECT_TRUE(perf.zero_denominator);
  EXPECT_DOUBLE_EQ(perf.delta, 3.0);
  const DeltaEnergyResult diag = DeltaEnergy(5, 0, CounterKind::kDiagnostic);
  EXPECT_TRUE(diag.zero_denominator);
  EXPECT_DOUBLE_EQ(diag.delta, 5.0);
  EXPECT_FALSE(DeltaEnergy(5, 1, CounterKind::kDiagnostic).zero_denominator);
}

TEST(AcceptMoveTest, ImprovementsAreAlwaysAccepted) {
  Rng rng(1);
  for (int i = 0; i < 10000; ++i) {
    ASSERT_TRUE(AcceptMove(-1e-9 - i * 1e-4, 0.05, rng));
  }
}

TEST(AcceptMoveTest, EmpiricalRateMatchesMetropolis) {
  Rng rng(2);
  for (double de : {0.1, 0.5, 1.0}) {
    for (double t : {0.05, 0.2, 1.0}) {
      int accepted = 0;
      const int trials = 10000;
      for (int i = 0; i < trials; ++i) accepted += AcceptMove(de, t, rng);
      const double expected = std::exp(-de / t);
      EXPECT_NEAR(static_cast<double>(accepted) / trials, expected, 0.05)
          << "dE=" << de << " T=" << t;
    }
  }
}

// --- Counter ranking ---------------------------------------------------------

std::vector<Measurement> History(
    const std::vector<std::pair<std::string, std::vector<double>>>& series) {
  std::vector<Measurement> out(series.front().second.size());
  for (const auto& [id, values] : series) {
    for (size_t i = 0; i < values.size(); ++i) {
      out[i].diag_counters[id] = values[i];
    }
  }
  return out;
}

TEST(RankCountersTest, HandComputedCoefficientOfVariation) {
  const std::vector<RankedCounter> r =
      RankCounters(History({{"x", {5, 5, 5, 5}}, {"y", {0, 10, 0, 10}}}));
  ASSERT_EQ(r.size(), 2u);
  EXPECT_EQ(r[0].objective.counter_id, "y");
  // mean 5, population std 5.
  EXPECT_DOUBLE_EQ(*r[0].cv, 1.0);
  EXPECT_EQ(r[1].objective.counter_id, "x");
  EXPECT_DOUBLE_EQ(*r[1].cv, 0.0);
  // [1, 2, 3]: mean 2, std sqrt(2/3).
  const std::vector<RankedCounter> s = RankCounters(History({{"z", {1, 2, 3}}}));
  ASSERT_EQ(s.size(), 1u);
  EXPECT_DOUBLE_EQ(*s[0].cv, std::sqrt(2.0 / 3.0) / 2.0);
}

TEST(RankCountersTest, TiesBreakByIdAndZeroMeansGoLast) {
  const std::vector<RankedCounter> r = RankCounters(History(
      {{"b", {1, 3}}, {"a", {2, 6}}, {"zero", {0, 0}}, {"c", {1, 1}}}));
  ASSERT_EQ(r.size(), 4u);
  EXPECT_EQ(r[0].objective.counter_id, "a");
  EXPECT_EQ(r[1].objective.counter_id, "b");
  EXPECT_EQ(r[2].objective.counter_id, "c");
  EXPECT_EQ(r[3].objective.counter_id, "zero");
  EXPECT_FALSE(r[3].cv.has_value());
}

TEST(RankCountersTest, CounterKindFollowsItsMap) {
  std::vector<Measurement> samples(2);
  samples[0].perf_counters["tx_bps"] = 1;
  samples[1].perf_counters["tx_bps"] = 2;
  samples[0].diag_counters["miss"] = 1;
  samples[1].diag_counters["miss"] = 3;
  for (const RankedCounter& r : RankCounters(samples)) {
    EXPECT_EQ(r.objective.kind, r.objective.counter_id == "tx_bps"
                                    ? CounterKind::kPerformance
                                    : CounterKind::kDiagnostic);
  }
}

// --- Search runs ---------------------------------------------------------------

class SearchTest : public ::testing::Test {
 protected:
  EvaluatorOptions Options(int64_t budget, uint64_t seed = 1) const {
    EvaluatorOptions o;
    o.eval_budget = budget;
    o.root_seed = seed;
    return o;
  }
  std::vector<AnomalyRecord> KnownReferenceAnomalies() const {
    std::vector<AnomalyRecord> known;
    for (const AnomalyRule& r : rules_) {
      AnomalyRecord rec;
      rec.mfs = r.AsMfs();
      rec.mfs.anomaly_id = r.id;
      known.push_back(rec);
    }
    return known;
  }

  SubsystemSpec spec_ = ReferenceSubsystem();
  SearchSpace space_ = SpaceForSubsystem(spec_);
  std::vector<AnomalyRule> rules_ = ReferenceRules();
  CounterObjective recv_{std::string(kRecvWqeCacheMiss),
                         CounterKind::kDiagnostic};
};

TEST_F(SearchTest, SaOnReceiveCacheMissesFindsRowOne) {
  SimulatorTester tester(spec_, rules_);
  Evaluator ev(tester, spec_, space_, Options(2000));
  Rng rng(MixSeed(1, 1000));
  ASSERT_TRUE(SearchSa(recv_, SaConfig{}, ev, rng).ok());
  std::set<int> found;
  for (const AnomalyRecord& r : ev.discovered()) {
    found.insert(testing::RuleOf(r.discovery_point, rules_));
  }
  EXPECT_TRUE(found.count(1));
}

TEST_F(SearchTest, TemperatureScheduleIsGeometric) {
  SimulatorTester tester(spec_, {});
  Evaluator ev(tester, spec_, space_, Options(1000000));
  Rng rng(4);
  SaRunStats stats;
  ASSERT_TRUE(SearchSa(recv_, SaConfig{}, ev, rng, &stats).ok());
  // Smallest k with 0.9^k <= 0.01.
  int k = 0;
  for (double t = 1.0; t > 0.01; t *= 0.9) ++k;
  EXPECT_EQ(k, 44);
  EXPECT_EQ(stats.temperature_steps, k);
  EXPECT_EQ(stats.iterations, 20 * k);
  EXPECT_EQ(stats.termination, Termination::kTemperatureFloor);
}

TEST_F(SearchTest, StartBelowFloorReturnsImmediately) {
  testing::CallLogTester tester(spec_, rules_);
  std::vector<AnomalyRecord> known = KnownReferenceAnomalies();
  known.resize(2);
  Evaluator ev(tester, spec_, space_, Options(2000), known);
  SaConfig config;
  config.t0 = 0.005;
  Rng rng(1);
  SaRunStats stats;
  ASSERT_TRUE(SearchSa(recv_, config, ev, rng, &stats).ok());
  EXPECT_EQ(stats.iterations, 0);
  EXPECT_TRUE(tester.calls().empty());
  EXPECT_TRUE(ev.discovered().empty());
}

TEST_F(SearchTest, PreloadedMfsAreNeverEvaluated) {
  testing::CallLogTester tester(spec_, rules_);
  const std::vector<AnomalyRecord> known = KnownReferenceAnomalies();
  Evaluator ev(tester, spec_, space_, Options(2000), known);
  Rng rng(9);
  SaRunStats stats;
  ASSERT_TRUE(SearchSa(recv_, SaConfig{}, ev, rng, &stats).ok());
  EXPECT_TRUE(ev.discovered().empty());
  EXPECT_GT(stats.skips, 0);
  std::vector<Mfs> mfs;
  for (const AnomalyRecord& r : known) mfs.push_back(r.mfs);
  for (const WorkloadPoint& p : tester.calls()) {
    ASSERT_EQ(MatchesMfs(p, mfs), std::nullopt);
  }
}

TEST_F(SearchTest, RandomWithZeroBudgetFindsNothing) {
  testing::CallLogTester tester(spec_, rules_);
  Evaluator ev(tester, spec_, space_, Options(0));
  Rng rng(1);
  ASSERT_TRUE(SearchRandom(ev, rng).ok());
  EXPECT_TRUE(ev.discovered().empty());
  EXPECT_TRUE(tester.calls().empty());
}

TEST_F(SearchTest, RandomIsDeterministic) {
  CampaignOptions options;
  options.sa.eval_budget = 500;
  SimulatorTester t1(spec_, rules_), t2(spec_, rules_);
  const CampaignReport a = RunRandomCampaign(options, space_, spec_, t1);
  const CampaignReport b = RunRandomCampaign(options, space_, spec_, t2);
  EXPECT_EQ(a.anomalies, b.anomalies);
  EXPECT_EQ(a.trajectory, b.trajectory);
  EXPECT_FALSE(a.anomalies.empty());
}

TEST_F(SearchTest, CampaignAccounting) {
  CampaignOptions options;
  testing::CallLogTester tester(spec_, rules_);
  const CampaignReport r = RunCampaign(options, space_, spec_, tester);
  ASSERT_TRUE(r.status.ok());
  EXPECT_EQ(r.termination, Termination::kBudgetExhausted);
  EXPECT_EQ(r.budget_evaluations, options.sa.eval_budget);
  // One trajectory row per evaluation; each evaluation is four samples.
  EXPECT_EQ(static_cast<int64_t>(r.trajectory.size()), r.total_evaluations);
  EXPECT_EQ(static_cast<int64_t>(tester.calls().size()),
            4 * r.total_evaluations);
  EXPECT_EQ(r.total_evaluations, r.budget_evaluations + r.mfs_evaluations);
  EXPECT_LE(r.mfs_evaluations,
            options.sa.mfs_allowance * static_cast<int64_t>(r.anomalies.size()));
  for (const AnomalyRecord& a : r.anomalies) {
    EXPECT_LE(a.mfs_evaluations, options.sa.mfs_allowance);
    EXPECT_TRUE(a.mfs.Matches(a.discovery_point));
  }
  EXPECT_EQ(r.ranking.size(), 4u);
}

TEST_F(SearchTest, CampaignFindsEveryReferenceRule) {
  SimulatorTester tester(spec_, rules_);
  const CampaignReport r = RunCampaign(CampaignOptions{}, space_, spec_, tester);
  std::set<int> found;
  for (const AnomalyRecord& a : r.anomalies) {
    const int rule = testing::RuleOf(a.discovery_point, rules_);
    found.insert(rule);
    for (const AnomalyRule& ar : rules_) {
      if (ar.id == rule) {
        EXPECT_TRUE(testing::SameOnGrid(a.mfs, ar.AsMfs(), space_)) << rule;
      }
    }
  }
  EXPECT_EQ(found, (std::set<int>{1, 3, 7, 9, 13, 15}));
}

TEST_F(SearchTest, CampaignIsDeterministic) {
  SimulatorTester t1(spec_, rules_), t2(spec_, rules_);
  CampaignOptions options;
  options.sa.seed = 3;
  const CampaignReport a = RunCampaign(options, space_, spec_, t1);
  const CampaignReport b = RunCampaign(options, space_, spec_, t2);
  EXPECT_EQ(a.anomalies, b.anomalies);
  EXPECT_EQ(a.trajectory, b.trajectory);
  options.sa.seed = 4;
  SimulatorTester t3(spec_, rules_);
  EXPECT_NE(RunCampaign(options, space_, spec_, t3).trajectory, a.trajectory);
}

TEST_F(SearchTest, NoCountersFallsBackToRandom) {
  CampaignOptions options;
  options.counters.clear();
  options.sa.eval_budget = 300;
  SimulatorTester t1(spec_, rules_), t2(spec_, rules_);
  const CampaignReport a = RunCampaign(options, space_, spec_, t1);
  const CampaignReport b = RunRandomCampaign(options, space_, spec_, t2);
  EXPECT_EQ(a.anomalies, b.anomalies);
  EXPECT_EQ(a.trajectory, b.trajectory);
  EXPECT_TRUE(a.ranking.empty());
}

TEST_F(SearchTest, PreloadedCampaignSkipsEveryKnownRegion) {
  testing::CallLogTester tester(spec_, rules_);
  CampaignOptions options;
  options.sa.eval_budget = 500;
  options.known = KnownReferenceAnomalies();
  const CampaignReport r = RunCampaign(options, space_, spec_, tester);
  ASSERT_TRUE(r.status.ok());
  EXPECT_TRUE(r.anomalies.empty());
  EXPECT_GT(r.skipped_points, 0);
  std::vector<Mfs> mfs;
  for (const AnomalyRecord& k : options.known) mfs.push_back(k.mfs);
  for (const WorkloadPoint& p : tester.calls()) {
    ASSERT_EQ(MatchesMfs(p, mfs), std::nullopt);
  }
}

// Fails on the n-th call.
class FailingTester : public Tester {
 public:
  FailingTester(SubsystemSpec spec, std::vector<AnomalyRule> rules, int fail_at)
      : inner_(std::move(spec), std::move(rules)), fail_at_(fail_at) {}
  absl::StatusOr<Measurement> Measure(const WorkloadPoint& p,
                                      const EvalContext& ctx) override {
    if (++calls_ == fail_at_) return absl::AbortedError("engine crashed");
    return inner_.Measure(p, ctx);
  }

 private:
  SimulatorTester inner_;
  int fail_at_;
  int calls_ = 0;
};

TEST_F(SearchTest, TesterFailureKeepsPartialResults) {
  FailingTester tester(spec_, rules_, 4000);
  const CampaignReport r = RunCampaign(CampaignOptions{}, space_, spec_, tester);
  EXPECT_EQ(r.status.code(), absl::StatusCode::kAborted);
  EXPECT_EQ(r.termination, Termination::kTesterError);
  EXPECT_FALSE(r.anomalies.empty());
  EXPECT_LT(r.budget_evaluations, 2000);
}

TEST(SaConfigTest, Validation) {
  SaConfig c;
  EXPECT_TRUE(c.Validate().ok());
  c.alpha = 1.0;
  EXPECT_FALSE(c.Validate().ok());
  c = SaConfig{};
  c.t_min = 0;
  EXPECT_FALSE(c.Validate().ok());
  c = SaConfig{};
  c.t0 = 0.005;
  EXPECT_FALSE(c.Validate().ok());
  c = SaConfig{};
  c.n_per_temperature = 0;
  EXPECT_FALSE(c.Validate().ok());
}

}  // namespace
}  // namespace rforge
