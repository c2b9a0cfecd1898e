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

#ifndef RFORGE_SEARCH_EVALUATOR_H_
#define RFORGE_SEARCH_EVALUATOR_H_

#include <cstdint>
#include <climits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/statusor.h"
#include "monitor/detect.h"
#include "monitor/record.h"
#include "monitor/tester.h"
#include "sim/subsystem.h"
#include "workload/mfs.h"
#include "workload/point.h"
#include "workload/space.h"

namespace rforge {

enum class TrajectoryEvent { kNone, kAnomalyFound, kMfsExtraction };

std::string_view TrajectoryEventName(TrajectoryEvent e);
std::optional<TrajectoryEvent> ParseTrajectoryEvent(std::string_view s);

// Pseudo-counter id used when no counter steers the search (ranking
// preamble, random search): the pause duration ratio.
inline constexpr std::string_view kPauseCounterId = "pause_duration_ratio";

// One row per evaluation.
struct TrajectoryRow {
  int64_t eval_index = 0;
  std::string counter_id;
  // Raw value of the counter; normalized by the per-counter maximum when
  // exported.
  double value = 0.0;
  TrajectoryEvent event = TrajectoryEvent::kNone;

  bool operator==(const TrajectoryRow&) const = default;
};

struct EvaluatorOptions {
  DetectionPolicy policy;
  uint64_t root_seed = 1;
  // Evaluations available to the search (ranking preamble included).
  int64_t eval_budget = 2000;
  // Evaluations available to each MFS construction, on top of the budget.
  int64_t mfs_allowance = 500;
};

// Shared state of one campaign: the tester, the anomaly set S, evaluation
// accounting and the trajectory. One evaluation is one MeasureStable call;
// evaluation i samples with seeds derived from MixSeed(root_seed, i).
class Evaluator {
 public:
  struct Result {
    Measurement measurement;
    std::optional<SymptomKind> symptom;
  };

  Evaluator(Tester& tester, SubsystemSpec spec, SearchSpace space,
            EvaluatorOptions options,
            std::vector<AnomalyRecord> preloaded = {});

  // True when `point` falls into a stable, stored Mfs. Such points are never
  // sent to the tester.
  bool Skipped(const WorkloadPoint& point) const;
  bool BudgetLeft() const {
    return budget_used_ < options_.eval_budget && budget_used_ < run_limit_;
  }
  // Caps budget_used() for the current search run (the campaign slices its
  // budget between counters). ClearRunLimit() lifts the cap.
  void SetRunLimit(int64_t limit) { run_limit_ = limit; }
  void ClearRunLimit() { run_limit_ = INT64_MAX; }

  // One budgeted evaluation. Requires BudgetLeft() and !Skipped(point).
  absl::StatusOr<Result> Evaluate(const WorkloadPoint& point,
                                  std::string_view counter_id);

  // Handles an anomaly seen by the last Evaluate(): re-tests the point,
  // constructs its MFS (metered against the MFS allowance) and adds it to S.
  absl::StatusOr<AnomalyRecord> Discover(const WorkloadPoint& point,
                                         const Result& result,
                                         std::string_view counter_id,
                                         std::string found_by);

  void CountSkip() { ++skipped_points_; }
  void CountZeroDenominator() { ++zero_denominator_steps_; }

  const SubsystemSpec& spec() const { return spec_; }
  const SearchSpace& space() const { return space_; }
  const EvaluatorOptions& options() const { return options_; }
  // Anomalies discovered by this evaluator, in discovery order.
  const std::vector<AnomalyRecord>& discovered() const { return discovered_; }
  const std::vector<TrajectoryRow>& trajectory() const { return trajectory_; }
  int64_t budget_used() const { return budget_used_; }
  int64_t mfs_evaluations() const { return mfs_evaluations_; }
  int64_t total_evaluations() const { return next_eval_index_; }
  int64_t skipped_points() const { return skipped_points_; }
  int64_t zero_denominator_steps() const { return zero_denominator_steps_; }

 private:
  absl::StatusOr<Measurement> Measure(const WorkloadPoint& point,
                                      std::string_view counter_id,
                                      TrajectoryEvent event);

  Tester& tester_;
  SubsystemSpec spec_;
  SearchSpace space_;
  EvaluatorOptions options_;
  // Stable Mfs of preloaded and discovered anomalies: the skip set.
  std::vector<Mfs> skip_set_;
  std::vector<AnomalyRecord> discovered_;
  std::vector<TrajectoryRow> trajectory_;
  int64_t next_eval_index_ = 0;
  int64_t budget_used_ = 0;
  int64_t mfs_evaluations_ = 0;
  int64_t skipped_points_ = 0;
  int64_t zero_denominator_steps_ = 0;
  int next_anomaly_id_ = 1;
  int64_t run_limit_ = INT64_MAX;
};

}  // namespace rforge

#endif  // RFORGE_SEARCH_EVALUATOR_H_
