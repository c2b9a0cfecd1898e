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

#ifndef RFORGE_SEARCH_SEARCH_H_
#define RFORGE_SEARCH_SEARCH_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "absl/status/status.h"
#include "common/rng.h"
#include "monitor/detect.h"
#include "monitor/record.h"
#include "monitor/tester.h"
#include "search/energy.h"
#include "search/evaluator.h"
#include "sim/subsystem.h"
#include "workload/space.h"

namespace rforge {

struct SaConfig {
  double t0 = 1.0;
  double t_min = 0.01;
  double alpha = 0.9;
  int n_per_temperature = 20;
  int64_t eval_budget = 2000;
  uint64_t seed = 1;
  // MFS evaluations allowed per anomaly, metered outside eval_budget.
  int64_t mfs_allowance = 500;

  absl::Status Validate() const;

  bool operator==(const SaConfig&) const = default;
};

// Number of random points evaluated before the counters are ranked.
inline constexpr int kRankingSamples = 10;

// Why a search stopped.
enum class Termination {
  kBudgetExhausted,
  kTemperatureFloor,
  // Every sampled start point fell into a known Mfs.
  kSpaceExhausted,
  kTesterError,
};

std::string_view TerminationName(Termination t);

struct SaRunStats {
  int64_t iterations = 0;
  int64_t evaluations = 0;
  int64_t skips = 0;
  int64_t accepted = 0;
  int temperature_steps = 0;
  Termination termination = Termination::kTemperatureFloor;
};

// Counter-guided simulated annealing on one counter with MFS skipping. Random
// start; per temperature, n mutations; points inside a stored Mfs are skipped
// (counted as iterations, not evaluations); each evaluated point is checked
// for anomalies, and a discovery triggers MFS construction and a random
// restart. T decays geometrically per outer pass until T <= t_min or the
// budget is gone. Returns the tester error, if any; discoveries land in
// `evaluator`.
absl::Status SearchSa(const CounterObjective& objective, const SaConfig& config,
                      Evaluator& evaluator, Rng& rng,
                      SaRunStats* stats = nullptr);

// Random baseline: uniform points until the budget is spent, with the same
// detection, MFS construction and skip rule.
absl::Status SearchRandom(Evaluator& evaluator, Rng& rng,
                          Termination* termination = nullptr);

struct CampaignOptions {
  SaConfig sa;
  DetectionPolicy detection;
  // Counters the campaign may optimize; ranking orders them. Empty means
  // random search.
  std::vector<CounterObjective> counters = DefaultCounters();
  // Anomalies known before the campaign starts (the initial set S).
  std::vector<AnomalyRecord> known;

  static std::vector<CounterObjective> DefaultCounters();
};

struct CampaignReport {
  uint64_t seed = 0;
  int64_t eval_budget = 0;
  // New anomalies, in discovery order.
  std::vector<AnomalyRecord> anomalies;
  std::vector<RankedCounter> ranking;
  std::vector<TrajectoryRow> trajectory;
  int64_t budget_evaluations = 0;
  int64_t mfs_evaluations = 0;
  int64_t total_evaluations = 0;
  int64_t skipped_points = 0;
  int64_t zero_denominator_steps = 0;
  Termination termination = Termination::kBudgetExhausted;
  // Tester failure that aborted the campaign; anomalies hold the partial set.
  absl::Status status;
};

// Evaluates kRankingSamples random points, ranks the configured counters by
// coefficient of variation, then runs SearchSa per counter in rank order,
// sharing one anomaly set and one budget. Passes over the ranking repeat
// (with fresh random streams) while budget remains.
CampaignReport RunCampaign(const CampaignOptions& options,
                           const SearchSpace& space, const SubsystemSpec& spec,
                           Tester& tester);

// Random search under the same accounting, as a comparable report.
CampaignReport RunRandomCampaign(const CampaignOptions& options,
                                 const SearchSpace& space,
                                 const SubsystemSpec& spec, Tester& tester);

}  // namespace rforge

#endif  // RFORGE_SEARCH_SEARCH_H_
