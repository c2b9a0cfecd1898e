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

#ifndef RFORGE_SEARCH_ENERGY_H_
#define RFORGE_SEARCH_ENERGY_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/rng.h"
#include "sim/subsystem.h"

namespace rforge {

enum class CounterKind {
  // Throughput-style counter, driven towards low values.
  kPerformance,
  // Internal-event counter (cache misses, backpressure), driven up.
  kDiagnostic,
};

std::string_view CounterKindName(CounterKind k);
std::optional<CounterKind> ParseCounterKind(std::string_view s);

struct CounterObjective {
  std::string counter_id;
  CounterKind kind = CounterKind::kDiagnostic;

  bool operator==(const CounterObjective&) const = default;
};

struct DeltaEnergyResult {
  double delta = 0.0;
  // The denominator was zero and replaced by 1.
  bool zero_denominator = false;
};

// Energy change when the counter moves from `old_value` (A) to `new_value`
// (B): (B - A) / A for performance counters, (A - B) / B for diagnostic
// counters. Negative means improvement.
DeltaEnergyResult DeltaEnergy(double old_value, double new_value,
                              CounterKind kind);

// Metropolis criterion: always accepts delta < 0, otherwise accepts with
// probability exp(-delta / temperature). Draws from `rng` only when needed.
bool AcceptMove(double delta, double temperature, Rng& rng);

struct RankedCounter {
  CounterObjective objective;
  // Coefficient of variation (population std / mean); nullopt when the mean
  // is zero.
  std::optional<double> cv;
};

// Orders every counter seen in `samples` by decreasing coefficient of
// variation. Counters with zero mean go last; ties break by counter id.
// Counters from perf_counters are performance objectives, those from
// diag_counters diagnostic ones.
std::vector<RankedCounter> RankCounters(const std::vector<Measurement>& samples);

}  // namespace rforge

#endif  // RFORGE_SEARCH_ENERGY_H_
