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

#include "search/energy.h"

#include <algorithm>
#include <cmath>
#include <map>

namespace rforge {

std::string_view CounterKindName(CounterKind k) {
  return k == CounterKind::kPerformance ? "performance" : "diagnostic";
}

std::optional<CounterKind> ParseCounterKind(std::string_view s) {
  if (s == "performance") return CounterKind::kPerformance;
  if (s == "diagnostic") return CounterKind::kDiagnostic;
  return std::nullopt;
}

DeltaEnergyResult DeltaEnergy(double old_value, double new_value,
                              CounterKind kind) {
  const double numerator = kind == CounterKind::kPerformance
                               ? new_value - old_value
                               : old_value - new_value;
  double denominator =
      kind == CounterKind::kPerformance ? old_value : new_value;
  DeltaEnergyResult r;
  if (denominator == 0.0) {
    denominator = 1.0;
    r.zero_denominator = true;
  }
  r.delta = numerator / denominator;
  return r;
}

bool AcceptMove(double delta, double temperature, Rng& rng) {
  if (delta < 0.0) return true;
  return rng.Uniform01() < std::exp(-delta / temperature);
}

std::vector<RankedCounter> RankCounters(
    const std::vector<Measurement>& samples) {
  std::map<std::string, std::pair<CounterKind, std::vector<double>>> series;
  for (const Measurement& m : samples) {
    for (const auto& [id, v] : m.perf_counters) {
      auto& s = series[id];
      s.first = CounterKind::kPerformance;
      s.second.push_back(v);
    }
    for (const auto& [id, v] : m.diag_counters) {
      auto& s = series[id];
      s.first = CounterKind::kDiagnostic;
      s.second.push_back(v);
    }
  }
  std::vector<RankedCounter> out;
  for (const auto& [id, s] : series) {
    const std::vector<double>& v = s.second;
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    RankedCounter r{{id, s.first}, std::nullopt};
    if (mean != 0.0) {
      double var = 0.0;
      for (double x : v) var += (x - mean) * (x - mean);
      var /= static_cast<double>(v.size());
      r.cv = std::sqrt(var) / std::fabs(mean);
    }
    out.push_back(std::move(r));
  }
  // `series` is ordered by id, so a stable sort keeps the id tie-break.
  std::stable_sort(out.begin(), out.end(),
                   [](const RankedCounter& a, const RankedCounter& b) {
                     if (a.cv.has_value() != b.cv.has_value()) {
                       return a.cv.has_value();
                     }
                     return a.cv.has_value() && *a.cv > *b.cv;
                   });
  return out;
}

}  // namespace rforge
