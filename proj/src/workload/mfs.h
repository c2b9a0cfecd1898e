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

#ifndef RFORGE_WORKLOAD_MFS_H_
#define RFORGE_WORKLOAD_MFS_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "workload/point.h"
#include "workload/space.h"
#include "workload/types.h"

namespace rforge {

// A condition on one feature. Bounds are inclusive:
//   kEquals    value == lo
//   kAtLeast   value >= lo
//   kAtMost    value <= hi
//   kInRegion  lo <= value <= hi
struct FeaturePredicate {
  enum class Kind { kAny, kEquals, kAtLeast, kAtMost, kInRegion };

  Feature feature = Feature::kSrcDevice;
  Kind kind = Kind::kAny;
  int64_t lo = 0;
  int64_t hi = 0;

  static FeaturePredicate Any(Feature f) { return {f, Kind::kAny, 0, 0}; }
  static FeaturePredicate Equals(Feature f, int64_t v) {
    return {f, Kind::kEquals, v, v};
  }
  static FeaturePredicate AtLeast(Feature f, int64_t v) {
    return {f, Kind::kAtLeast, v, 0};
  }
  static FeaturePredicate AtMost(Feature f, int64_t v) {
    return {f, Kind::kAtMost, 0, v};
  }
  static FeaturePredicate InRegion(Feature f, int64_t lo, int64_t hi) {
    return {f, Kind::kInRegion, lo, hi};
  }

  bool MatchesValue(int64_t value) const;
  bool Matches(const WorkloadPoint& point) const {
    return MatchesValue(FeatureValue(point, feature));
  }

  bool operator==(const FeaturePredicate&) const = default;
};

std::string_view PredicateKindName(FeaturePredicate::Kind k);
std::optional<FeaturePredicate::Kind> ParsePredicateKind(std::string_view s);

// Minimal feature set: a conjunction of predicates describing one anomaly
// region. Features without a predicate are unconstrained.
struct Mfs {
  int anomaly_id = 0;
  std::vector<FeaturePredicate> predicates;
  SymptomKind symptom = SymptomKind::kPauseAnomaly;

  bool Matches(const WorkloadPoint& point) const;
  // Predicate for `f`, or Any(f).
  FeaturePredicate PredicateFor(Feature f) const;
  // Number of non-`any` predicates.
  int ConstrainedCount() const;

  bool operator==(const Mfs&) const = default;
};

// Lowest-id Mfs that `point` falls into, if any.
std::optional<int> MatchesMfs(const WorkloadPoint& point,
                              const std::vector<Mfs>& anomalies);

struct SpaceWitness {
  int anomaly_id = 0;
  WorkloadPoint point;
};

// Anomaly-prevention check. For every Mfs whose region intersects the grid of
// `restricted`, returns one point of the intersection. An empty result means
// the restricted space avoids every known anomaly (on the grid).
std::vector<SpaceWitness> CheckSpaceAgainstMfs(
    const SearchSpace& restricted, const std::vector<Mfs>& anomalies);

// Grid values of `f` in `space` satisfying `predicate`.
std::vector<int64_t> AllowedValues(const SearchSpace& space,
                                   const FeaturePredicate& predicate);

}  // namespace rforge

#endif  // RFORGE_WORKLOAD_MFS_H_
