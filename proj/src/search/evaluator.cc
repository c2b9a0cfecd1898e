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

#include "search/evaluator.h"

#include <algorithm>

#include "common/log.h"
#include "common/rng.h"
#include "common/strings.h"
#include "monitor/mfs_builder.h"

namespace rforge {

namespace {

double CounterValue(const Measurement& m, std::string_view id) {
  if (id == kPauseCounterId) return m.pause_duration_ratio;
  return m.Counter(id).value_or(0.0);
}

// Mfs pinning every feature to the point's value: used for anomalies whose
// region could not be determined.
Mfs PointMfs(const WorkloadPoint& p) {
  Mfs mfs;
  for (int i = 0; i < kFeatureCount; ++i) {
    const Feature f = static_cast<Feature>(i);
    mfs.predicates.push_back(FeaturePredicate::Equals(f, FeatureValue(p, f)));
  }
  return mfs;
}

}  // namespace

std::string_view TrajectoryEventName(TrajectoryEvent e) {
  switch (e) {
    case TrajectoryEvent::kNone: return "none";
    case TrajectoryEvent::kAnomalyFound: return "anomaly-found";
    case TrajectoryEvent::kMfsExtraction: return "mfs-extraction";
  }
  return "?";
}

std::optional<TrajectoryEvent> ParseTrajectoryEvent(std::string_view s) {
  if (s == "none") return TrajectoryEvent::kNone;
  if (s == "anomaly-found") return TrajectoryEvent::kAnomalyFound;
  if (s == "mfs-extraction") return TrajectoryEvent::kMfsExtraction;
  return std::nullopt;
}

Evaluator::Evaluator(Tester& tester, SubsystemSpec spec, SearchSpace space,
                     EvaluatorOptions options,
                     std::vector<AnomalyRecord> preloaded)
    : tester_(tester),
      spec_(std::move(spec)),
      space_(std::move(space)),
      options_(options) {
  for (const AnomalyRecord& r : preloaded) {
    if (!r.unstable) skip_set_.push_back(r.mfs);
    next_anomaly_id_ = std::max(next_anomaly_id_, r.mfs.anomaly_id + 1);
  }
}

bool Evaluator::Skipped(const WorkloadPoint& point) const {
  return MatchesMfs(point, skip_set_).has_value();
}

absl::StatusOr<Measurement> Evaluator::Measure(const WorkloadPoint& point,
                                               std::string_view counter_id,
                                               TrajectoryEvent event) {
  const int64_t index = next_eval_index_++;
  absl::StatusOr<Measurement> m =
      MeasureStable(point, tester_, options_.policy,
                    MixSeed(options_.root_seed, static_cast<uint64_t>(index)),
                    index);
  if (!m.ok()) return m.status();
  if (absl::Status s = ValidateMeasurement(*m, spec_); !s.ok()) {
    return absl::FailedPreconditionError(StrCat(
        "evaluation ", index, ": tester returned an invalid measurement: ",
        s.message()));
  }
  trajectory_.push_back(
      {index, std::string(counter_id), CounterValue(*m, counter_id), event});
  return m;
}

absl::StatusOr<Evaluator::Result> Evaluator::Evaluate(
    const WorkloadPoint& point, std::string_view counter_id) {
  ++budget_used_;
  absl::StatusOr<Measurement> m =
      Measure(point, counter_id, TrajectoryEvent::kNone);
  if (!m.ok()) return m.status();
  Result r;
  r.symptom = Detect(*m, spec_, options_.policy);
  r.measurement = *std::move(m);
  if (r.symptom) trajectory_.back().event = TrajectoryEvent::kAnomalyFound;
  return r;
}

absl::StatusOr<AnomalyRecord> Evaluator::Discover(const WorkloadPoint& point,
                                                  const Result& result,
                                                  std::string_view counter_id,
                                                  std::string found_by) {
  AnomalyRecord record;
  record.discovery_point = point;
  record.symptom = *result.symptom;
  record.measurement = result.measurement;
  record.discovery_eval_index = next_eval_index_ - 1;
  record.discovery_budget_index = budget_used_;
  record.found_by = std::move(found_by);

  const int64_t allowance = options_.mfs_allowance;
  int64_t used = 0;
  const AnomalySignature reference =
      AnomalySignature::Of(*result.symptom, result.measurement);

  // Re-test the discovery point before spending probes on it.
  bool reproduced = false;
  if (allowance > 0) {
    ++used;
    absl::StatusOr<Measurement> again =
        Measure(point, counter_id, TrajectoryEvent::kMfsExtraction);
    if (!again.ok()) return again.status();
    const std::optional<SymptomKind> kind =
        Detect(*again, spec_, options_.policy);
    reproduced = kind.has_value() &&
                 ClassifyProbe(reference, kind, *again,
                               options_.policy.signature_tolerance) ==
                     ProbeOutcome::kAnomalous;
  }

  if (!reproduced) {
    record.unstable = true;
    record.mfs = PointMfs(point);
    Log().info("anomaly at eval {} did not reproduce; marked unstable",
               record.discovery_eval_index);
  } else {
    // Probes inside a stored Mfs are answered without the tester, so only
    // measured probes are metered.
    int64_t measured = 0;
    ProbeFn probe = [&](const WorkloadPoint& p)
        -> absl::StatusOr<ProbeOutcome> {
      if (Skipped(p)) return ProbeOutcome::kUntestable;
      ++measured;
      absl::StatusOr<Measurement> m =
          Measure(p, counter_id, TrajectoryEvent::kMfsExtraction);
      if (!m.ok()) return m.status();
      return ClassifyProbe(reference, Detect(*m, spec_, options_.policy), *m,
                           options_.policy.signature_tolerance);
    };
    absl::StatusOr<MfsConstruction> built =
        ConstructMfsWithProbe(point, space_, probe, allowance - used);
    if (!built.ok()) return built.status();
    used += measured;
    record.mfs = std::move(built->mfs);
    record.mfs_truncated = built->truncated;
  }
  record.mfs.anomaly_id = next_anomaly_id_++;
  record.mfs.symptom = record.symptom;
  record.mfs_evaluations = used;
  mfs_evaluations_ += used;
  if (!record.unstable) skip_set_.push_back(record.mfs);
  discovered_.push_back(record);
  Log().info("anomaly {} ({}) found by {} at eval {}; MFS took {} evals",
             record.mfs.anomaly_id, SymptomKindName(record.symptom),
             record.found_by, record.discovery_eval_index, used);
  return record;
}

}  // namespace rforge
