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

#include "monitor/mfs_builder.h"

#include <algorithm>
#include <optional>
#include <vector>

#include "absl/strings/str_cat.h"
#include "common/log.h"
#include "common/rng.h"

namespace rforge {

namespace {

using Kind = FeaturePredicate::Kind;

class Ablation {
 public:
  Ablation(const WorkloadPoint& point, const SearchSpace& space,
           const ProbeFn& probe, int64_t max_probes)
      : point_(point), space_(space), probe_(probe), max_probes_(max_probes) {}

  absl::StatusOr<MfsConstruction> Run() {
    MfsConstruction out;
    const bool single_message = point_.message_pattern.size() == 1;
    for (int i = 0; i < kFeatureCount; ++i) {
      const Feature f = static_cast<Feature>(i);
      absl::StatusOr<std::optional<FeaturePredicate>> pred;
      if (f == Feature::kQpType || f == Feature::kOpcode) {
        pred = AblateTransportHalf(f);
      } else if (single_message && f == Feature::kMsgSizeMax) {
        continue;  // Decided together with kMsgSizeMin.
      } else if (single_message && f == Feature::kMsgSizeMin) {
        absl::StatusOr<std::optional<FeaturePredicate>> joint =
            AblateSingleMessage();
        if (!joint.ok()) return joint.status();
        if (!joint->has_value()) {
          Pin(Feature::kMsgSizeMin, out);
          Pin(Feature::kMsgSizeMax, out);
          continue;
        }
        const FeaturePredicate& p = **joint;
        FeaturePredicate min_pred = FeaturePredicate::Any(Feature::kMsgSizeMin);
        FeaturePredicate max_pred = FeaturePredicate::Any(Feature::kMsgSizeMax);
        if (p.kind == Kind::kAtLeast || p.kind == Kind::kInRegion) {
          min_pred = p;
          min_pred.feature = Feature::kMsgSizeMin;
        }
        if (p.kind == Kind::kAtMost || p.kind == Kind::kInRegion) {
          max_pred = p;
          max_pred.feature = Feature::kMsgSizeMax;
        }
        out.mfs.predicates.push_back(min_pred);
        out.mfs.predicates.push_back(max_pred);
        continue;
      } else if (IsNumericFeature(f)) {
        pred = AblateNumeric(f);
      } else {
        pred = AblateCategorical(f);
      }
      if (!pred.ok()) return pred.status();
      if (!pred->has_value()) {
        Pin(f, out);
        continue;
      }
      out.mfs.predicates.push_back(**pred);
    }
    std::sort(out.mfs.predicates.begin(), out.mfs.predicates.end(),
              [](const FeaturePredicate& a, const FeaturePredicate& b) {
                return a.feature < b.feature;
              });
    out.probes = probes_;
    out.truncated = truncated_;
    return out;
  }

 private:
  // Pins `f` to its discovery value after the probe allowance ran out.
  void Pin(Feature f, MfsConstruction& out) {
    out.mfs.predicates.push_back(
        FeaturePredicate::Equals(f, FeatureValue(point_, f)));
  }

  // nullopt when the allowance is exhausted.
  absl::StatusOr<std::optional<ProbeOutcome>> Probe(
      const std::optional<WorkloadPoint>& p) {
    if (!p) return std::optional<ProbeOutcome>(ProbeOutcome::kUntestable);
    if (probes_ >= max_probes_) {
      truncated_ = true;
      return std::optional<ProbeOutcome>();
    }
    ++probes_;
    absl::StatusOr<ProbeOutcome> r = probe_(*p);
    if (!r.ok()) return r.status();
    return std::optional<ProbeOutcome>(*r);
  }

  // Returns Equals(current) if some alternative in `candidates` clears, Any
  // otherwise, nullopt if the allowance ran out first.
  absl::StatusOr<std::optional<FeaturePredicate>> FirstClearing(
      Feature f, const std::vector<std::optional<WorkloadPoint>>& candidates) {
    for (const auto& c : candidates) {
      absl::StatusOr<std::optional<ProbeOutcome>> r = Probe(c);
      if (!r.ok()) return r.status();
      if (!r->has_value()) return std::optional<FeaturePredicate>();
      if (**r == ProbeOutcome::kClear) {
        return std::optional<FeaturePredicate>(
            FeaturePredicate::Equals(f, FeatureValue(point_, f)));
      }
    }
    return std::optional<FeaturePredicate>(FeaturePredicate::Any(f));
  }

  absl::StatusOr<std::optional<FeaturePredicate>> AblateCategorical(
      Feature f) {
    const int64_t current = FeatureValue(point_, f);
    std::vector<std::optional<WorkloadPoint>> candidates;
    for (int64_t v : FeatureGrid(space_, f)) {
      if (v != current) candidates.push_back(WithFeature(point_, f, v, space_));
    }
    return FirstClearing(f, candidates);
  }

  // qp_type is varied under the same opcode and opcode under the same
  // qp_type. Only when the verbs matrix leaves no such alternative (UD has
  // SEND only; READ needs RC) are pairs differing in the other half used.
  absl::StatusOr<std::optional<FeaturePredicate>> AblateTransportHalf(
      Feature f) {
    const Transport cur = point_.transport();
    const bool vary_qp = f == Feature::kQpType;
    std::vector<Transport> same_other_half, any_other;
    for (const Transport& t : space_.transports) {
      const bool differs =
          vary_qp ? t.qp_type != cur.qp_type : t.opcode != cur.opcode;
      if (!differs) continue;
      any_other.push_back(t);
      const bool keeps =
          vary_qp ? t.opcode == cur.opcode : t.qp_type == cur.qp_type;
      if (keeps) same_other_half.push_back(t);
    }
    const std::vector<Transport>& alternatives =
        same_other_half.empty() ? any_other : same_other_half;
    std::vector<std::optional<WorkloadPoint>> candidates;
    for (const Transport& t : alternatives) {
      WorkloadPoint p = point_;
      p.qp_type = t.qp_type;
      p.opcode = t.opcode;
      if (ValidatePoint(p, space_).ok()) {
        candidates.push_back(p);
      } else {
        candidates.push_back(std::nullopt);
      }
    }
    return FirstClearing(f, candidates);
  }

  // Tests every grid value (the discovery value is known anomalous) and
  // turns the maximal anomalous run around the discovery value into a
  // predicate. Untestable values never break the run; a run bounded by a
  // clearing value is tightened to its outermost anomalous value.
  absl::StatusOr<std::optional<FeaturePredicate>> RegionFromRun(
      Feature f, std::vector<int64_t> grid,
      const std::function<std::optional<WorkloadPoint>(int64_t)>& with) {
    const int64_t current = FeatureValue(point_, f);
    if (std::find(grid.begin(), grid.end(), current) == grid.end()) {
      grid.push_back(current);
      std::sort(grid.begin(), grid.end());
    }
    const int n = static_cast<int>(grid.size());
    const int at = static_cast<int>(
        std::find(grid.begin(), grid.end(), current) - grid.begin());
    std::vector<ProbeOutcome> outcome(n, ProbeOutcome::kUntestable);
    outcome[at] = ProbeOutcome::kAnomalous;
    for (int i = 0; i < n; ++i) {
      if (i == at) continue;
      absl::StatusOr<std::optional<ProbeOutcome>> r = Probe(with(grid[i]));
      if (!r.ok()) return r.status();
      if (!r->has_value()) return std::optional<FeaturePredicate>();
      outcome[i] = **r;
    }
    int lo = at, hi = at;
    bool open_below = true, open_above = true;
    for (int i = at - 1; i >= 0; --i) {
      if (outcome[i] == ProbeOutcome::kClear) {
        open_below = false;
        break;
      }
      if (outcome[i] == ProbeOutcome::kAnomalous) lo = i;
    }
    for (int i = at + 1; i < n; ++i) {
      if (outcome[i] == ProbeOutcome::kClear) {
        open_above = false;
        break;
      }
      if (outcome[i] == ProbeOutcome::kAnomalous) hi = i;
    }
    FeaturePredicate p;
    if (open_below && open_above) {
      p = FeaturePredicate::Any(f);
    } else if (open_below) {
      p = FeaturePredicate::AtMost(f, grid[hi]);
    } else if (open_above) {
      p = FeaturePredicate::AtLeast(f, grid[lo]);
    } else {
      p = FeaturePredicate::InRegion(f, grid[lo], grid[hi]);
    }
    return std::optional<FeaturePredicate>(p);
  }

  absl::StatusOr<std::optional<FeaturePredicate>> AblateNumeric(Feature f) {
    return RegionFromRun(f, FeatureGrid(space_, f), [&](int64_t v) {
      return WithFeature(point_, f, v, space_);
    });
  }

  absl::StatusOr<std::optional<FeaturePredicate>> AblateSingleMessage() {
    return RegionFromRun(Feature::kMsgSizeMin, space_.MessageSizeGrid(),
                         [&](int64_t v) -> std::optional<WorkloadPoint> {
                           WorkloadPoint p = point_;
                           p.message_pattern = {v};
                           if (!ValidatePoint(p, space_).ok()) {
                             return std::nullopt;
                           }
                           return p;
                         });
  }

  const WorkloadPoint& point_;
  const SearchSpace& space_;
  const ProbeFn& probe_;
  const int64_t max_probes_;
  int64_t probes_ = 0;
  bool truncated_ = false;
};

}  // namespace

ProbeOutcome ClassifyProbe(const AnomalySignature& reference,
                           const std::optional<SymptomKind>& detected,
                           const Measurement& m, double tolerance) {
  if (!detected) return ProbeOutcome::kClear;
  const AnomalySignature seen = AnomalySignature::Of(*detected, m);
  return CompareSeverity(seen, reference, tolerance) < 0
             ? ProbeOutcome::kClear
             : ProbeOutcome::kAnomalous;
}

absl::StatusOr<MfsConstruction> ConstructMfsWithProbe(
    const WorkloadPoint& point, const SearchSpace& space, const ProbeFn& probe,
    int64_t max_probes) {
  if (absl::Status s = ValidatePoint(point, space); !s.ok()) return s;
  return Ablation(point, space, probe, max_probes).Run();
}

absl::StatusOr<MfsConstruction> ConstructMfs(const WorkloadPoint& point,
                                             Tester& tester,
                                             const SearchSpace& space,
                                             const SubsystemSpec& spec,
                                             const DetectionPolicy& policy,
                                             uint64_t seed,
                                             int64_t max_probes) {
  absl::StatusOr<Measurement> first =
      MeasureStable(point, tester, policy, MixSeed(seed, 0));
  if (!first.ok()) return first.status();
  const std::optional<SymptomKind> kind = Detect(*first, spec, policy);
  if (!kind) {
    return absl::FailedPreconditionError(
        "unstable anomaly: the discovery point no longer reproduces");
  }
  const AnomalySignature reference = AnomalySignature::Of(*kind, *first);
  uint64_t next = 1;
  ProbeFn probe = [&](const WorkloadPoint& p) -> absl::StatusOr<ProbeOutcome> {
    absl::StatusOr<Measurement> m =
        MeasureStable(p, tester, policy, MixSeed(seed, next++));
    if (!m.ok()) return m.status();
    return ClassifyProbe(reference, Detect(*m, spec, policy), *m,
                         policy.signature_tolerance);
  };
  absl::StatusOr<MfsConstruction> out =
      ConstructMfsWithProbe(point, space, probe, max_probes - 1);
  if (!out.ok()) return out.status();
  out->mfs.symptom = *kind;
  out->probes += 1;
  return out;
}

}  // namespace rforge
