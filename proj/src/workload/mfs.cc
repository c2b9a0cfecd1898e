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

#include "workload/mfs.h"

#include <algorithm>

namespace rforge {

namespace {

std::vector<int64_t> AllowedFor(const SearchSpace& space, const Mfs& mfs,
                                Feature f) {
  std::vector<int64_t> out;
  for (int64_t v : FeatureGrid(space, f)) {
    bool ok = true;
    for (const FeaturePredicate& p : mfs.predicates) {
      if (p.feature == f && !p.MatchesValue(v)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(v);
  }
  return out;
}

bool Has(const std::vector<int64_t>& v, int64_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

std::optional<WorkloadPoint> FindWitness(const SearchSpace& space,
                                         const Mfs& mfs) {
  std::vector<int64_t> allowed[kFeatureCount];
  for (int i = 0; i < kFeatureCount; ++i) {
    allowed[i] = AllowedFor(space, mfs, static_cast<Feature>(i));
    if (allowed[i].empty()) return std::nullopt;
  }
  auto of = [&](Feature f) -> const std::vector<int64_t>& {
    return allowed[static_cast<int>(f)];
  };

  std::optional<Transport> transport;
  for (const Transport& t : space.transports) {
    if (Has(of(Feature::kQpType), static_cast<int64_t>(t.qp_type)) &&
        Has(of(Feature::kOpcode), static_cast<int64_t>(t.opcode))) {
      transport = t;
      break;
    }
  }
  if (!transport) return std::nullopt;

  WorkloadPoint p;
  p.src_device = static_cast<int>(of(Feature::kSrcDevice).front());
  p.dst_device = static_cast<int>(of(Feature::kDstDevice).front());
  p.loopback = of(Feature::kLoopback).front() != 0;
  p.mr_count = of(Feature::kMrCount).front();
  p.mr_size_bytes = of(Feature::kMrSize).front();
  p.qp_type = transport->qp_type;
  p.opcode = transport->opcode;
  p.qp_count = of(Feature::kQpCount).front();
  p.direction = static_cast<Direction>(of(Feature::kDirection).front());
  p.mtu_bytes = of(Feature::kMtu).front();
  p.wq_depth = of(Feature::kWqDepth).front();

  // WQE batch, SG list length and message sizes are coupled through the
  // request vector length. The SG feature is the longest list in the batch,
  // so the shortest pattern for (w, s) pairs one list of s elements with
  // w - 1 lists of the smallest length.
  const int64_t s_min = space.SgeGrid().front();
  for (int64_t w : of(Feature::kWqeBatch)) {
    for (int64_t s : of(Feature::kSgePerWqe)) {
      const int64_t k = s + (w - 1) * s_min;
      if (k > space.request_vector_len_n) continue;
      for (int64_t lo : of(Feature::kMsgSizeMin)) {
        for (int64_t hi : of(Feature::kMsgSizeMax)) {
          if (lo > hi || (lo != hi && k < 2)) continue;
          p.wqe_batch.assign(static_cast<size_t>(w), s_min);
          p.wqe_batch.front() = s;
          p.message_pattern.assign(static_cast<size_t>(k), lo);
          p.message_pattern.front() = hi;
          if (ValidatePoint(p, space).ok() && mfs.Matches(p)) return p;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

bool FeaturePredicate::MatchesValue(int64_t value) const {
  switch (kind) {
    case Kind::kAny: return true;
    case Kind::kEquals: return value == lo;
    case Kind::kAtLeast: return value >= lo;
    case Kind::kAtMost: return value <= hi;
    case Kind::kInRegion: return value >= lo && value <= hi;
  }
  return false;
}

std::string_view PredicateKindName(FeaturePredicate::Kind k) {
  switch (k) {
    case FeaturePredicate::Kind::kAny: return "any";
    case FeaturePredicate::Kind::kEquals: return "equals";
    case FeaturePredicate::Kind::kAtLeast: return "at_least";
    case FeaturePredicate::Kind::kAtMost: return "at_most";
    case FeaturePredicate::Kind::kInRegion: return "in_region";
  }
  return "?";
}

std::optional<FeaturePredicate::Kind> ParsePredicateKind(std::string_view s) {
  if (s == "any") return FeaturePredicate::Kind::kAny;
  if (s == "equals") return FeaturePredicate::Kind::kEquals;
  if (s == "at_least") return FeaturePredicate::Kind::kAtLeast;
  if (s == "at_most") return FeaturePredicate::Kind::kAtMost;
  if (s == "in_region") return FeaturePredicate::Kind::kInRegion;
  return std::nullopt;
}

bool Mfs::Matches(const WorkloadPoint& point) const {
  for (const FeaturePredicate& p : predicates) {
    if (!p.Matches(point)) return false;
  }
  return true;
}

FeaturePredicate Mfs::PredicateFor(Feature f) const {
  for (const FeaturePredicate& p : predicates) {
    if (p.feature == f && p.kind != FeaturePredicate::Kind::kAny) return p;
  }
  return FeaturePredicate::Any(f);
}

int Mfs::ConstrainedCount() const {
  int n = 0;
  for (const FeaturePredicate& p : predicates) {
    if (p.kind != FeaturePredicate::Kind::kAny) ++n;
  }
  return n;
}

std::optional<int> MatchesMfs(const WorkloadPoint& point,
                              const std::vector<Mfs>& anomalies) {
  std::optional<int> best;
  for (const Mfs& m : anomalies) {
    if ((!best || m.anomaly_id < *best) && m.Matches(point)) {
      best = m.anomaly_id;
    }
  }
  return best;
}

std::vector<SpaceWitness> CheckSpaceAgainstMfs(
    const SearchSpace& restricted, const std::vector<Mfs>& anomalies) {
  std::vector<const Mfs*> ordered;
  for (const Mfs& m : anomalies) ordered.push_back(&m);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Mfs* a, const Mfs* b) {
                     return a->anomaly_id < b->anomaly_id;
                   });
  std::vector<SpaceWitness> out;
  for (const Mfs* m : ordered) {
    if (auto p = FindWitness(restricted, *m)) {
      out.push_back({m->anomaly_id, *std::move(p)});
    }
  }
  return out;
}

std::vector<int64_t> AllowedValues(const SearchSpace& space,
                                   const FeaturePredicate& predicate) {
  std::vector<int64_t> out;
  for (int64_t v : FeatureGrid(space, predicate.feature)) {
    if (predicate.MatchesValue(v)) out.push_back(v);
  }
  return out;
}

}  // namespace rforge
