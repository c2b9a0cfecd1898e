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

#include "io/json_codec.h"

#include <cmath>
#include <functional>
#include <optional>
#include <set>
#include <utility>

#include "common/strings.h"
#include "io/json_reader.h"

namespace rforge {

namespace {

// Categorical feature values travel as their names, loopback as a boolean,
// everything else as an integer.
Json FeatureValueToJson(Feature f, int64_t value) {
  switch (f) {
    case Feature::kQpType:
      return std::string(QpTypeName(static_cast<QpType>(value)));
    case Feature::kOpcode:
      return std::string(OpcodeName(static_cast<Opcode>(value)));
    case Feature::kDirection:
      return std::string(DirectionName(static_cast<Direction>(value)));
    case Feature::kLoopback:
      return value != 0;
    default:
      return value;
  }
}

absl::StatusOr<int64_t> FeatureValueFromJson(Feature f, const Json& j,
                                             const std::string& path) {
  auto bad = [&](std::string_view expected) {
    return absl::InvalidArgumentError(
        StrCat(path, ": expected ", expected, " for ", FeatureName(f)));
  };
  switch (f) {
    case Feature::kQpType: {
      auto v = j.is_string() ? ParseQpType(j.get<std::string>()) : std::nullopt;
      if (!v) return bad("RC, UC or UD");
      return static_cast<int64_t>(*v);
    }
    case Feature::kOpcode: {
      auto v = j.is_string() ? ParseOpcode(j.get<std::string>()) : std::nullopt;
      if (!v) return bad("SEND_RECV, WRITE or READ");
      return static_cast<int64_t>(*v);
    }
    case Feature::kDirection: {
      auto v =
          j.is_string() ? ParseDirection(j.get<std::string>()) : std::nullopt;
      if (!v) return bad("unidirectional or bidirectional");
      return static_cast<int64_t>(*v);
    }
    case Feature::kLoopback:
      if (!j.is_boolean()) return bad("true or false");
      return j.get<bool>() ? 1 : 0;
    default:
      if (!j.is_number_integer()) return bad("an integer");
      return j.get<int64_t>();
  }
}

Json DeviceToJson(const MemoryDevice& d) {
  Json j;
  j["kind"] = DeviceKindName(d.kind);
  j["locality"] = LocalityName(d.locality);
  return j;
}

absl::StatusOr<MemoryDevice> DeviceFromJson(const Json& j,
                                            std::string_view path) {
  MemoryDevice d;
  ObjectReader r(j, path);
  r.Enum("kind", d.kind, &ParseDeviceKind, true);
  r.Enum("locality", d.locality, &ParseLocality, true);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return d;
}

Json TransportToJson(const Transport& t) {
  Json j;
  j["qp_type"] = QpTypeName(t.qp_type);
  j["opcode"] = OpcodeName(t.opcode);
  return j;
}

absl::StatusOr<Transport> TransportFromJson(const Json& j,
                                            std::string_view path) {
  Transport t;
  ObjectReader r(j, path);
  r.Enum("qp_type", t.qp_type, &ParseQpType, true);
  r.Enum("opcode", t.opcode, &ParseOpcode, true);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return t;
}

Json RegionToJson(const SizeRegion& region) {
  Json j;
  j["lo"] = region.lo;
  j["hi"] = region.hi;
  j["representative"] = region.representative;
  return j;
}

absl::StatusOr<SizeRegion> RegionFromJson(const Json& j,
                                          std::string_view path) {
  SizeRegion region;
  ObjectReader r(j, path);
  r.Int("lo", region.lo, true);
  r.Int("hi", region.hi, true);
  r.Int("representative", region.representative, true);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return region;
}

absl::StatusOr<Direction> DirectionFromJson(const Json& j,
                                            std::string_view path) {
  std::optional<Direction> d =
      j.is_string() ? ParseDirection(j.get<std::string>()) : std::nullopt;
  if (!d) {
    return absl::InvalidArgumentError(
        StrCat(path, ": expected unidirectional or bidirectional"));
  }
  return *d;
}

absl::StatusOr<bool> BoolFromJson(const Json& j, std::string_view path) {
  if (!j.is_boolean()) {
    return absl::InvalidArgumentError(StrCat(path, ": expected true or false"));
  }
  return j.get<bool>();
}

void CounterMapFromJson(ObjectReader& r, std::string_view key,
                        std::map<std::string, double, std::less<>>& out) {
  const Json* v = r.Find(key);
  if (!v) return;
  if (!v->is_object()) {
    r.Fail(r.Path(key), "expected an object of counter values");
    return;
  }
  out.clear();
  for (auto it = v->begin(); it != v->end(); ++it) {
    if (!it.value().is_number()) {
      r.Fail(StrCat(r.Path(key), ".", it.key()), "expected a number");
      return;
    }
    out[it.key()] = it.value().get<double>();
  }
}

}  // namespace

Json PointToJson(const WorkloadPoint& p) {
  Json j;
  j["src_device"] = p.src_device;
  j["dst_device"] = p.dst_device;
  j["loopback"] = p.loopback;
  j["mr_count"] = p.mr_count;
  j["mr_size_bytes"] = p.mr_size_bytes;
  j["qp_type"] = QpTypeName(p.qp_type);
  j["opcode"] = OpcodeName(p.opcode);
  j["qp_count"] = p.qp_count;
  j["direction"] = DirectionName(p.direction);
  j["mtu_bytes"] = p.mtu_bytes;
  j["wq_depth"] = p.wq_depth;
  j["wqe_batch"] = p.wqe_batch;
  j["message_pattern"] = p.message_pattern;
  return j;
}

absl::StatusOr<WorkloadPoint> PointFromJson(const Json& j,
                                            std::string_view path) {
  WorkloadPoint p;
  ObjectReader r(j, path);
  r.Int("src_device", p.src_device, true);
  r.Int("dst_device", p.dst_device, true);
  r.Bool("loopback", p.loopback, true);
  r.Int("mr_count", p.mr_count, true);
  r.Int("mr_size_bytes", p.mr_size_bytes, true);
  r.Enum("qp_type", p.qp_type, &ParseQpType, true);
  r.Enum("opcode", p.opcode, &ParseOpcode, true);
  r.Int("qp_count", p.qp_count, true);
  r.Enum("direction", p.direction, &ParseDirection, true);
  r.Int("mtu_bytes", p.mtu_bytes, true);
  r.Int("wq_depth", p.wq_depth, true);
  r.IntList("wqe_batch", p.wqe_batch, true);
  r.IntList("message_pattern", p.message_pattern, true);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return p;
}

Json SpaceToJson(const SearchSpace& s) {
  Json j;
  j["memory_devices"] = Json::array();
  for (const MemoryDevice& d : s.memory_devices) {
    j["memory_devices"].push_back(DeviceToJson(d));
  }
  j["mr_count_max"] = s.mr_count_max;
  j["mr_size_max_bytes"] = s.mr_size_max_bytes;
  j["qp_count_max"] = s.qp_count_max;
  j["transports"] = Json::array();
  for (const Transport& t : s.transports) {
    j["transports"].push_back(TransportToJson(t));
  }
  j["mtu_choices"] = s.mtu_choices;
  j["wq_depth_choices"] = s.wq_depth_choices;
  j["request_vector_len_n"] = s.request_vector_len_n;
  j["size_regions"] = Json::array();
  for (const SizeRegion& region : s.size_regions) {
    j["size_regions"].push_back(RegionToJson(region));
  }
  j["directions"] = Json::array();
  for (Direction d : s.directions) j["directions"].push_back(DirectionName(d));
  j["loopback_choices"] = Json::array();
  for (bool b : s.loopback_choices) j["loopback_choices"].push_back(b);
  j["wqe_batch_choices"] = s.wqe_batch_choices;
  j["sge_choices"] = s.sge_choices;
  return j;
}

absl::StatusOr<SearchSpace> SpaceFromJson(const Json& j,
                                          const SearchSpace& base,
                                          int64_t burst_size_bytes,
                                          std::string_view path) {
  SearchSpace s = base;
  ObjectReader r(j, path);
  r.List<MemoryDevice>("memory_devices", s.memory_devices, DeviceFromJson);
  r.Int("mr_count_max", s.mr_count_max);
  r.Int("mr_size_max_bytes", s.mr_size_max_bytes);
  r.Int("qp_count_max", s.qp_count_max);
  r.List<Transport>("transports", s.transports, TransportFromJson);
  r.IntList("mtu_choices", s.mtu_choices);
  r.IntList("wq_depth_choices", s.wq_depth_choices);
  r.Int("request_vector_len_n", s.request_vector_len_n);
  const bool regions_given = r.Find("size_regions") != nullptr;
  r.List<SizeRegion>("size_regions", s.size_regions, RegionFromJson);
  r.List<Direction>("directions", s.directions, DirectionFromJson);
  std::vector<bool> loopback;
  if (r.Find("loopback_choices")) {
    r.List<bool>("loopback_choices", loopback, BoolFromJson);
    s.loopback_choices = loopback;
  }
  r.IntList("wqe_batch_choices", s.wqe_batch_choices);
  r.IntList("sge_choices", s.sge_choices);
  if (absl::Status st = r.Finish(); !st.ok()) return st;
  if (!regions_given && (s.mtu_choices != base.mtu_choices ||
                         s.mr_size_max_bytes != base.mr_size_max_bytes)) {
    s.size_regions = DefaultSizeRegions(s.mtu_choices, burst_size_bytes,
                                        s.mr_size_max_bytes);
  }
  if (absl::Status st = s.Validate(); !st.ok()) {
    return absl::InvalidArgumentError(StrCat(path, ": ", st.message()));
  }
  return s;
}

Json SpecToJson(const SubsystemSpec& spec) {
  Json j;
  j["name"] = spec.name;
  j["line_rate_bps"] = spec.line_rate_bps;
  j["max_pps"] = spec.max_pps;
  j["pcie_bw_bps"] = spec.pcie_bw_bps;
  j["pcie_wqe_fetch_cost_bytes"] = spec.pcie_wqe_fetch_cost_bytes;
  j["qp_cache_capacity"] = spec.qp_cache_capacity;
  j["mr_cache_capacity"] = spec.mr_cache_capacity;
  j["recv_wqe_cache_capacity"] = spec.recv_wqe_cache_capacity;
  j["num_pus"] = spec.num_pus;
  j["pipeline_stages"] = spec.pipeline_stages;
  j["burst_size_bytes"] = spec.burst_size_bytes;
  j["loopback_pcie_multiplier"] = spec.loopback_pcie_multiplier;
  j["cross_socket_latency_penalty"] = spec.cross_socket_latency_penalty;
  j["noise_stddev_fraction"] = spec.noise_stddev_fraction;
  j["memory_devices"] = Json::array();
  for (const MemoryDevice& d : spec.memory_devices) {
    j["memory_devices"].push_back(DeviceToJson(d));
  }
  return j;
}

absl::StatusOr<SubsystemSpec> SpecFromJson(const Json& j,
                                           std::string_view path) {
  SubsystemSpec spec;
  ObjectReader r(j, path);
  r.String("name", spec.name);
  r.Number("line_rate_bps", spec.line_rate_bps);
  r.Number("max_pps", spec.max_pps);
  r.Number("pcie_bw_bps", spec.pcie_bw_bps);
  r.Number("pcie_wqe_fetch_cost_bytes", spec.pcie_wqe_fetch_cost_bytes);
  r.Int("qp_cache_capacity", spec.qp_cache_capacity);
  r.Int("mr_cache_capacity", spec.mr_cache_capacity);
  r.Int("recv_wqe_cache_capacity", spec.recv_wqe_cache_capacity);
  r.Int("num_pus", spec.num_pus);
  r.Int("pipeline_stages", spec.pipeline_stages);
  r.Int("burst_size_bytes", spec.burst_size_bytes);
  r.Number("loopback_pcie_multiplier", spec.loopback_pcie_multiplier);
  r.Number("cross_socket_latency_penalty", spec.cross_socket_latency_penalty);
  r.Number("noise_stddev_fraction", spec.noise_stddev_fraction);
  r.List<MemoryDevice>("memory_devices", spec.memory_devices, DeviceFromJson);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (absl::Status s = spec.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(StrCat(path, ": ", s.message()));
  }
  return spec;
}

Json PredicateToJson(const FeaturePredicate& p) {
  Json j;
  j["feature"] = FeatureName(p.feature);
  j["kind"] = PredicateKindName(p.kind);
  switch (p.kind) {
    case FeaturePredicate::Kind::kAny:
      break;
    case FeaturePredicate::Kind::kEquals:
    case FeaturePredicate::Kind::kAtLeast:
      j["value"] = FeatureValueToJson(p.feature, p.lo);
      break;
    case FeaturePredicate::Kind::kAtMost:
      j["value"] = FeatureValueToJson(p.feature, p.hi);
      break;
    case FeaturePredicate::Kind::kInRegion:
      j["lo"] = FeatureValueToJson(p.feature, p.lo);
      j["hi"] = FeatureValueToJson(p.feature, p.hi);
      break;
  }
  return j;
}

absl::StatusOr<FeaturePredicate> PredicateFromJson(const Json& j,
                                                   std::string_view path) {
  ObjectReader r(j, path);
  std::string feature_name;
  r.String("feature", feature_name, true);
  FeaturePredicate::Kind kind = FeaturePredicate::Kind::kAny;
  r.Enum("kind", kind, &ParsePredicateKind, true);
  if (!r.ok()) return r.status();
  std::optional<Feature> feature = ParseFeature(feature_name);
  if (!feature) {
    return absl::InvalidArgumentError(
        StrCat(r.Path("feature"), ": unknown feature \"", feature_name, "\""));
  }
  auto value = [&](std::string_view key) -> absl::StatusOr<int64_t> {
    const Json* v = r.Find(key, true);
    if (!v) return r.status();
    return FeatureValueFromJson(*feature, *v, r.Path(key));
  };
  FeaturePredicate p = FeaturePredicate::Any(*feature);
  switch (kind) {
    case FeaturePredicate::Kind::kAny:
      break;
    case FeaturePredicate::Kind::kEquals:
    case FeaturePredicate::Kind::kAtLeast:
    case FeaturePredicate::Kind::kAtMost: {
      absl::StatusOr<int64_t> v = value("value");
      if (!v.ok()) return v.status();
      p = kind == FeaturePredicate::Kind::kEquals
              ? FeaturePredicate::Equals(*feature, *v)
          : kind == FeaturePredicate::Kind::kAtLeast
              ? FeaturePredicate::AtLeast(*feature, *v)
              : FeaturePredicate::AtMost(*feature, *v);
      break;
    }
    case FeaturePredicate::Kind::kInRegion: {
      absl::StatusOr<int64_t> lo = value("lo");
      if (!lo.ok()) return lo.status();
      absl::StatusOr<int64_t> hi = value("hi");
      if (!hi.ok()) return hi.status();
      if (*lo > *hi) {
        return absl::InvalidArgumentError(StrCat(path, ": lo > hi"));
      }
      p = FeaturePredicate::InRegion(*feature, *lo, *hi);
      break;
    }
  }
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return p;
}

Json RuleToJson(const AnomalyRule& rule) {
  Json j;
  j["id"] = rule.id;
  if (!rule.comment.empty()) j["comment"] = rule.comment;
  j["region"] = Json::array();
  for (const FeaturePredicate& p : rule.region) {
    j["region"].push_back(PredicateToJson(p));
  }
  Json symptom;
  symptom["kind"] = RuleSymptomName(rule.symptom);
  symptom[rule.symptom == AnomalyRule::Symptom::kPauseStorm
              ? "pause_ratio"
              : "fraction_of_bound"] = rule.magnitude;
  j["symptom"] = symptom;
  return j;
}

absl::StatusOr<AnomalyRule> RuleFromJson(const Json& j, std::string_view path) {
  AnomalyRule rule;
  ObjectReader r(j, path);
  r.Int("id", rule.id, true);
  r.String("comment", rule.comment);
  r.List<FeaturePredicate>("region", rule.region, PredicateFromJson, true);
  const Json* symptom = r.Find("symptom", true);
  if (absl::Status s = r.Finish(); !s.ok()) return s;

  ObjectReader sr(*symptom, r.Path("symptom"));
  sr.Enum("kind", rule.symptom, &ParseRuleSymptom, true);
  if (!sr.ok()) return sr.status();
  sr.Number(rule.symptom == AnomalyRule::Symptom::kPauseStorm
                ? "pause_ratio"
                : "fraction_of_bound",
            rule.magnitude, true);
  if (absl::Status s = sr.Finish(); !s.ok()) return s;
  if (absl::Status s = rule.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(StrCat(path, ": ", s.message()));
  }
  return rule;
}

Json RulesToJson(const std::vector<AnomalyRule>& rules) {
  Json j;
  j["rules"] = Json::array();
  for (const AnomalyRule& rule : rules) j["rules"].push_back(RuleToJson(rule));
  return j;
}

absl::StatusOr<std::vector<AnomalyRule>> RulesFromJson(const Json& j,
                                                       std::string_view path) {
  std::vector<AnomalyRule> rules;
  ObjectReader r(j, path);
  r.List<AnomalyRule>("rules", rules, RuleFromJson, true);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  std::set<int> ids;
  for (const AnomalyRule& rule : rules) {
    if (!ids.insert(rule.id).second) {
      return absl::InvalidArgumentError(
          StrCat(path, ": duplicate rule id ", rule.id));
    }
  }
  return rules;
}

Json MfsToJson(const Mfs& mfs) {
  Json j;
  j["anomaly_id"] = mfs.anomaly_id;
  j["symptom"] = SymptomKindName(mfs.symptom);
  j["predicates"] = Json::array();
  for (const FeaturePredicate& p : mfs.predicates) {
    j["predicates"].push_back(PredicateToJson(p));
  }
  return j;
}

absl::StatusOr<Mfs> MfsFromJson(const Json& j, std::string_view path) {
  Mfs mfs;
  ObjectReader r(j, path);
  r.Int("anomaly_id", mfs.anomaly_id, true);
  r.Enum("symptom", mfs.symptom, &ParseSymptomKind, true);
  r.List<FeaturePredicate>("predicates", mfs.predicates, PredicateFromJson,
                           true);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return mfs;
}

Json MeasurementToJson(const Measurement& m) {
  Json j;
  j["achieved_bps"] = m.achieved_bps;
  j["achieved_pps"] = m.achieved_pps;
  j["pause_duration_ratio"] = m.pause_duration_ratio;
  j["perf_counters"] = Json::object();
  for (const auto& [id, v] : m.perf_counters) j["perf_counters"][id] = v;
  j["diag_counters"] = Json::object();
  for (const auto& [id, v] : m.diag_counters) j["diag_counters"][id] = v;
  return j;
}

absl::StatusOr<Measurement> MeasurementFromJson(const Json& j,
                                                std::string_view path) {
  Measurement m;
  ObjectReader r(j, path);
  r.Number("achieved_bps", m.achieved_bps, true);
  r.Number("achieved_pps", m.achieved_pps, true);
  r.Number("pause_duration_ratio", m.pause_duration_ratio, true);
  CounterMapFromJson(r, "perf_counters", m.perf_counters);
  CounterMapFromJson(r, "diag_counters", m.diag_counters);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  return m;
}

Json RecordToJson(const AnomalyRecord& rec) {
  Json j;
  j["anomaly_id"] = rec.mfs.anomaly_id;
  j["symptom"] = SymptomKindName(rec.symptom);
  j["found_by"] = rec.found_by;
  j["discovery_eval_index"] = rec.discovery_eval_index;
  j["discovery_budget_index"] = rec.discovery_budget_index;
  j["mfs_evaluations"] = rec.mfs_evaluations;
  j["unstable"] = rec.unstable;
  j["mfs_truncated"] = rec.mfs_truncated;
  j["mfs"] = MfsToJson(rec.mfs);
  j["discovery_point"] = PointToJson(rec.discovery_point);
  j["measurement"] = MeasurementToJson(rec.measurement);
  return j;
}

absl::StatusOr<AnomalyRecord> RecordFromJson(const Json& j,
                                             std::string_view path) {
  AnomalyRecord rec;
  ObjectReader r(j, path);
  int anomaly_id = 0;
  r.Int("anomaly_id", anomaly_id);
  r.Enum("symptom", rec.symptom, &ParseSymptomKind, true);
  r.String("found_by", rec.found_by);
  r.Int("discovery_eval_index", rec.discovery_eval_index);
  r.Int("discovery_budget_index", rec.discovery_budget_index);
  r.Int("mfs_evaluations", rec.mfs_evaluations);
  r.Bool("unstable", rec.unstable);
  r.Bool("mfs_truncated", rec.mfs_truncated);
  if (const Json* v = r.Find("mfs", true)) {
    absl::StatusOr<Mfs> mfs = MfsFromJson(*v, r.Path("mfs"));
    if (mfs.ok()) {
      rec.mfs = *std::move(mfs);
    } else {
      r.Merge(mfs.status());
    }
  }
  if (const Json* v = r.Find("discovery_point")) {
    absl::StatusOr<WorkloadPoint> p =
        PointFromJson(*v, r.Path("discovery_point"));
    if (p.ok()) {
      rec.discovery_point = *std::move(p);
    } else {
      r.Merge(p.status());
    }
  }
  if (const Json* v = r.Find("measurement")) {
    absl::StatusOr<Measurement> m =
        MeasurementFromJson(*v, r.Path("measurement"));
    if (m.ok()) {
      rec.measurement = *std::move(m);
    } else {
      r.Merge(m.status());
    }
  }
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (j.contains("anomaly_id") && anomaly_id != rec.mfs.anomaly_id) {
    return absl::InvalidArgumentError(
        StrCat(path, ": anomaly_id disagrees with mfs.anomaly_id"));
  }
  return rec;
}

Json SaConfigToJson(const SaConfig& sa) {
  Json j;
  j["t0"] = sa.t0;
  j["t_min"] = sa.t_min;
  j["alpha"] = sa.alpha;
  j["n_per_temperature"] = sa.n_per_temperature;
  j["eval_budget"] = sa.eval_budget;
  j["mfs_allowance"] = sa.mfs_allowance;
  return j;
}

absl::StatusOr<SaConfig> SaConfigFromJson(const Json& j, const SaConfig& base,
                                          std::string_view path) {
  SaConfig sa = base;
  ObjectReader r(j, path);
  r.Number("t0", sa.t0);
  r.Number("t_min", sa.t_min);
  r.Number("alpha", sa.alpha);
  r.Int("n_per_temperature", sa.n_per_temperature);
  r.Int("eval_budget", sa.eval_budget);
  r.Int("mfs_allowance", sa.mfs_allowance);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (absl::Status s = sa.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(StrCat(path, ": ", s.message()));
  }
  return sa;
}

Json PolicyToJson(const DetectionPolicy& p) {
  Json j;
  j["pause_ratio_threshold"] = p.pause_ratio_threshold;
  j["throughput_shortfall_fraction"] = p.throughput_shortfall_fraction;
  j["samples_per_iteration"] = p.samples_per_iteration;
  j["signature_tolerance"] = p.signature_tolerance;
  return j;
}

absl::StatusOr<DetectionPolicy> PolicyFromJson(const Json& j,
                                               const DetectionPolicy& base,
                                               std::string_view path) {
  DetectionPolicy p = base;
  ObjectReader r(j, path);
  r.Number("pause_ratio_threshold", p.pause_ratio_threshold);
  r.Number("throughput_shortfall_fraction", p.throughput_shortfall_fraction);
  r.Int("samples_per_iteration", p.samples_per_iteration);
  r.Number("signature_tolerance", p.signature_tolerance);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (absl::Status s = p.Validate(); !s.ok()) {
    return absl::InvalidArgumentError(StrCat(path, ": ", s.message()));
  }
  return p;
}

Json CounterToJson(const CounterObjective& c) {
  Json j;
  j["id"] = c.counter_id;
  j["kind"] = CounterKindName(c.kind);
  return j;
}

absl::StatusOr<CounterObjective> CounterFromJson(const Json& j,
                                                 std::string_view path) {
  CounterObjective c;
  ObjectReader r(j, path);
  r.String("id", c.counter_id, true);
  r.Enum("kind", c.kind, &ParseCounterKind, true);
  if (absl::Status s = r.Finish(); !s.ok()) return s;
  if (c.counter_id.empty()) {
    return absl::InvalidArgumentError(StrCat(path, ".id: empty counter id"));
  }
  return c;
}

Json CampaignReportToJson(const CampaignReport& report) {
  Json j;
  j["seed"] = report.seed;
  j["eval_budget"] = report.eval_budget;
  j["budget_evaluations"] = report.budget_evaluations;
  j["mfs_evaluations"] = report.mfs_evaluations;
  j["total_evaluations"] = report.total_evaluations;
  j["skipped_points"] = report.skipped_points;
  j["zero_denominator_steps"] = report.zero_denominator_steps;
  j["termination"] = TerminationName(report.termination);
  j["status"] = report.status.ok() ? std::string("ok")
                                   : std::string(report.status.message());
  j["ranking"] = Json::array();
  for (const RankedCounter& rc : report.ranking) {
    Json c = CounterToJson(rc.objective);
    c["cv"] = rc.cv ? Json(*rc.cv) : Json(nullptr);
    j["ranking"].push_back(c);
  }
  j["anomalies"] = Json::array();
  for (const AnomalyRecord& rec : report.anomalies) {
    j["anomalies"].push_back(RecordToJson(rec));
  }
  return j;
}

absl::StatusOr<std::vector<AnomalyRecord>> RecordsFromReportJson(
    const Json& j, std::string_view path) {
  const Json* list = &j;
  if (j.is_object()) {
    auto it = j.find("anomalies");
    if (it == j.end()) {
      return absl::InvalidArgumentError(
          StrCat(path, ": missing \"anomalies\" array"));
    }
    list = &*it;
  }
  if (!list->is_array()) {
    return absl::InvalidArgumentError(
        StrCat(path, ".anomalies: expected an array"));
  }
  std::vector<AnomalyRecord> out;
  for (size_t i = 0; i < list->size(); ++i) {
    absl::StatusOr<AnomalyRecord> rec =
        RecordFromJson((*list)[i], StrCat(path, ".anomalies[", i, "]"));
    if (!rec.ok()) return rec.status();
    out.push_back(*std::move(rec));
  }
  return out;
}

absl::StatusOr<Json> ParseJson(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    const size_t offset =
        std::min<size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    size_t line = 1;
    size_t column = 1;
    for (size_t i = 0; i < offset; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    std::string what = e.what();
    // Drop nlohmann's "[json.exception.parse_error.101] parse error at ..."
    // prefix and its own position; keep the explanation.
    if (size_t pos = what.find(": "); pos != std::string::npos) {
      what = what.substr(pos + 2);
    }
    return absl::InvalidArgumentError(
        StrCat(source, ":", line, ":", column, ": JSON syntax error: ", what));
  }
}

}  // namespace rforge
