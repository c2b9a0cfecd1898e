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

// Implementation of the C interface declared in include/rforge/rforge.h.

#include "rforge/rforge.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "common/log.h"
#include "common/strings.h"
#include "io/adapter.h"
#include "io/artifacts.h"
#include "io/config.h"
#include "io/json_codec.h"
#include "monitor/detect.h"
#include "monitor/tester.h"
#include "search/search.h"
#include "sim/reference.h"
#include "sim/simulator.h"
#include "workload/mfs.h"

struct rforge_campaign {
  rforge::CampaignConfig config;
  std::optional<rforge::CampaignReport> report;
};

namespace {

thread_local std::string last_error;

rforge_status CodeOf(const absl::Status& s) {
  switch (s.code()) {
    case absl::StatusCode::kOk: return RFORGE_OK;
    case absl::StatusCode::kInvalidArgument:
    case absl::StatusCode::kOutOfRange: return RFORGE_INVALID_ARGUMENT;
    case absl::StatusCode::kNotFound: return RFORGE_NOT_FOUND;
    case absl::StatusCode::kFailedPrecondition:
      return RFORGE_FAILED_PRECONDITION;
    case absl::StatusCode::kDeadlineExceeded: return RFORGE_DEADLINE_EXCEEDED;
    case absl::StatusCode::kAborted:
    case absl::StatusCode::kUnavailable:
    case absl::StatusCode::kDataLoss: return RFORGE_ABORTED;
    case absl::StatusCode::kPermissionDenied: return RFORGE_IO_ERROR;
    default: return RFORGE_INTERNAL;
  }
}

rforge_status Fail(rforge_status code, std::string message) {
  last_error = std::move(message);
  return code;
}

rforge_status Fail(const absl::Status& s) {
  return Fail(CodeOf(s), std::string(s.message()));
}

rforge_status Ok() {
  last_error.clear();
  return RFORGE_OK;
}

char* CopyString(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out != nullptr) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

rforge_status NullArgument(const char* name) {
  return Fail(RFORGE_INVALID_ARGUMENT, rforge::StrCat(name, " is NULL"));
}

// Runs `body`, turning escaped exceptions into RFORGE_INTERNAL.
template <typename F>
rforge_status Guard(F&& body) {
  try {
    return body();
  } catch (const std::exception& e) {
    return Fail(RFORGE_INTERNAL, rforge::StrCat("internal error: ", e.what()));
  } catch (...) {
    return Fail(RFORGE_INTERNAL, "internal error");
  }
}

absl::StatusOr<rforge::Json> ParseText(const char* text, const char* source) {
  return rforge::ParseJson(std::string_view(text), source);
}

}  // namespace

extern "C" {

const char* rforge_last_error(void) { return last_error.c_str(); }

const char* rforge_version(void) { return "1.0.0"; }

void rforge_string_free(char* s) { std::free(s); }

rforge_status rforge_campaign_load(const char* config_path,
                                   rforge_campaign** out) {
  if (config_path == nullptr) return NullArgument("config_path");
  if (out == nullptr) return NullArgument("out");
  *out = nullptr;
  return Guard([&] {
    absl::StatusOr<rforge::CampaignConfig> config =
        rforge::LoadCampaignConfig(config_path);
    if (!config.ok()) return Fail(config.status());
    *out = new rforge_campaign{*std::move(config), std::nullopt};
    return Ok();
  });
}

rforge_status rforge_campaign_set_seed(rforge_campaign* c, uint64_t seed) {
  if (c == nullptr) return NullArgument("campaign");
  c->config.sa.seed = seed;
  return Ok();
}

rforge_status rforge_campaign_set_budget(rforge_campaign* c,
                                         int64_t eval_budget) {
  if (c == nullptr) return NullArgument("campaign");
  rforge::SaConfig sa = c->config.sa;
  sa.eval_budget = eval_budget;
  if (absl::Status s = sa.Validate(); !s.ok()) return Fail(s);
  c->config.sa = sa;
  return Ok();
}

rforge_status rforge_campaign_set_output_dir(rforge_campaign* c,
                                             const char* dir) {
  if (c == nullptr) return NullArgument("campaign");
  if (dir == nullptr || *dir == '\0') return NullArgument("dir");
  return Guard([&] {
    c->config.output_dir = std::filesystem::absolute(dir).lexically_normal();
    return Ok();
  });
}

rforge_status rforge_campaign_run(rforge_campaign* c, int32_t* anomaly_count) {
  if (c == nullptr) return NullArgument("campaign");
  return Guard([&] {
    const rforge::CampaignConfig& config = c->config;
    std::unique_ptr<rforge::Tester> tester;
    if (config.adapter) {
      auto adapter = rforge::AdapterTester::Start(*config.adapter);
      if (!adapter.ok()) return Fail(adapter.status());
      tester = *std::move(adapter);
    } else {
      tester = std::make_unique<rforge::SimulatorTester>(config.spec,
                                                         config.rules);
    }
    rforge::CampaignOptions options;
    options.sa = config.sa;
    options.detection = config.detection;
    options.counters = config.counters;
    options.known = config.known;
    c->report =
        rforge::RunCampaign(options, config.space, config.spec, *tester);
    tester.reset();
    if (anomaly_count != nullptr) {
      *anomaly_count = static_cast<int32_t>(c->report->anomalies.size());
    }
    if (absl::Status s = rforge::WriteCampaignArtifacts(config, *c->report);
        !s.ok()) {
      return Fail(RFORGE_IO_ERROR, std::string(s.message()));
    }
    if (!c->report->status.ok()) {
      return Fail(CodeOf(c->report->status),
                  rforge::StrCat("campaign aborted (partial results written "
                                 "to ",
                                 config.output_dir.string(),
                                 "): ", c->report->status.message()));
    }
    return Ok();
  });
}

rforge_status rforge_campaign_report_json(const rforge_campaign* c,
                                          char** out_json) {
  if (c == nullptr) return NullArgument("campaign");
  if (out_json == nullptr) return NullArgument("out_json");
  if (!c->report) {
    return Fail(RFORGE_FAILED_PRECONDITION, "the campaign has not run yet");
  }
  return Guard([&] {
    *out_json =
        CopyString(rforge::DumpJson(rforge::CampaignReportToJson(*c->report)));
    return Ok();
  });
}

void rforge_campaign_free(rforge_campaign* c) { delete c; }

rforge_status rforge_simulate(const char* point_json, const char* spec_json,
                              const char* rules_json, uint64_t seed,
                              char** out_json) {
  if (point_json == nullptr) return NullArgument("point_json");
  if (spec_json == nullptr) return NullArgument("spec_json");
  if (out_json == nullptr) return NullArgument("out_json");
  return Guard([&] {
    auto point_j = ParseText(point_json, "point");
    if (!point_j.ok()) return Fail(point_j.status());
    auto point = rforge::PointFromJson(*point_j);
    if (!point.ok()) return Fail(point.status());
    auto spec_j = ParseText(spec_json, "subsystem");
    if (!spec_j.ok()) return Fail(spec_j.status());
    auto spec = rforge::SpecFromJson(*spec_j);
    if (!spec.ok()) return Fail(spec.status());
    std::vector<rforge::AnomalyRule> rules;
    if (rules_json != nullptr) {
      auto rules_j = ParseText(rules_json, "rules");
      if (!rules_j.ok()) return Fail(rules_j.status());
      auto lib = rforge::RulesFromJson(*rules_j);
      if (!lib.ok()) return Fail(lib.status());
      rules = *std::move(lib);
    }
    auto m = rforge::Simulate(*point, *spec, rules, seed);
    if (!m.ok()) return Fail(m.status());
    *out_json = CopyString(rforge::DumpJson(rforge::MeasurementToJson(*m)));
    return Ok();
  });
}

rforge_status rforge_replay(const char* point_path, const char* spec_path,
                            const char* rules_path, char** out_json,
                            rforge_verdict* verdict) {
  if (point_path == nullptr) return NullArgument("point_path");
  if (spec_path == nullptr) return NullArgument("spec_path");
  if (out_json == nullptr) return NullArgument("out_json");
  return Guard([&] {
    auto point_j = rforge::ReadJsonFile(point_path);
    if (!point_j.ok()) return Fail(point_j.status());
    auto point = rforge::PointFromJson(*point_j);
    if (!point.ok()) {
      return Fail(RFORGE_INVALID_ARGUMENT,
                  rforge::StrCat(point_path, ": ", point.status().message()));
    }
    auto spec_j = rforge::ReadJsonFile(spec_path);
    if (!spec_j.ok()) return Fail(spec_j.status());
    auto spec = rforge::SpecFromJson(*spec_j);
    if (!spec.ok()) {
      return Fail(RFORGE_INVALID_ARGUMENT,
                  rforge::StrCat(spec_path, ": ", spec.status().message()));
    }
    std::vector<rforge::AnomalyRule> rules;
    if (rules_path != nullptr) {
      auto rules_j = rforge::ReadJsonFile(rules_path);
      if (!rules_j.ok()) return Fail(rules_j.status());
      auto lib = rforge::RulesFromJson(*rules_j);
      if (!lib.ok()) {
        return Fail(RFORGE_INVALID_ARGUMENT,
                    rforge::StrCat(rules_path, ": ", lib.status().message()));
      }
      rules = *std::move(lib);
    }
    if (absl::Status s = rforge::ValidateForSubsystem(*point, *spec);
        !s.ok()) {
      return Fail(RFORGE_INVALID_ARGUMENT,
                  rforge::StrCat(point_path, ": invalid point: ", s.message()));
    }
    rforge::SimulatorTester tester(*spec, rules);
    const rforge::DetectionPolicy policy;
    auto m = rforge::MeasureStable(*point, tester, policy, /*seed=*/1);
    if (!m.ok()) return Fail(m.status());
    const std::optional<rforge::SymptomKind> symptom =
        rforge::Detect(*m, *spec, policy);
    rforge::Json out;
    out["measurement"] = rforge::MeasurementToJson(*m);
    out["verdict"] =
        symptom ? std::string(rforge::SymptomKindName(*symptom)) : "none";
    *out_json = CopyString(rforge::DumpJson(out));
    if (verdict != nullptr) {
      *verdict = !symptom ? RFORGE_VERDICT_NONE
                 : *symptom == rforge::SymptomKind::kPauseAnomaly
                     ? RFORGE_VERDICT_PAUSE_ANOMALY
                     : RFORGE_VERDICT_THROUGHPUT_ANOMALY;
    }
    return Ok();
  });
}

rforge_status rforge_check_space(const char* space_path,
                                 const char* anomalies_path, char** out_json,
                                 int32_t* witness_count) {
  if (space_path == nullptr) return NullArgument("space_path");
  if (anomalies_path == nullptr) return NullArgument("anomalies_path");
  if (out_json == nullptr) return NullArgument("out_json");
  return Guard([&] {
    auto space_j = rforge::ReadJsonFile(space_path);
    if (!space_j.ok()) return Fail(space_j.status());
    const rforge::SubsystemSpec reference = rforge::ReferenceSubsystem();
    auto space = rforge::SpaceFromJson(*space_j,
                                       rforge::SpaceForSubsystem(reference),
                                       reference.burst_size_bytes);
    if (!space.ok()) {
      return Fail(RFORGE_INVALID_ARGUMENT,
                  rforge::StrCat(space_path, ": ", space.status().message()));
    }
    auto anomalies_j = rforge::ReadJsonFile(anomalies_path);
    if (!anomalies_j.ok()) return Fail(anomalies_j.status());
    auto records = rforge::RecordsFromReportJson(*anomalies_j);
    if (!records.ok()) {
      return Fail(RFORGE_INVALID_ARGUMENT,
                  rforge::StrCat(anomalies_path, ": ",
                                 records.status().message()));
    }
    std::vector<rforge::Mfs> mfs;
    for (const rforge::AnomalyRecord& r : *records) mfs.push_back(r.mfs);
    const std::vector<rforge::SpaceWitness> witnesses =
        rforge::CheckSpaceAgainstMfs(*space, mfs);
    rforge::Json out = rforge::Json::array();
    for (const rforge::SpaceWitness& w : witnesses) {
      rforge::Json item;
      item["anomaly_id"] = w.anomaly_id;
      item["point"] = rforge::PointToJson(w.point);
      out.push_back(item);
    }
    *out_json = CopyString(rforge::DumpJson(out));
    if (witness_count != nullptr) {
      *witness_count = static_cast<int32_t>(witnesses.size());
    }
    return Ok();
  });
}

rforge_status rforge_gen_defaults(const char* out_dir) {
  if (out_dir == nullptr || *out_dir == '\0') return NullArgument("out_dir");
  return Guard([&] {
    if (absl::Status s = rforge::WriteDefaultFiles(out_dir); !s.ok()) {
      return Fail(RFORGE_IO_ERROR, std::string(s.message()));
    }
    return Ok();
  });
}

}  // extern "C"
