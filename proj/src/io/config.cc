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

#include "io/config.h"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <sstream>
#include <system_error>

#include "common/strings.h"
#include "io/json_reader.h"

namespace rforge {

namespace fs = std::filesystem;

namespace {

fs::path Resolve(const fs::path& base_dir, const std::string& p) {
  fs::path path(p);
  if (path.is_relative()) path = base_dir / path;
  std::error_code ec;
  fs::path canonical = fs::weakly_canonical(path, ec);
  return ec ? path.lexically_normal() : canonical;
}

// Prefixes a schema error with the file it came from.
absl::Status InFile(const fs::path& path, const absl::Status& s) {
  return absl::Status(s.code(), StrCat(path.string(), ": ", s.message()));
}

}  // namespace

absl::StatusOr<std::string> ReadFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    return absl::NotFoundError(
        StrCat("cannot read ", path.string(), ": ", std::strerror(errno)));
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

absl::StatusOr<Json> ReadJsonFile(const fs::path& path) {
  absl::StatusOr<std::string> text = ReadFile(path);
  if (!text.ok()) return text.status();
  return ParseJson(*text, path.string());
}

absl::StatusOr<CampaignConfig> LoadCampaignConfig(const fs::path& path) {
  CampaignConfig config;
  config.config_path = Resolve(fs::current_path(), path.string());
  absl::StatusOr<Json> j = ReadJsonFile(config.config_path);
  if (!j.ok()) return j.status();
  const fs::path dir = config.config_path.parent_path();
  const std::string where = config.config_path.string();

  ObjectReader r(*j, "config");
  std::string subsystem;
  r.String("subsystem", subsystem, true);
  const Json* rules = r.Find("rules");
  const Json* adapter = r.Find("adapter");
  const Json* space = r.Find("space");
  const Json* sa = r.Find("sa");
  const Json* detection = r.Find("detection");
  const Json* counters = r.Find("counters");
  std::string known;
  r.String("known_anomalies", known);
  std::string output_dir = "out";
  r.String("output_dir", output_dir);
  uint64_t seed = 1;
  r.Uint("seed", seed);
  r.Find("manifest");
  if (absl::Status s = r.Finish(); !s.ok()) {
    return absl::InvalidArgumentError(StrCat(where, ": ", s.message()));
  }
  auto fail = [&](const absl::Status& s) {
    return absl::Status(s.code(), StrCat(where, ": ", s.message()));
  };

  if ((rules != nullptr) == (adapter != nullptr)) {
    return absl::InvalidArgumentError(StrCat(
        where, ": config: set exactly one of \"rules\" (simulator mode) and "
               "\"adapter\" (external tester)"));
  }

  config.subsystem_path = Resolve(dir, subsystem);
  absl::StatusOr<Json> spec_json = ReadJsonFile(config.subsystem_path);
  if (!spec_json.ok()) return spec_json.status();
  absl::StatusOr<SubsystemSpec> spec = SpecFromJson(*spec_json);
  if (!spec.ok()) return InFile(config.subsystem_path, spec.status());
  config.spec = *std::move(spec);

  if (rules) {
    if (!rules->is_string()) {
      return absl::InvalidArgumentError(
          StrCat(where, ": config.rules: expected a path"));
    }
    config.rules_path = Resolve(dir, rules->get<std::string>());
    absl::StatusOr<Json> rules_json = ReadJsonFile(*config.rules_path);
    if (!rules_json.ok()) return rules_json.status();
    absl::StatusOr<std::vector<AnomalyRule>> lib = RulesFromJson(*rules_json);
    if (!lib.ok()) return InFile(*config.rules_path, lib.status());
    config.rules = *std::move(lib);
  } else {
    AdapterConfig a;
    ObjectReader ar(*adapter, "config.adapter");
    ar.StringList("command", a.command, true);
    ar.Number("deadline_s", a.deadline_s);
    ar.Int("duration_s", a.duration_s);
    if (absl::Status s = ar.Finish(); !s.ok()) return fail(s);
    if (a.command.empty()) {
      return absl::InvalidArgumentError(
          StrCat(where, ": config.adapter.command: empty command"));
    }
    if (!(a.deadline_s > 0.0) || a.duration_s < 1) {
      return absl::InvalidArgumentError(StrCat(
          where, ": config.adapter: deadline_s and duration_s must be > 0"));
    }
    config.adapter = std::move(a);
  }

  const SearchSpace base = SpaceForSubsystem(config.spec);
  config.space = base;
  if (space) {
    config.space_overrides = *space;
    absl::StatusOr<SearchSpace> s = SpaceFromJson(
        *space, base, config.spec.burst_size_bytes, "config.space");
    if (!s.ok()) return fail(s.status());
    config.space = *std::move(s);
  }
  if (static_cast<int>(config.space.memory_devices.size()) >
      static_cast<int>(config.spec.memory_devices.size())) {
    return absl::InvalidArgumentError(StrCat(
        where, ": config.space.memory_devices: more devices than the "
               "subsystem has"));
  }

  if (sa) {
    absl::StatusOr<SaConfig> s = SaConfigFromJson(*sa, config.sa, "config.sa");
    if (!s.ok()) return fail(s.status());
    config.sa = *s;
  }
  config.sa.seed = seed;

  if (detection) {
    absl::StatusOr<DetectionPolicy> p =
        PolicyFromJson(*detection, config.detection, "config.detection");
    if (!p.ok()) return fail(p.status());
    config.detection = *p;
  }

  config.counters = CampaignOptions::DefaultCounters();
  if (counters) {
    if (!counters->is_array()) {
      return absl::InvalidArgumentError(
          StrCat(where, ": config.counters: expected an array"));
    }
    config.counters.clear();
    for (size_t i = 0; i < counters->size(); ++i) {
      absl::StatusOr<CounterObjective> c =
          CounterFromJson((*counters)[i], StrCat("config.counters[", i, "]"));
      if (!c.ok()) return fail(c.status());
      config.counters.push_back(*std::move(c));
    }
  }

  if (!known.empty()) {
    config.known_anomalies_path = Resolve(dir, known);
    absl::StatusOr<Json> known_json = ReadJsonFile(*config.known_anomalies_path);
    if (!known_json.ok()) return known_json.status();
    absl::StatusOr<std::vector<AnomalyRecord>> records =
        RecordsFromReportJson(*known_json);
    if (!records.ok()) {
      return InFile(*config.known_anomalies_path, records.status());
    }
    config.known = *std::move(records);
  }

  config.output_dir = Resolve(dir, output_dir);
  return config;
}

Json ResolvedConfigJson(const CampaignConfig& config) {
  Json j;
  j["subsystem"] = config.subsystem_path.string();
  if (config.rules_path) {
    j["rules"] = config.rules_path->string();
  } else if (config.adapter) {
    Json a;
    a["command"] = config.adapter->command;
    a["deadline_s"] = config.adapter->deadline_s;
    a["duration_s"] = config.adapter->duration_s;
    j["adapter"] = a;
  }
  if (!config.space_overrides.empty()) j["space"] = config.space_overrides;
  j["sa"] = SaConfigToJson(config.sa);
  j["detection"] = PolicyToJson(config.detection);
  j["counters"] = Json::array();
  for (const CounterObjective& c : config.counters) {
    j["counters"].push_back(CounterToJson(c));
  }
  if (config.known_anomalies_path) {
    j["known_anomalies"] = config.known_anomalies_path->string();
  }
  j["output_dir"] = config.output_dir.string();
  j["seed"] = config.sa.seed;
  return j;
}

}  // namespace rforge
