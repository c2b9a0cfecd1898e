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

#include "io/artifacts.h"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <map>
#include <system_error>

#include <fmt/format.h>

#include "common/strings.h"
#include "sim/reference.h"

namespace rforge {

namespace fs = std::filesystem;

namespace {

std::string FormatBytes(int64_t v) {
  if (v >= (1 << 20) && v % (1 << 20) == 0) return fmt::format("{}MB", v >> 20);
  if (v >= 1024 && v % 1024 == 0) return fmt::format("{}KB", v >> 10);
  return fmt::format("{}B", v);
}

std::string FormatCount(int64_t v) {
  if (v >= 1024 && v % 1024 == 0) return fmt::format("{}K", v >> 10);
  return fmt::format("{}", v);
}

using Formatter = std::string (*)(int64_t);

std::string FormatPlain(int64_t v) { return fmt::format("{}", v); }

// "≥64", "≤1KB", "1K-4K", or "-" for an unconstrained feature.
std::string NumericCell(const FeaturePredicate& p, Formatter format) {
  switch (p.kind) {
    case FeaturePredicate::Kind::kAny: return "-";
    case FeaturePredicate::Kind::kEquals: return format(p.lo);
    case FeaturePredicate::Kind::kAtLeast: return "≥" + format(p.lo);
    case FeaturePredicate::Kind::kAtMost: return "≤" + format(p.hi);
    case FeaturePredicate::Kind::kInRegion:
      return format(p.lo) + "-" + format(p.hi);
  }
  return "-";
}

// Names of the categorical values a predicate admits, joined by '/'.
std::string CategoricalCell(const FeaturePredicate& p, int64_t last,
                            std::string_view (*name)(int64_t)) {
  if (p.kind == FeaturePredicate::Kind::kAny) return "";
  std::string out;
  for (int64_t v = 0; v <= last; ++v) {
    if (!p.MatchesValue(v)) continue;
    if (!out.empty()) out += "/";
    out += name(v);
  }
  return out;
}

std::string_view QpTypeLabel(int64_t v) {
  return QpTypeName(static_cast<QpType>(v));
}
std::string_view OpcodeLabel(int64_t v) {
  // Anomaly tables write the two-sided opcode as plain SEND.
  const Opcode op = static_cast<Opcode>(v);
  return op == Opcode::kSendRecv ? "SEND" : OpcodeName(op);
}
std::string_view DirectionLabel(int64_t v) {
  return static_cast<Direction>(v) == Direction::kBidirectional ? "Bi-"
                                                                : "Uni-";
}

std::string MessagePatternCell(const Mfs& mfs) {
  const FeaturePredicate lo = mfs.PredicateFor(Feature::kMsgSizeMin);
  const FeaturePredicate hi = mfs.PredicateFor(Feature::kMsgSizeMax);
  using Kind = FeaturePredicate::Kind;
  std::vector<std::string> parts;
  if (lo.kind == Kind::kAtMost && hi.kind == Kind::kAtLeast) {
    parts.push_back(fmt::format("mix of ≤{} & ≥{}", FormatBytes(lo.hi),
                                FormatBytes(hi.lo)));
  } else {
    switch (lo.kind) {
      case Kind::kAny: break;
      case Kind::kAtLeast: parts.push_back("≥" + FormatBytes(lo.lo)); break;
      default: parts.push_back("min " + NumericCell(lo, FormatBytes));
    }
    switch (hi.kind) {
      case Kind::kAny: break;
      case Kind::kAtMost: parts.push_back("≤" + FormatBytes(hi.hi)); break;
      default: parts.push_back("max " + NumericCell(hi, FormatBytes));
    }
  }
  if (FeaturePredicate p = mfs.PredicateFor(Feature::kMrCount);
      p.kind != Kind::kAny) {
    parts.push_back(NumericCell(p, FormatCount) + " MRs");
  }
  if (FeaturePredicate p = mfs.PredicateFor(Feature::kMrSize);
      p.kind != Kind::kAny) {
    parts.push_back("MR size " + NumericCell(p, FormatBytes));
  }
  if (FeaturePredicate p = mfs.PredicateFor(Feature::kLoopback);
      p.kind != Kind::kAny) {
    if (p.MatchesValue(1) && !p.MatchesValue(0)) parts.push_back("loopback");
    if (p.MatchesValue(0) && !p.MatchesValue(1)) parts.push_back("no loopback");
  }
  if (FeaturePredicate p = mfs.PredicateFor(Feature::kSrcDevice);
      p.kind != Kind::kAny) {
    parts.push_back("src device " + NumericCell(p, FormatPlain));
  }
  if (FeaturePredicate p = mfs.PredicateFor(Feature::kDstDevice);
      p.kind != Kind::kAny) {
    parts.push_back("dst device " + NumericCell(p, FormatPlain));
  }
  if (parts.empty()) return "-";
  std::string out = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) out += " and " + parts[i];
  return out;
}

std::string FormatShortest(double v) { return fmt::format("{}", v); }

}  // namespace

const std::vector<std::string>& ReportColumns() {
  static const std::vector<std::string> columns = {
      "#",   "RNIC",     "Direc.",          "Transport", "MTU",    "WQE",
      "SGE", "WQ depth", "Message Pattern", "# of QPs",  "Symptom"};
  return columns;
}

std::vector<std::string> ReportRow(const AnomalyRecord& record,
                                   std::string_view rnic) {
  const Mfs& mfs = record.mfs;
  using Kind = FeaturePredicate::Kind;

  std::string direction = CategoricalCell(
      mfs.PredicateFor(Feature::kDirection), 1, &DirectionLabel);
  if (direction.empty() || direction == "Uni-/Bi-") direction = "-";

  std::string qp_type =
      CategoricalCell(mfs.PredicateFor(Feature::kQpType), 2, &QpTypeLabel);
  std::string opcode =
      CategoricalCell(mfs.PredicateFor(Feature::kOpcode), 2, &OpcodeLabel);
  std::string transport = qp_type;
  if (!opcode.empty()) transport += (transport.empty() ? "" : " ") + opcode;
  if (transport.empty()) transport = "-";

  const FeaturePredicate batch = mfs.PredicateFor(Feature::kWqeBatch);
  std::string wqe = NumericCell(batch, FormatPlain);
  // A batch of one WQE is no batching at all.
  if ((batch.kind == Kind::kEquals && batch.lo == 1) ||
      (batch.kind == Kind::kAtMost && batch.hi == 1)) {
    wqe = "No";
  }

  std::string symptom;
  if (record.symptom == SymptomKind::kPauseAnomaly) {
    symptom = fmt::format("pause frame ({:.1f}%)",
                          100.0 * record.measurement.pause_duration_ratio);
  } else {
    symptom = "low throughput";
  }

  return {
      fmt::format("#{}", mfs.anomaly_id),
      std::string(rnic),
      direction,
      transport,
      NumericCell(mfs.PredicateFor(Feature::kMtu), FormatCount),
      wqe,
      NumericCell(mfs.PredicateFor(Feature::kSgePerWqe), FormatPlain),
      NumericCell(mfs.PredicateFor(Feature::kWqDepth), FormatPlain),
      MessagePatternCell(mfs),
      NumericCell(mfs.PredicateFor(Feature::kQpCount), FormatPlain),
      symptom,
  };
}

std::string ReportMarkdown(const CampaignReport& report,
                           const SubsystemSpec& spec) {
  std::string out = "# Performance anomalies\n\n";
  out += fmt::format(
      "Subsystem `{}`, seed {}, {} of {} search evaluations used, {} "
      "evaluations spent on minimal feature sets, {} points skipped.\n\n",
      spec.name, report.seed, report.budget_evaluations, report.eval_budget,
      report.mfs_evaluations, report.skipped_points);
  if (!report.status.ok()) {
    out += fmt::format("**Campaign aborted:** {}\n\n", report.status.message());
  }
  auto row = [](const std::vector<std::string>& cells) {
    std::string line = "|";
    for (const std::string& c : cells) line += " " + c + " |";
    return line + "\n";
  };
  out += row(ReportColumns());
  out += row(std::vector<std::string>(ReportColumns().size(), "---"));
  for (const AnomalyRecord& rec : report.anomalies) {
    out += row(ReportRow(rec, spec.name));
  }
  if (report.anomalies.empty()) out += "\nNo anomalies found.\n";
  return out;
}

std::string TrajectoryCsv(const std::vector<TrajectoryRow>& rows) {
  std::map<std::string, double, std::less<>> max_by_counter;
  for (const TrajectoryRow& r : rows) {
    double& m = max_by_counter[r.counter_id];
    m = std::max(m, r.value);
  }
  std::string out = "eval_index,counter_id,normalized_value,event\n";
  for (const TrajectoryRow& r : rows) {
    const double max = max_by_counter[r.counter_id];
    const double normalized = max > 0.0 ? r.value / max : 0.0;
    out += fmt::format("{},{},{},{}\n", r.eval_index, r.counter_id,
                       FormatShortest(normalized), TrajectoryEventName(r.event));
  }
  return out;
}

absl::StatusOr<std::vector<TrajectoryRow>> ParseTrajectoryCsv(
    std::string_view text) {
  std::vector<TrajectoryRow> rows;
  size_t line_no = 0;
  while (!text.empty()) {
    const size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? "" : text.substr(nl + 1);
    ++line_no;
    if (line_no == 1) {
      if (line != "eval_index,counter_id,normalized_value,event") {
        return absl::InvalidArgumentError("trajectory.csv: unexpected header");
      }
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    size_t start = 0;
    for (size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        f.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    auto bad = [&](std::string_view what) {
      return absl::InvalidArgumentError(
          StrCat("trajectory.csv:", line_no, ": ", what));
    };
    if (f.size() != 4) return bad("expected 4 fields");
    TrajectoryRow r;
    if (auto [p, ec] =
            std::from_chars(f[0].data(), f[0].data() + f[0].size(),
                            r.eval_index);
        ec != std::errc() || p != f[0].data() + f[0].size()) {
      return bad("bad eval_index");
    }
    r.counter_id = std::string(f[1]);
    if (auto [p, ec] =
            std::from_chars(f[2].data(), f[2].data() + f[2].size(), r.value);
        ec != std::errc() || p != f[2].data() + f[2].size()) {
      return bad("bad normalized_value");
    }
    std::optional<TrajectoryEvent> e = ParseTrajectoryEvent(f[3]);
    if (!e) return bad("bad event");
    r.event = *e;
    rows.push_back(std::move(r));
  }
  return rows;
}

std::string Sha256Hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr);
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string DumpJson(const Json& j) { return j.dump(2) + "\n"; }

absl::StatusOr<Json> ManifestJson(const CampaignConfig& config) {
  Json resolved = ResolvedConfigJson(config);
  Json inputs = Json::array();
  auto add = [&](std::string_view role,
                 const fs::path& path) -> absl::Status {
    absl::StatusOr<std::string> bytes = ReadFile(path);
    if (!bytes.ok()) return bytes.status();
    Json in;
    in["role"] = role;
    in["path"] = path.string();
    in["sha256"] = Sha256Hex(*bytes);
    inputs.push_back(in);
    return absl::OkStatus();
  };
  if (absl::Status s = add("config", config.config_path); !s.ok()) return s;
  if (absl::Status s = add("subsystem", config.subsystem_path); !s.ok()) {
    return s;
  }
  if (config.rules_path) {
    if (absl::Status s = add("rules", *config.rules_path); !s.ok()) return s;
  }
  if (config.known_anomalies_path) {
    if (absl::Status s = add("known_anomalies", *config.known_anomalies_path);
        !s.ok()) {
      return s;
    }
  }
  Json manifest;
  manifest["resolved_config_sha256"] = Sha256Hex(resolved.dump());
  manifest["seed"] = config.sa.seed;
  manifest["eval_budget"] = config.sa.eval_budget;
  manifest["inputs"] = inputs;
  resolved["manifest"] = manifest;
  return resolved;
}

absl::Status WriteFileAtomic(const fs::path& path, std::string_view contents) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      return absl::PermissionDeniedError(
          StrCat("cannot write ", tmp.string()));
    }
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out.flush()) {
      return absl::DataLossError(StrCat("short write to ", tmp.string()));
    }
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    return absl::InternalError(
        StrCat("cannot rename ", tmp.string(), ": ", ec.message()));
  }
  return absl::OkStatus();
}

absl::Status WriteCampaignArtifacts(const CampaignConfig& config,
                                    const CampaignReport& report) {
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(StrCat(
        "cannot create ", config.output_dir.string(), ": ", ec.message()));
  }
  const fs::path& dir = config.output_dir;
  absl::StatusOr<Json> manifest = ManifestJson(config);
  if (!manifest.ok()) return manifest.status();
  for (const auto& [name, contents] :
       {std::pair<std::string, std::string>{
            "anomalies.json", DumpJson(CampaignReportToJson(report))},
        {"report.md", ReportMarkdown(report, config.spec)},
        {"trajectory.csv", TrajectoryCsv(report.trajectory)},
        {"manifest.json", DumpJson(*manifest)}}) {
    if (absl::Status s = WriteFileAtomic(dir / name, contents); !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

absl::Status WriteDefaultFiles(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError(
        StrCat("cannot create ", dir.string(), ": ", ec.message()));
  }
  const SubsystemSpec spec = ReferenceSubsystem();
  Json campaign;
  campaign["subsystem"] = "reference_subsystem.json";
  campaign["rules"] = "reference_rules.json";
  campaign["sa"] = SaConfigToJson(SaConfig{});
  campaign["detection"] = PolicyToJson(DetectionPolicy{});
  campaign["output_dir"] = "out";
  campaign["seed"] = 1;
  for (const auto& [name, contents] :
       {std::pair<std::string, std::string>{"reference_subsystem.json",
                                            DumpJson(SpecToJson(spec))},
        {"reference_rules.json", DumpJson(RulesToJson(ReferenceRules()))},
        {"default_space.json", DumpJson(SpaceToJson(SpaceForSubsystem(spec)))},
        {"reference_campaign.json", DumpJson(campaign)}}) {
    if (absl::Status s = WriteFileAtomic(dir / name, contents); !s.ok()) {
      return s;
    }
  }
  return absl::OkStatus();
}

}  // namespace rforge
