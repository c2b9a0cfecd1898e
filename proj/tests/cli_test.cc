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

// Runs the rforge executable as a subprocess and checks exit codes, stdout
// and the files it writes.

#include <stdio.h>
#include <sys/wait.h>
#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "gtest/gtest.h"

namespace {

namespace fs = std::filesystem;

const fs::path kData = RFORGE_TEST_DATA_DIR;

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout and stderr interleaved
};

std::string Quote(const std::string& s) {
  std::string q = "'";
  for (char c : s) {
    if (c == '\'') {
      q += "'\\''";
    } else {
      q += c;
    }
  }
  return q + "'";
}

CliResult RunCli(const std::string& args) {
  const std::string cmd = Quote(RFORGE_CLI_PATH) + " " + args + " 2>&1";
  CliResult r;
  FILE* pipe = ::popen(cmd.c_str(), "r");
  if (pipe == nullptr) return r;
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) r.output.append(buf, n);
  const int status = ::pclose(pipe);
  if (WIFEXITED(status)) r.exit_code = WEXITSTATUS(status);
  return r;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

size_t Count(const std::string& haystack, const std::string& needle) {
  size_t n = 0;
  for (size_t pos = haystack.find(needle); pos != std::string::npos;
       pos = haystack.find(needle, pos + needle.size())) {
    ++n;
  }
  return n;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    std::string templ = (fs::temp_directory_path() / "rforge-cli-XXXXXX").string();
    dir_ = ::mkdtemp(templ.data());
  }
  void TearDown() override {
    std::error_code ec;
    fs::remove_all(dir_, ec);
  }
  std::string Path(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, ReferenceSearchReportsAnomaliesWithExitTwo) {
  const CliResult r =
      RunCli("search --config " + Quote((kData / "reference_campaign.json").string()) +
             " --out " + Quote(Path("out")));
  EXPECT_EQ(r.exit_code, 2) << r.output;
  EXPECT_NE(r.output.find("6 new anomalies found"), std::string::npos) << r.output;
  const std::string anomalies = Slurp(dir_ / "out/anomalies.json");
  EXPECT_EQ(Count(anomalies, "\"mfs\""), 6u);
  for (const char* f : {"report.md", "trajectory.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(dir_ / "out" / f)) << f;
  }
}

TEST_F(CliTest, EmptyRuleLibraryFindsNothingWithExitZero) {
  fs::copy_file(kData / "reference_subsystem.json", dir_ / "subsystem.json");
  std::ofstream(dir_ / "rules.json") << R"({"rules": []})";
  std::ofstream(dir_ / "campaign.json") << R"({
    "subsystem": "subsystem.json",
    "rules": "rules.json",
    "output_dir": "out",
    "seed": 3
  })";
  const CliResult r = RunCli("search --config " + Quote(Path("campaign.json")) +
                             " --budget 200");
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("0 new anomalies found"), std::string::npos) << r.output;
  EXPECT_NE(Slurp(dir_ / "out/anomalies.json").find("\"anomalies\": []"),
            std::string::npos);
}

TEST_F(CliTest, MissingSubsystemFileExitsOneNamingThePath) {
  std::ofstream(dir_ / "campaign.json") << R"({
    "subsystem": "missing_subsystem.json",
    "rules": "rules.json",
    "output_dir": "out"
  })";
  const CliResult r = RunCli("search --config " + Quote(Path("campaign.json")));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("missing_subsystem.json"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(dir_ / "out"));
}

TEST_F(CliTest, ReplayTriggerPointExitsTwo) {
  const CliResult r = RunCli(
      "replay --point " + Quote((kData / "points/anomaly1_trigger.json").string()) +
      " --spec " + Quote((kData / "reference_subsystem.json").string()) +
      " --rules " + Quote((kData / "reference_rules.json").string()));
  EXPECT_EQ(r.exit_code, 2) << r.output;
  EXPECT_NE(r.output.find("\"pause_duration_ratio\": 0.2,"), std::string::npos)
      << r.output;
  EXPECT_NE(r.output.find("\"verdict\": \"pause-anomaly\""), std::string::npos);
}

TEST_F(CliTest, ReplayBaselinePointExitsZero) {
  const CliResult r = RunCli(
      "replay --point " + Quote((kData / "points/baseline.json").string()) +
      " --spec " + Quote((kData / "reference_subsystem.json").string()) +
      " --rules " + Quote((kData / "reference_rules.json").string()));
  EXPECT_EQ(r.exit_code, 0) << r.output;
  EXPECT_NE(r.output.find("\"verdict\": \"none\""), std::string::npos);
}

TEST_F(CliTest, MalformedPointReportsLineAndColumn) {
  std::ofstream(dir_ / "point.json") << "{\n  \"qp_type\": \"UD\",,\n}\n";
  const CliResult r =
      RunCli("replay --point " + Quote(Path("point.json")) + " --spec " +
             Quote((kData / "reference_subsystem.json").string()));
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.output.find("point.json:2:"), std::string::npos) << r.output;
}

TEST_F(CliTest, CheckSpaceExitCodes) {
  ASSERT_EQ(RunCli("search --config " +
                   Quote((kData / "reference_campaign.json").string()) +
                   " --out " + Quote(Path("out")))
                .exit_code,
            2);
  const std::string anomalies = Quote(Path("out/anomalies.json"));
  const CliResult full = RunCli("check-space --space " +
                                Quote((kData / "default_space.json").string()) +
                                " --anomalies " + anomalies);
  EXPECT_EQ(full.exit_code, 2) << full.output;
  EXPECT_EQ(Count(full.output, "\"anomaly_id\""), 6u);

  std::ofstream(dir_ / "space.json") << R"({
    "transports": [{"qp_type": "RC", "opcode": "WRITE"}],
    "directions": ["unidirectional"],
    "loopback_choices": [false],
    "size_regions": [{"lo": 1, "hi": 4194304, "representative": 65536}]
  })";
  const CliResult clean = RunCli("check-space --space " + Quote(Path("space.json")) +
                                 " --anomalies " + anomalies);
  EXPECT_EQ(clean.exit_code, 0) << clean.output;
  EXPECT_EQ(clean.output, "[]\n");
}

TEST_F(CliTest, GenDefaultsThenSearch) {
  ASSERT_EQ(RunCli("gen-defaults --out " + Quote(Path("d"))).exit_code, 0);
  EXPECT_EQ(Slurp(dir_ / "d/reference_rules.json"),
            Slurp(kData / "reference_rules.json"));
  const CliResult r = RunCli("search --config " +
                             Quote(Path("d/reference_campaign.json")) +
                             " --seed 4");
  EXPECT_EQ(r.exit_code, 2) << r.output;
  EXPECT_TRUE(fs::exists(dir_ / "d/out/anomalies.json"));
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(RunCli("").exit_code, 1);
  EXPECT_EQ(RunCli("frobnicate").exit_code, 1);
  EXPECT_EQ(RunCli("search").exit_code, 1);
  EXPECT_EQ(RunCli("search --config x.json --budget -5").exit_code, 1);
  const CliResult v = RunCli("--version");
  EXPECT_EQ(v.exit_code, 0);
  EXPECT_NE(v.output.find("1.0.0"), std::string::npos);
}

}  // namespace
