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

// Exercises the shared library through its C header only.

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include "gtest/gtest.h"
#include "rforge/rforge.h"

namespace {

namespace fs = std::filesystem;

const fs::path kData = RFORGE_TEST_DATA_DIR;

class ScratchDir {
 public:
  ScratchDir() {
    std::string templ = (fs::temp_directory_path() / "rforge-capi-XXXXXX").string();
    path_ = ::mkdtemp(templ.data());
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Owns a library-allocated string.
struct Owned {
  char* s = nullptr;
  ~Owned() { rforge_string_free(s); }
  std::string str() const { return s ? s : ""; }
};

TEST(CApiTest, Version) { EXPECT_STREQ(rforge_version(), "1.0.0"); }

TEST(CApiTest, NullArgumentsAreRejected) {
  rforge_campaign* c = nullptr;
  EXPECT_EQ(rforge_campaign_load(nullptr, &c), RFORGE_INVALID_ARGUMENT);
  EXPECT_NE(std::string(rforge_last_error()).find("config_path"),
            std::string::npos);
  EXPECT_EQ(rforge_campaign_run(nullptr, nullptr), RFORGE_INVALID_ARGUMENT);
  rforge_string_free(nullptr);
  rforge_campaign_free(nullptr);
}

TEST(CApiTest, CampaignRunWritesArtifacts) {
  ScratchDir out;
  rforge_campaign* c = nullptr;
  ASSERT_EQ(rforge_campaign_load((kData / "reference_campaign.json").c_str(), &c),
            RFORGE_OK)
      << rforge_last_error();
  Owned before;
  EXPECT_EQ(rforge_campaign_report_json(c, &before.s),
            RFORGE_FAILED_PRECONDITION);
  ASSERT_EQ(rforge_campaign_set_output_dir(c, out.path().c_str()), RFORGE_OK);
  ASSERT_EQ(rforge_campaign_set_seed(c, 2), RFORGE_OK);
  int32_t found = -1;
  ASSERT_EQ(rforge_campaign_run(c, &found), RFORGE_OK) << rforge_last_error();
  EXPECT_GT(found, 0);
  Owned report;
  ASSERT_EQ(rforge_campaign_report_json(c, &report.s), RFORGE_OK);
  EXPECT_EQ(report.str(), Slurp(out.path() / "anomalies.json"));
  EXPECT_NE(report.str().find("\"seed\": 2"), std::string::npos);
  for (const char* f : {"report.md", "trajectory.csv", "manifest.json"}) {
    EXPECT_TRUE(fs::exists(out.path() / f)) << f;
  }
  rforge_campaign_free(c);
}

TEST(CApiTest, BudgetOverrideIsValidated) {
  rforge_campaign* c = nullptr;
  ASSERT_EQ(rforge_campaign_load((kData / "reference_campaign.json").c_str(), &c),
            RFORGE_OK);
  EXPECT_EQ(rforge_campaign_set_budget(c, -1), RFORGE_INVALID_ARGUMENT);
  EXPECT_EQ(rforge_campaign_set_budget(c, 10), RFORGE_OK);
  rforge_campaign_free(c);
}

TEST(CApiTest, MissingConfigIsNotFound) {
  rforge_campaign* c = nullptr;
  EXPECT_EQ(rforge_campaign_load("/nonexistent/campaign.json", &c),
            RFORGE_NOT_FOUND);
  EXPECT_EQ(c, nullptr);
  EXPECT_NE(std::string(rforge_last_error()).find("/nonexistent/campaign.json"),
            std::string::npos);
}

TEST(CApiTest, ReplayOfTheTriggerPoint) {
  Owned out;
  rforge_verdict verdict = RFORGE_VERDICT_NONE;
  ASSERT_EQ(rforge_replay((kData / "points/anomaly1_trigger.json").c_str(),
                          (kData / "reference_subsystem.json").c_str(),
                          (kData / "reference_rules.json").c_str(), &out.s,
                          &verdict),
            RFORGE_OK)
      << rforge_last_error();
  EXPECT_EQ(verdict, RFORGE_VERDICT_PAUSE_ANOMALY);
  EXPECT_NE(out.str().find("\"pause_duration_ratio\": 0.2,"), std::string::npos)
      << out.str();
  EXPECT_NE(out.str().find("\"verdict\": \"pause-anomaly\""), std::string::npos);
}

TEST(CApiTest, ReplayWithoutRulesIsClean) {
  Owned out;
  rforge_verdict verdict = RFORGE_VERDICT_PAUSE_ANOMALY;
  ASSERT_EQ(rforge_replay((kData / "points/anomaly1_trigger.json").c_str(),
                          (kData / "reference_subsystem.json").c_str(), nullptr,
                          &out.s, &verdict),
            RFORGE_OK);
  EXPECT_EQ(verdict, RFORGE_VERDICT_NONE);
}

TEST(CApiTest, SimulateFromJsonText) {
  const std::string point = Slurp(kData / "points/baseline.json");
  const std::string spec = Slurp(kData / "reference_subsystem.json");
  Owned out;
  ASSERT_EQ(rforge_simulate(point.c_str(), spec.c_str(), nullptr, 1, &out.s),
            RFORGE_OK)
      << rforge_last_error();
  EXPECT_NE(out.str().find("\"achieved_bps\": 200000000000.0"),
            std::string::npos)
      << out.str();
  Owned bad;
  EXPECT_EQ(rforge_simulate("{", spec.c_str(), nullptr, 1, &bad.s),
            RFORGE_INVALID_ARGUMENT);
  EXPECT_NE(std::string(rforge_last_error()).find("point:1:"), std::string::npos)
      << rforge_last_error();
}

TEST(CApiTest, CheckSpaceFindsWitnesses) {
  ScratchDir dir;
  rforge_campaign* c = nullptr;
  ASSERT_EQ(rforge_campaign_load((kData / "reference_campaign.json").c_str(), &c),
            RFORGE_OK);
  ASSERT_EQ(rforge_campaign_set_output_dir(c, dir.path().c_str()), RFORGE_OK);
  ASSERT_EQ(rforge_campaign_run(c, nullptr), RFORGE_OK);
  rforge_campaign_free(c);

  const std::string anomalies = (dir.path() / "anomalies.json").string();
  Owned full;
  int32_t witnesses = -1;
  ASSERT_EQ(rforge_check_space((kData / "default_space.json").c_str(),
                               anomalies.c_str(), &full.s, &witnesses),
            RFORGE_OK)
      << rforge_last_error();
  EXPECT_EQ(witnesses, 6);

  // Only RC WRITE of large messages, unidirectional, no loopback.
  const fs::path restricted = dir.path() / "restricted.json";
  std::ofstream(restricted) << R"({
    "transports": [{"qp_type": "RC", "opcode": "WRITE"}],
    "directions": ["unidirectional"],
    "loopback_choices": [false],
    "size_regions": [{"lo": 1, "hi": 4194304, "representative": 65536}]
  })";
  Owned none;
  ASSERT_EQ(rforge_check_space(restricted.c_str(), anomalies.c_str(), &none.s,
                               &witnesses),
            RFORGE_OK)
      << rforge_last_error();
  EXPECT_EQ(witnesses, 0);
  EXPECT_EQ(none.str(), "[]\n");
}

TEST(CApiTest, GenDefaultsWritesLoadableFiles) {
  ScratchDir dir;
  ASSERT_EQ(rforge_gen_defaults(dir.path().c_str()), RFORGE_OK);
  rforge_campaign* c = nullptr;
  EXPECT_EQ(rforge_campaign_load(
                (dir.path() / "reference_campaign.json").c_str(), &c),
            RFORGE_OK)
      << rforge_last_error();
  rforge_campaign_free(c);
  // The shipped data directory matches what the library generates.
  for (const char* f : {"reference_subsystem.json", "reference_rules.json",
                        "default_space.json", "reference_campaign.json"}) {
    EXPECT_EQ(Slurp(dir.path() / f), Slurp(kData / f)) << f;
  }
}

}  // namespace
