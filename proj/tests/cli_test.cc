// Copyright 2026 The MeterShare Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "metershare/cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace metershare {
namespace {

namespace fs = std::filesystem;

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult Cli(std::vector<std::string> args) {
  args.insert(args.begin(), "metershare");
  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = RunCli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string Slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("metershare_cli_" + std::string(::testing::UnitTest::GetInstance()
                                                 ->current_test_info()
                                                 ->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string WriteScenario(const std::string& algorithm, double fault_rate) {
    const fs::path path = dir_ / ("scenario_" + algorithm + ".json");
    std::ofstream(path) << R"({"n_servers": 3, "threshold": 1, "n_dno": 2,
      "n_suppliers": 3, "sigma": 8, "sm_per_region": [6, 4], "seed": 11,
      "fault_rate": )" << fault_rate
                        << R"(, "algorithm": ")" << algorithm
                        << R"(", "byte_accounting": "paper"})";
    return path.string();
  }

  fs::path dir_;
};

TEST_F(CliTest, RunWritesArtifactsAndChecks) {
  for (const std::string algorithm : {"naa", "ncaa", "niaa"}) {
    const fs::path out = dir_ / algorithm;
    const CliResult r = Cli({"run", "--scenario", WriteScenario(algorithm, 0.0), "--check",
                             "--out", out.string()});
    EXPECT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("check passed"), std::string::npos);
    for (const char* name : {"aggregates.csv", "bundles.json", "costs.csv", "transcript.csv"}) {
      EXPECT_TRUE(fs::exists(out / name)) << name;
    }
    EXPECT_EQ(Slurp(out / "aggregates.csv").substr(0, 22), "region,supplier,imp,ex");
  }
}

TEST_F(CliTest, JsonCostFormat) {
  const CliResult r = Cli({"run", "--scenario", WriteScenario("naa", 0.0), "--format",
                           "json", "--out", dir_.string()});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(fs::exists(dir_ / "costs.json"));
  EXPECT_FALSE(fs::exists(dir_ / "costs.csv"));
}

TEST_F(CliTest, ArtifactsAreByteIdenticalAcrossRunsAndThreads) {
  const std::string scenario = WriteScenario("ncaa", 0.0);
  ASSERT_EQ(Cli({"run", "--scenario", scenario, "--out", (dir_ / "a").string()}).code, 0);
  ASSERT_EQ(Cli({"run", "--scenario", scenario, "--threads", "3", "--out",
                 (dir_ / "b").string()})
                .code,
            0);
  for (const char* name : {"aggregates.csv", "bundles.json", "costs.csv", "transcript.csv"}) {
    EXPECT_EQ(Slurp(dir_ / "a" / name), Slurp(dir_ / "b" / name)) << name;
  }
}

TEST_F(CliTest, SeedOverrideChangesAggregates) {
  const std::string scenario = WriteScenario("niaa", 0.0);
  ASSERT_EQ(Cli({"run", "--scenario", scenario, "--out", (dir_ / "a").string()}).code, 0);
  ::setenv("METERSHARE_SEED", "12345", 1);
  const CliResult r = Cli({"run", "--scenario", scenario, "--check", "--out",
                           (dir_ / "b").string()});
  ::setenv("METERSHARE_SEED", "twelve", 1);
  const CliResult bad = Cli({"run", "--scenario", scenario, "--out", (dir_ / "c").string()});
  ::unsetenv("METERSHARE_SEED");
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(Slurp(dir_ / "a" / "aggregates.csv"), Slurp(dir_ / "b" / "aggregates.csv"));
  EXPECT_EQ(bad.code, 1);
}

TEST_F(CliTest, OneServerDownStillChecks) {
  for (const std::string algorithm : {"naa", "ncaa", "niaa"}) {
    const CliResult r = Cli({"run", "--scenario", WriteScenario(algorithm, 0.34), "--check",
                             "--out", (dir_ / algorithm).string()});
    EXPECT_EQ(r.code, 0) << algorithm << ": " << r.err;
  }
}

TEST_F(CliTest, TwoServersDownIsACorrectnessFailure) {
  const CliResult r = Cli({"run", "--scenario", WriteScenario("naa", 0.67), "--check",
                           "--out", dir_.string()});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("InsufficientShares"), std::string::npos) << r.err;
}

TEST_F(CliTest, ConfigErrorsExitOne) {
  EXPECT_EQ(Cli({"run"}).code, 1);
  EXPECT_EQ(Cli({"run", "--scenario", (dir_ / "missing.json").string()}).code, 1);
  EXPECT_EQ(Cli({"run", "--scenario", WriteScenario("naa", 0.0), "--threads", "0"}).code, 1);
  EXPECT_EQ(Cli({"frobnicate"}).code, 1);
  EXPECT_EQ(Cli({"costs", "--sigma", "-3"}).code, 1);
  EXPECT_EQ(Cli({"sweep", "--sweep", "sm=4:1:1"}).code, 1);
  if (const char* data = std::getenv("METERSHARE_TEST_DATA")) {
    const CliResult r =
        Cli({"run", "--scenario", std::string(data) + "/bad_suppliers.json"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("n_suppliers"), std::string::npos) << r.err;
  }
}

TEST_F(CliTest, HelpExitsZero) { EXPECT_EQ(Cli({"--help"}).code, 0); }

TEST_F(CliTest, CostsTable) {
  const CliResult r = Cli({"costs"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("niaa,between_dcc,all,14,10,8,2200000,0,"), std::string::npos);
  EXPECT_NE(r.out.find("naa,between_dcc,all,14,10,8,2200000,74844000000,"),
            std::string::npos);

  EXPECT_EQ(Cli({"costs", "--sm", "1M"}).out, Cli({"costs", "--sm", "1000000"}).out);
  EXPECT_EQ(Cli({"costs", "--sm", "1X"}).code, 1);

  const fs::path file = dir_ / "costs.json";
  EXPECT_EQ(Cli({"costs", "--format", "json", "--sm", "1000", "--out", file.string()}).code, 0);
  EXPECT_NE(Slurp(file).find("\"rows\""), std::string::npos);
}

TEST_F(CliTest, SweepDefaultHasEightPoints) {
  const CliResult r = Cli({"sweep"});
  EXPECT_EQ(r.code, 0) << r.err;
  std::size_t rows = 0;
  for (std::size_t at = r.out.find("\nnaa,between_dcc"); at != std::string::npos;
       at = r.out.find("\nnaa,between_dcc", at + 1)) {
    ++rows;
  }
  EXPECT_EQ(rows, 8u);
}

TEST_F(CliTest, SelftestAndMutations) {
  EXPECT_EQ(Cli({"selftest"}).code, 0);
  EXPECT_EQ(Cli({"selftest", "--mutate", "polarity"}).code, 2);
  EXPECT_EQ(Cli({"selftest", "--mutate", "degree"}).code, 2);
}

}  // namespace
}  // namespace metershare
