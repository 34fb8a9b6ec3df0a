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

#include "metershare/protocol.h"

#include <cstdlib>
#include <sstream>

#include <gtest/gtest.h>

#include "metershare/error.h"
#include "metershare/report.h"
#include "metershare/scenario_io.h"

namespace metershare {
namespace {

template <typename Fn>
ErrorCode CodeOf(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::kInvalidParams;
}

Scenario Small(Algorithm algorithm, uint64_t seed = 21) {
  Scenario s;
  s.n_dno = 3;
  s.n_suppliers = 4;
  s.sm_per_region = {12, 7, 20};
  s.seed = seed;
  s.algorithm = algorithm;
  return s;
}

class AlgorithmTest : public ::testing::TestWithParam<Algorithm> {};

TEST_P(AlgorithmTest, MatchesPlaintextOracle) {
  const RunResult r = RunScenario(Small(GetParam()));
  EXPECT_EQ(r.matrix, OracleFor(r));
  EXPECT_TRUE(r.matrix.TotalsConsistent());
  for (const Verdict& v : Compare(r)) {
    if (v.exact) EXPECT_TRUE(v.pass) << v.name << ": " << v.detail;
  }
}

TEST_P(AlgorithmTest, ThreadCountDoesNotChangeOutputs) {
  RunOptions one, many;
  many.threads = 4;
  const RunResult a = RunScenario(Small(GetParam()), one);
  const RunResult b = RunScenario(Small(GetParam()), many);
  EXPECT_EQ(a.matrix, b.matrix);
  EXPECT_EQ(a.bundles, b.bundles);
  std::ostringstream ta, tb;
  WriteTranscriptCsv(ta, a);
  WriteTranscriptCsv(tb, b);
  EXPECT_EQ(ta.str(), tb.str());
}

TEST_P(AlgorithmTest, OneServerOutageIsAbsorbed) {
  Scenario s = Small(GetParam());
  const AggregateMatrix clean = RunScenario(s).matrix;
  s.fault_rate = 0.34;
  const RunResult r = RunScenario(s);
  EXPECT_EQ(r.dead_servers.size(), 1u);
  EXPECT_TRUE(r.lost_meters.empty());
  EXPECT_EQ(r.matrix, clean);
  std::size_t recovered = 0;
  for (const RegionOutcome& region : r.regions) recovered += region.recovered_shares;
  if (GetParam() == Algorithm::kNiaa) {
    EXPECT_EQ(recovered, 0u);
  } else {
    EXPECT_GT(recovered, 0u);
  }
}

TEST_P(AlgorithmTest, TwoServerOutageIsAnError) {
  Scenario s = Small(GetParam());
  s.fault_rate = 0.67;
  EXPECT_EQ(CodeOf([&] { RunScenario(s); }), ErrorCode::kInsufficientShares);
}

TEST_P(AlgorithmTest, BundleDropsExcludeOnlyLostMeters) {
  Scenario s = Small(GetParam());
  s.fault_mode = FaultMode::kBundle;
  s.fault_rate = 0.4;
  if (GetParam() == Algorithm::kNiaa) {
    // Share-wise sums cannot rebuild a slot that any meter failed to reach,
    // and NIAA never talks between servers, so the shortfall is reported.
    EXPECT_EQ(CodeOf([&] { RunScenario(s); }), ErrorCode::kInsufficientShares);
    return;
  }
  const RunResult r = RunScenario(s);
  EXPECT_FALSE(r.lost_meters.empty());
  EXPECT_EQ(r.matrix, OracleFor(r));
}

INSTANTIATE_TEST_SUITE_P(All, AlgorithmTest,
                         ::testing::Values(Algorithm::kNaa, Algorithm::kNcaa,
                                           Algorithm::kNiaa),
                         [](const auto& info) {
                           return std::string(AlgorithmName(info.param));
                         });

TEST(ProtocolTest, EmptyRegionIsIncompleteAndZero) {
  Scenario s = Small(Algorithm::kNaa);
  s.sm_per_region = {4, 0, 3};
  const RunResult r = RunScenario(s);
  EXPECT_FALSE(r.regions[1].complete);
  EXPECT_TRUE(r.regions[0].complete);
  EXPECT_EQ(r.matrix.region_imp[1], 0u);
  EXPECT_EQ(r.matrix, OracleFor(r));
}

TEST(ProtocolTest, SeedsChangeReadingsButNotStructure) {
  const RunResult a = RunScenario(Small(Algorithm::kNiaa, 1));
  const RunResult b = RunScenario(Small(Algorithm::kNiaa, 2));
  EXPECT_NE(a.matrix, b.matrix);
  EXPECT_EQ(a.bundles.size(), b.bundles.size());
  const RunResult again = RunScenario(Small(Algorithm::kNiaa, 1));
  EXPECT_EQ(a.matrix, again.matrix);
}

TEST(ProtocolTest, InvalidScenarioFailsBeforeWork) {
  Scenario s = Small(Algorithm::kNaa);
  s.sm_per_region.pop_back();
  EXPECT_EQ(CodeOf([&] { RunScenario(s); }), ErrorCode::kInvalidScenario);
}

TEST(ProtocolTest, NaaMultiplicationsPerRegion) {
  const RunResult r = RunScenario(Small(Algorithm::kNaa));
  for (const RegionOutcome& region : r.regions) {
    const uint64_t expect = uint64_t{region.aggregated} * 4 * 9;
    EXPECT_EQ(region.meter.Find("naa/imp")->multiplications, expect);
    EXPECT_EQ(region.meter.Find("naa/exp")->multiplications, expect);
  }
}

TEST(ProtocolTest, NcaaOpensOnlySupplierIds) {
  const RunResult r = RunScenario(Small(Algorithm::kNcaa));
  for (const RegionOutcome& region : r.regions) {
    std::vector<uint64_t> counts(4);
    for (const OpenRecord& rec : region.opened) {
      if (rec.kind != OpenKind::kData) continue;
      ASSERT_EQ(rec.phase, rec.phase.starts_with("ncaa/imp") ? "ncaa/imp/open" : "ncaa/exp/open");
      ASSERT_GE(rec.value.value(), 1u);
      ASSERT_LE(rec.value.value(), 4u);
      if (rec.phase == "ncaa/imp/open") ++counts[rec.value.value() - 1];
    }
    EXPECT_EQ(counts, region.imp_counts);
  }
}

TEST(ProtocolTest, OracleSkipsExcludedMeters) {
  Scenario s = Small(Algorithm::kNaa);
  const auto meters = BuildMeters(s);
  const auto readings = GenerateReadings(s.seed, 0, meters);
  const AggregateMatrix all = PlaintextOracle(3, 4, meters, readings);
  const uint32_t skip[] = {1};
  const AggregateMatrix less = PlaintextOracle(3, 4, meters, readings, skip);
  EXPECT_EQ(all.grid_imp - less.grid_imp, readings[0].imp.raw);
}

constexpr const char* kValidJson = R"({
  "n_servers": 5, "threshold": 2, "n_dno": 2, "n_suppliers": 3, "sigma": 4,
  "sm_per_region": [3, 4], "seed": 99, "fault_rate": 0.2,
  "algorithm": "ncaa", "byte_accounting": "measured", "fault_mode": "bundle"
})";

TEST(ScenarioIoTest, ParsesEveryField) {
  const Scenario s = ParseScenario(kValidJson);
  EXPECT_EQ(s.n_servers, 5);
  EXPECT_EQ(s.threshold, 2);
  EXPECT_EQ(s.sigma, 4);
  EXPECT_EQ(s.sm_per_region, (std::vector<uint32_t>{3, 4}));
  EXPECT_EQ(s.seed, 99u);
  EXPECT_EQ(s.algorithm, Algorithm::kNcaa);
  EXPECT_EQ(s.byte_accounting, ByteAccounting::kMeasured);
  EXPECT_EQ(s.fault_mode, FaultMode::kBundle);
  const Scenario round = ParseScenario(ScenarioToJson(s));
  EXPECT_EQ(ScenarioToJson(round), ScenarioToJson(s));
}

TEST(ScenarioIoTest, RejectsMalformedInput) {
  const std::string base = kValidJson;
  const auto with = [&](const std::string& from, const std::string& to) {
    std::string text = base;
    text.replace(text.find(from), from.size(), to);
    return text;
  };
  for (const std::string& text : {
           std::string("not json"),
           std::string("[]"),
           with("\"seed\": 99", "\"seed\": -1"),
           with("\"seed\": 99", "\"seed\": \"99\""),
           with("\"seed\": 99,", ""),
           with("\"seed\": 99", "\"seed\": 99, \"extra\": 1"),
           with("\"ncaa\"", "\"fast\""),
           with("[3, 4]", "[3]"),
           with("\"threshold\": 2", "\"threshold\": 3"),
       }) {
    EXPECT_EQ(CodeOf([&] { ParseScenario(text); }), ErrorCode::kInvalidScenario) << text;
  }
}

TEST(ScenarioIoTest, LoadsFixtureFiles) {
  const char* dir = std::getenv("METERSHARE_TEST_DATA");
  if (dir == nullptr) GTEST_SKIP() << "METERSHARE_TEST_DATA not set";
  const Scenario s = LoadScenario(std::string(dir) + "/tiny_naa.json");
  EXPECT_EQ(s.seed, 7u);
  EXPECT_EQ(CodeOf([&] { LoadScenario(std::string(dir) + "/bad_suppliers.json"); }),
            ErrorCode::kInvalidScenario);
  EXPECT_EQ(CodeOf([&] { LoadScenario(std::string(dir) + "/missing.json"); }),
            ErrorCode::kInvalidScenario);
}

}  // namespace
}  // namespace metershare
