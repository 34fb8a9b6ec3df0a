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

#ifndef METERSHARE_PROTOCOL_H_
#define METERSHARE_PROTOCOL_H_

#include <cstdint>
#include <span>
#include <vector>

#include "metershare/abb.h"
#include "metershare/aggregation.h"
#include "metershare/metering.h"

namespace metershare {

struct RunOptions {
  int threads = 1;  // regions run concurrently; outputs do not depend on it
  bool record_transcript = true;
  uint64_t slot = 0;
  bool skip_degree_reduction = false;
  bool flip_equality_polarity = false;
};

struct RegionOutcome {
  int region = 0;
  uint32_t meters = 0;      // meters built for the region
  uint32_t aggregated = 0;  // meters whose tuple reached the servers
  bool complete = true;     // false when no tuple arrived; the row is zero
  std::size_t recovered_shares = 0;
  SharedRow row;  // per-supplier aggregates, still shared
  CostMeter meter;
  Transcript transcript;
  std::vector<OpenRecord> opened;
  // NCAA only.
  std::vector<uint64_t> imp_counts;
  std::vector<uint64_t> exp_counts;
  PermuteStats imp_network;
  PermuteStats exp_network;
};

struct RunResult {
  Scenario scenario;
  std::vector<SmartMeter> meters;
  std::vector<MeterReadings> readings;
  std::vector<int> dead_servers;
  std::vector<uint32_t> lost_meters;
  uint64_t shares_delivered = 0;
  uint64_t bundles_delivered = 0;
  std::vector<RegionOutcome> regions;
  CostMeter output_meter;
  Transcript output_transcript;
  std::vector<RecipientBundle> bundles;
  AggregateMatrix matrix;
};

// Input distribution, region aggregation with the scenario's algorithm,
// grid aggregation and output distribution for one time slot. Throws
// Error(kInvalidScenario) before any engine work, and kInsufficientShares
// when too few servers hold a value to finish.
RunResult RunScenario(const Scenario& scenario, const RunOptions& options = {});

// Group-by sums computed in the clear, skipping `excluded` meter ids.
AggregateMatrix PlaintextOracle(int n_dno, int n_suppliers,
                                std::span<const SmartMeter> meters,
                                std::span<const MeterReadings> readings,
                                std::span<const uint32_t> excluded = {});

// Oracle for a finished run: every meter except the lost ones.
AggregateMatrix OracleFor(const RunResult& result);

}  // namespace metershare

#endif  // METERSHARE_PROTOCOL_H_
