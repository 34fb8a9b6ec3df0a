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

#ifndef METERSHARE_METERING_H_
#define METERSHARE_METERING_H_

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metershare/field.h"
#include "metershare/shamir.h"

namespace metershare {

enum class Algorithm { kNaa, kNcaa, kNiaa };
enum class ByteAccounting {
  kPaper,     // payload values only: 4 per meter for NAA/NCAA, 2 N_s for NIAA
  kMeasured,  // every share actually delivered, ID bits included
};
enum class FaultMode {
  kServer,  // fault_rate * n servers lose every SM bundle
  kBundle,  // each (meter, server) bundle dropped independently
};

std::string_view AlgorithmName(Algorithm a);
Algorithm ParseAlgorithm(std::string_view name);
std::string_view ByteAccountingName(ByteAccounting a);
ByteAccounting ParseByteAccounting(std::string_view name);
std::string_view FaultModeName(FaultMode m);
FaultMode ParseFaultMode(std::string_view name);

struct Scenario {
  int n_servers = 3;
  int threshold = 1;
  int n_dno = 2;
  int n_suppliers = 3;
  int sigma = 8;
  std::vector<uint32_t> sm_per_region = {5, 5};
  uint64_t seed = 1;
  double fault_rate = 0.0;
  Algorithm algorithm = Algorithm::kNaa;
  ByteAccounting byte_accounting = ByteAccounting::kPaper;
  FaultMode fault_mode = FaultMode::kServer;

  SharingParams sharing() const { return {n_servers, threshold}; }
  uint64_t total_meters() const;
  // Throws Error(kInvalidScenario) naming the offending field.
  void Validate() const;
};

// Public ID of supplier u (1-based). IDs are agreed grid-wide in advance.
inline uint64_t SupplierId(int u) { return static_cast<uint64_t>(u); }
std::vector<uint64_t> SupplierIds(int n_suppliers);

struct Profile {
  uint32_t imp_max = 0;  // upper bound of imported energy per slot
  uint32_t exp_max = 0;  // 0 for households without generation
};

struct SmartMeter {
  uint32_t id = 0;  // grid-wide, 1-based
  int region = 1;
  int supplier_imp = 1;
  int supplier_exp = 1;  // may differ from supplier_imp
  Profile profile;
};

struct MeterReadings {
  Reading imp;
  Reading exp;

  friend bool operator==(const MeterReadings&, const MeterReadings&) = default;
};

// Seeded population: region-major ids, uniform supplier choice, and a
// profile per meter. A third of households have no generation.
std::vector<SmartMeter> BuildMeters(const Scenario& scenario);

// Uniform readings in [0, profile max], reproducible per (seed, slot, id).
std::vector<MeterReadings> GenerateReadings(uint64_t seed, uint64_t slot,
                                            std::span<const SmartMeter> meters);

// Plain field encoding of one meter's submission, before sharing.
struct MeterTuple {
  std::vector<Fp> values;
};

// sigma bits of the import supplier ID (MSB first), sigma bits of the export
// supplier ID, then E_imp and E_exp: 2 sigma + 2 values. Throws kIdOverflow.
MeterTuple EncodeNaa(const SmartMeter& meter, const MeterReadings& readings,
                     int sigma);
// Import vector then export vector, N_s entries each, one non-zero entry at
// the supplier's position; zeros are shared too.
MeterTuple EncodeNiaa(const SmartMeter& meter, const MeterReadings& readings,
                      int n_suppliers);

// Test-mode validators; protocol runs never open inputs.
bool IsValidNaaTuple(const MeterTuple& tuple, int sigma);
bool IsValidNiaaTuple(const MeterTuple& tuple, int n_suppliers);

// One meter's shares as they arrive: shares[value][server - 1], empty when
// the bundle to that server was dropped.
struct Submission {
  uint32_t meter_id = 0;
  int region = 1;
  std::vector<bool> delivered;
  std::vector<std::vector<std::optional<Share>>> shares;
};

struct SubmitResult {
  std::vector<Submission> submissions;  // every meter not in lost_meters
  std::vector<int> dead_servers;        // kServer mode
  std::vector<uint32_t> lost_meters;    // fewer than t+1 bundles arrived
  uint64_t bundles_sent = 0;
  uint64_t bundles_delivered = 0;
  uint64_t shares_sent = 0;
  uint64_t shares_delivered = 0;
};

// Each meter shares its tuple with its own seeded randomness and sends one
// bundle per server; the fault model then drops bundles.
SubmitResult Submit(const Scenario& scenario, std::span<const SmartMeter> meters,
                    std::span<const MeterTuple> tuples);

}  // namespace metershare

#endif  // METERSHARE_METERING_H_
