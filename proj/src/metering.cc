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

#include "metershare/metering.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "metershare/error.h"
#include "metershare/prng.h"

namespace metershare {

namespace {

constexpr uint64_t kMeterTag = 0x3E7E;
constexpr uint64_t kReadingTag = 0x4EAD;
constexpr uint64_t kDealTag = 0x5AA7;
constexpr uint64_t kDropTag = 0xFA17;

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidScenario, what);
}

void PushBits(std::vector<Fp>& out, uint64_t value, int sigma) {
  for (int i = sigma - 1; i >= 0; --i) out.emplace_back((value >> i) & 1);
}

}  // namespace

std::string_view AlgorithmName(Algorithm a) {
  switch (a) {
    case Algorithm::kNaa: return "naa";
    case Algorithm::kNcaa: return "ncaa";
    case Algorithm::kNiaa: return "niaa";
  }
  return "?";
}

Algorithm ParseAlgorithm(std::string_view name) {
  if (name == "naa") return Algorithm::kNaa;
  if (name == "ncaa") return Algorithm::kNcaa;
  if (name == "niaa") return Algorithm::kNiaa;
  Invalid("algorithm must be naa, ncaa or niaa, got '" + std::string(name) + "'");
}

std::string_view ByteAccountingName(ByteAccounting a) {
  return a == ByteAccounting::kPaper ? "paper" : "measured";
}

ByteAccounting ParseByteAccounting(std::string_view name) {
  if (name == "paper") return ByteAccounting::kPaper;
  if (name == "measured") return ByteAccounting::kMeasured;
  Invalid("byte_accounting must be paper or measured, got '" + std::string(name) + "'");
}

std::string_view FaultModeName(FaultMode m) {
  return m == FaultMode::kServer ? "server" : "bundle";
}

FaultMode ParseFaultMode(std::string_view name) {
  if (name == "server") return FaultMode::kServer;
  if (name == "bundle") return FaultMode::kBundle;
  Invalid("fault_mode must be server or bundle, got '" + std::string(name) + "'");
}

uint64_t Scenario::total_meters() const {
  uint64_t total = 0;
  for (uint32_t m : sm_per_region) total += m;
  return total;
}

void Scenario::Validate() const {
  if (threshold < 1) Invalid("threshold must be >= 1");
  if (n_servers < 2 * threshold + 1) {
    Invalid("n_servers must be >= 2*threshold+1 (honest majority)");
  }
  if (n_servers > 255) Invalid("n_servers must be <= 255");
  if (n_dno < 1) Invalid("n_dno must be >= 1");
  if (n_suppliers < 1) Invalid("n_suppliers must be >= 1");
  if (sigma < 1 || sigma > 62) Invalid("sigma must be in [1, 62]");
  if (static_cast<uint64_t>(n_suppliers) >= (uint64_t{1} << sigma)) {
    Invalid("n_suppliers must fit sigma-bit supplier IDs");
  }
  if (sm_per_region.size() != static_cast<std::size_t>(n_dno)) {
    Invalid("sm_per_region needs one entry per DNO region");
  }
  if (!(fault_rate >= 0.0 && fault_rate <= 1.0)) Invalid("fault_rate must be in [0, 1]");
  const unsigned __int128 bound =
      static_cast<unsigned __int128>(total_meters()) << 32;
  if (bound >= kModulus) Invalid("total meters times 2^32 would overflow the field");
}

std::vector<uint64_t> SupplierIds(int n_suppliers) {
  std::vector<uint64_t> ids;
  for (int u = 1; u <= n_suppliers; ++u) ids.push_back(SupplierId(u));
  return ids;
}

std::vector<SmartMeter> BuildMeters(const Scenario& scenario) {
  Prng rng(MixSeed(scenario.seed, kMeterTag));
  std::vector<SmartMeter> meters;
  uint32_t id = 1;
  for (int j = 1; j <= scenario.n_dno; ++j) {
    for (uint32_t k = 0; k < scenario.sm_per_region[j - 1]; ++k) {
      SmartMeter m;
      m.id = id++;
      m.region = j;
      m.supplier_imp = 1 + static_cast<int>(rng.NextBelow(scenario.n_suppliers));
      m.supplier_exp = 1 + static_cast<int>(rng.NextBelow(scenario.n_suppliers));
      m.profile.imp_max = 1000 + static_cast<uint32_t>(rng.NextBelow(9000));
      m.profile.exp_max =
          rng.NextBelow(3) == 0 ? 0 : static_cast<uint32_t>(rng.NextBelow(4000));
      meters.push_back(m);
    }
  }
  return meters;
}

std::vector<MeterReadings> GenerateReadings(uint64_t seed, uint64_t slot,
                                            std::span<const SmartMeter> meters) {
  std::vector<MeterReadings> out;
  out.reserve(meters.size());
  for (const SmartMeter& m : meters) {
    Prng rng(MixSeed(MixSeed(seed, kReadingTag, slot), m.id));
    MeterReadings r;
    r.imp.raw = static_cast<uint32_t>(rng.NextBelow(uint64_t{m.profile.imp_max} + 1));
    r.exp.raw = static_cast<uint32_t>(rng.NextBelow(uint64_t{m.profile.exp_max} + 1));
    out.push_back(r);
  }
  return out;
}

MeterTuple EncodeNaa(const SmartMeter& meter, const MeterReadings& readings,
                     int sigma) {
  for (int u : {meter.supplier_imp, meter.supplier_exp}) {
    if (u < 0 || (sigma < 64 && (SupplierId(u) >> sigma) != 0)) {
      throw Error(ErrorCode::kIdOverflow,
                  "supplier " + std::to_string(u) + " does not fit " +
                      std::to_string(sigma) + " bits");
    }
  }
  MeterTuple t;
  t.values.reserve(2 * sigma + 2);
  PushBits(t.values, SupplierId(meter.supplier_imp), sigma);
  PushBits(t.values, SupplierId(meter.supplier_exp), sigma);
  t.values.push_back(EncodeReading(readings.imp));
  t.values.push_back(EncodeReading(readings.exp));
  return t;
}

MeterTuple EncodeNiaa(const SmartMeter& meter, const MeterReadings& readings,
                      int n_suppliers) {
  if (meter.supplier_imp < 1 || meter.supplier_imp > n_suppliers ||
      meter.supplier_exp < 1 || meter.supplier_exp > n_suppliers) {
    throw Error(ErrorCode::kIdOverflow, "supplier position outside the vector");
  }
  MeterTuple t;
  t.values.assign(2 * static_cast<std::size_t>(n_suppliers), Fp::Zero());
  t.values[meter.supplier_imp - 1] = EncodeReading(readings.imp);
  t.values[n_suppliers + meter.supplier_exp - 1] = EncodeReading(readings.exp);
  return t;
}

bool IsValidNaaTuple(const MeterTuple& tuple, int sigma) {
  if (tuple.values.size() != 2 * static_cast<std::size_t>(sigma) + 2) return false;
  for (int i = 0; i < 2 * sigma; ++i) {
    if (tuple.values[i].value() > 1) return false;
  }
  return true;
}

bool IsValidNiaaTuple(const MeterTuple& tuple, int n_suppliers) {
  if (tuple.values.size() != 2 * static_cast<std::size_t>(n_suppliers)) return false;
  for (int half = 0; half < 2; ++half) {
    int nonzero = 0;
    for (int u = 0; u < n_suppliers; ++u) {
      nonzero += tuple.values[half * n_suppliers + u] != Fp::Zero();
    }
    if (nonzero > 1) return false;
  }
  return true;
}

SubmitResult Submit(const Scenario& scenario, std::span<const SmartMeter> meters,
                    std::span<const MeterTuple> tuples) {
  if (meters.size() != tuples.size()) {
    throw Error(ErrorCode::kLengthMismatch, "one tuple per meter");
  }
  const SharingParams params = scenario.sharing();
  const int n = params.n;
  Prng drop_rng(MixSeed(scenario.seed, kDropTag));

  SubmitResult result;
  std::vector<bool> server_dead(n, false);
  if (scenario.fault_mode == FaultMode::kServer) {
    const int dead = std::min(
        n, static_cast<int>(std::floor(scenario.fault_rate * n + 1e-9)));
    std::vector<int> order(n);
    for (int i = 0; i < n; ++i) order[i] = i + 1;
    for (int i = 0; i < dead; ++i) {
      std::swap(order[i], order[i + drop_rng.NextBelow(n - i)]);
      server_dead[order[i] - 1] = true;
    }
    for (int i = 1; i <= n; ++i) {
      if (server_dead[i - 1]) result.dead_servers.push_back(i);
    }
  }

  for (std::size_t k = 0; k < meters.size(); ++k) {
    const SmartMeter& meter = meters[k];
    Submission sub;
    sub.meter_id = meter.id;
    sub.region = meter.region;
    sub.delivered.assign(n, true);
    for (int i = 0; i < n; ++i) {
      sub.delivered[i] = scenario.fault_mode == FaultMode::kServer
                             ? !server_dead[i]
                             : !drop_rng.Bernoulli(scenario.fault_rate);
    }
    Prng deal_rng(MixSeed(scenario.seed, kDealTag, meter.id));
    sub.shares.reserve(tuples[k].values.size());
    for (Fp v : tuples[k].values) {
      auto shares = ShareSecret(v, params, deal_rng);
      std::vector<std::optional<Share>> slots(n);
      for (int i = 0; i < n; ++i) {
        if (sub.delivered[i]) slots[i] = shares[i];
      }
      sub.shares.push_back(std::move(slots));
    }
    const auto delivered = static_cast<uint64_t>(
        std::count(sub.delivered.begin(), sub.delivered.end(), true));
    result.bundles_sent += n;
    result.bundles_delivered += delivered;
    result.shares_sent += n * tuples[k].values.size();
    result.shares_delivered += delivered * tuples[k].values.size();
    // A whole-server outage is never silently absorbed: those meters stay in
    // and the shortfall surfaces as kInsufficientShares downstream.
    if (scenario.fault_mode == FaultMode::kBundle &&
        delivered < static_cast<uint64_t>(params.t) + 1) {
      result.lost_meters.push_back(meter.id);
      continue;
    }
    result.submissions.push_back(std::move(sub));
  }
  return result;
}

}  // namespace metershare
