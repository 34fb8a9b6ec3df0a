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

#ifndef METERSHARE_ABB_H_
#define METERSHARE_ABB_H_

#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "metershare/field.h"
#include "metershare/prng.h"
#include "metershare/shamir.h"

namespace metershare {

// Reference to a value secret-shared inside an Engine.
struct Handle {
  uint32_t id = 0;
  uint8_t degree = 0;

  friend bool operator==(const Handle&, const Handle&) = default;
};

struct PhaseCounters {
  uint64_t multiplications = 0;
  uint64_t opens = 0;
  uint64_t rounds = 0;
  uint64_t random_bits = 0;
  uint64_t messages_sm_to_dcc = 0;
  uint64_t bytes_sm_to_dcc = 0;
  uint64_t messages_between_dcc = 0;
  uint64_t bytes_between_dcc = 0;
  uint64_t messages_to_recipients = 0;
  uint64_t bytes_to_recipients = 0;

  // An open is priced like one multiplication.
  uint64_t MultEquivalents() const { return multiplications + opens; }

  PhaseCounters& operator+=(const PhaseCounters& o);
  friend bool operator==(const PhaseCounters&, const PhaseCounters&) = default;
};

// Per-phase counters keyed by a free-form label such as "naa/imp" or
// "ncaa/exp/ctrl". Counters only ever grow.
class CostMeter {
 public:
  PhaseCounters& At(std::string_view phase);
  const PhaseCounters* Find(std::string_view phase) const;
  PhaseCounters Total() const;
  // Sum over every phase whose label starts with `prefix`.
  PhaseCounters SumPrefix(std::string_view prefix) const;
  void Merge(const CostMeter& other);

  const std::map<std::string, PhaseCounters, std::less<>>& phases() const {
    return phases_;
  }

 private:
  std::map<std::string, PhaseCounters, std::less<>> phases_;
};

struct Endpoint {
  enum class Kind : uint8_t { kServer, kMeter, kTso, kDno, kSupplier };

  Kind kind = Kind::kServer;
  uint32_t index = 0;

  static Endpoint Server(int i) { return {Kind::kServer, static_cast<uint32_t>(i)}; }
  static Endpoint Meter(uint32_t i) { return {Kind::kMeter, i}; }

  std::string ToString() const;
  friend bool operator==(const Endpoint&, const Endpoint&) = default;
};

struct TranscriptRecord {
  uint64_t round = 0;
  Endpoint sender;
  Endpoint receiver;
  uint32_t handle = 0;
  uint32_t bytes = 0;
  uint16_t phase = 0;  // index into Transcript::phase_names()
};

// Line-delimited audit log of every share message.
class Transcript {
 public:
  void Add(uint64_t round, Endpoint from, Endpoint to, uint32_t handle,
           uint32_t bytes, std::string_view phase);

  const std::vector<TranscriptRecord>& records() const { return records_; }
  const std::vector<std::string>& phase_names() const { return phase_names_; }

  // CSV rows `region,round,sender,receiver,handle,bytes,phase`; the header is
  // written separately by WriteHeader.
  void WriteRows(std::ostream& os, std::string_view region) const;
  static void WriteHeader(std::ostream& os);

 private:
  uint16_t PhaseIndex(std::string_view phase);

  std::vector<TranscriptRecord> records_;
  std::vector<std::string> phase_names_;
};

enum class OpenKind : uint8_t {
  kData,        // a value derived from protocol inputs
  kRandomness,  // a mask or random square, independent of inputs
};

struct OpenRecord {
  std::string phase;
  uint32_t handle = 0;
  Fp value;
  OpenKind kind = OpenKind::kData;
};

struct EngineOptions {
  SharingParams params;
  uint64_t seed = 0;
  bool record_transcript = true;

  // Mutation hooks for the self-test harness. Never set in normal runs.
  bool skip_degree_reduction = false;
  bool flip_equality_polarity = false;
};

// Arithmetic black box over n simulated servers holding Shamir shares.
// Servers run in lockstep rounds driven by the calling thread; every batch
// of interactive operations costs one round. Linear operations are local
// and free.
class Engine {
 public:
  explicit Engine(EngineOptions options);

  Engine(const Engine&) = delete;
  Engine& operator=(const Engine&) = delete;
  Engine(Engine&&) = default;
  Engine& operator=(Engine&&) = default;

  const SharingParams& params() const { return options_.params; }
  const EngineOptions& options() const { return options_; }
  int n() const { return options_.params.n; }
  int t() const { return options_.params.t; }

  void SetPhase(std::string phase) { phase_ = std::move(phase); }
  const std::string& phase() const { return phase_; }

  // Dealer-side input: shares `value` with the engine's dealer randomness and
  // delivers one share to each live server.
  Handle Input(Fp value);
  // Registers shares produced by an external dealer (a smart meter). Empty
  // slots model shares lost in transit.
  Handle ImportDealt(std::span<const std::optional<Share>> per_party,
                     Endpoint dealer);

  // Local operations.
  Handle Constant(Fp c);
  Handle Add(Handle a, Handle b);
  Handle Sub(Handle a, Handle b);
  Handle AddConst(Handle a, Fp c);
  Handle Scale(Handle a, Fp c);
  Handle LinearCombination(std::span<const Handle> terms,
                           std::span<const Fp> weights, Fp constant = Fp());

  // Local products followed by resharing and Lagrange recombination. One
  // round per batch.
  Handle Product(Handle a, Handle b);
  std::vector<Handle> ProductBatch(std::span<const std::pair<Handle, Handle>> pairs);

  Fp Open(Handle h, OpenKind kind = OpenKind::kData);
  std::vector<Fp> OpenBatch(std::span<const Handle> handles,
                            OpenKind kind = OpenKind::kData);

  // Uniform shared bit: jointly random r, open r^2, divide by the root.
  // Costs one multiplication and one open per bit.
  Handle RandomBit();
  std::vector<Handle> RandomBits(std::size_t count);

  // Crash-stops a server: it sends and receives nothing afterwards. There is
  // no way back. Throws kAlreadyFailed or kTooManyFailures (fewer than t+1
  // live servers would remain).
  void FailParty(int party);
  bool IsFailed(int party) const { return failed_.at(party - 1); }
  int LiveCount() const;

  // Rebuilds shares that live servers never received, using a masked
  // resharing among the servers that hold them. Returns the number rebuilt.
  // Throws kInsufficientShares when a value has fewer than t+1 holders.
  std::size_t RecoverMissingShares();

  Sharing Export(Handle h) const;
  Handle Import(const Sharing& sharing);

  // Audit access to one server's stored share.
  std::optional<Fp> PeekShare(Handle h, int party) const;
  std::size_t handle_count() const { return degree_.size(); }

  const CostMeter& meter() const { return meter_; }
  const Transcript& transcript() const { return transcript_; }
  const std::vector<OpenRecord>& opened() const { return opened_; }
  uint64_t round() const { return round_; }

 private:
  Handle NewHandle(uint8_t degree);
  void CheckHandle(Handle h) const;
  std::size_t Slot(uint32_t id, int party) const {
    return static_cast<std::size_t>(id) * options_.params.n + (party - 1);
  }
  bool Has(uint32_t id, int party) const { return present_[Slot(id, party)] != 0; }
  std::vector<int> LiveParties() const;
  void LogMessage(Endpoint from, Endpoint to, uint32_t handle);
  // Each live server deals a fresh random sharing; the sum is a value no
  // single server knows.
  std::vector<Handle> JointRandom(std::size_t count);

  EngineOptions options_;
  std::string phase_ = "default";
  Prng dealer_rng_;
  std::vector<Prng> party_rng_;
  std::vector<Fp> values_;
  std::vector<uint8_t> present_;
  std::vector<uint8_t> degree_;
  std::vector<bool> failed_;
  uint64_t round_ = 0;
  CostMeter meter_;
  Transcript transcript_;
  std::vector<OpenRecord> opened_;
};

}  // namespace metershare

#endif  // METERSHARE_ABB_H_
