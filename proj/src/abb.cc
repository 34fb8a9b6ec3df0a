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

#include "metershare/abb.h"

#include <algorithm>
#include <string>

#include "metershare/error.h"

namespace metershare {

namespace {

constexpr uint32_t kShareBytes = static_cast<uint32_t>(Share::kSerializedBytes);

}  // namespace

PhaseCounters& PhaseCounters::operator+=(const PhaseCounters& o) {
  multiplications += o.multiplications;
  opens += o.opens;
  rounds += o.rounds;
  random_bits += o.random_bits;
  messages_sm_to_dcc += o.messages_sm_to_dcc;
  bytes_sm_to_dcc += o.bytes_sm_to_dcc;
  messages_between_dcc += o.messages_between_dcc;
  bytes_between_dcc += o.bytes_between_dcc;
  messages_to_recipients += o.messages_to_recipients;
  bytes_to_recipients += o.bytes_to_recipients;
  return *this;
}

PhaseCounters& CostMeter::At(std::string_view phase) {
  auto it = phases_.find(phase);
  if (it == phases_.end()) it = phases_.emplace(std::string(phase), PhaseCounters{}).first;
  return it->second;
}

const PhaseCounters* CostMeter::Find(std::string_view phase) const {
  auto it = phases_.find(phase);
  return it == phases_.end() ? nullptr : &it->second;
}

PhaseCounters CostMeter::Total() const { return SumPrefix(""); }

PhaseCounters CostMeter::SumPrefix(std::string_view prefix) const {
  PhaseCounters sum;
  for (const auto& [name, counters] : phases_) {
    if (std::string_view(name).substr(0, prefix.size()) == prefix) sum += counters;
  }
  return sum;
}

void CostMeter::Merge(const CostMeter& other) {
  for (const auto& [name, counters] : other.phases_) At(name) += counters;
}

std::string Endpoint::ToString() const {
  switch (kind) {
    case Kind::kServer: return "S" + std::to_string(index);
    case Kind::kMeter: return "SM" + std::to_string(index);
    case Kind::kTso: return "TSO";
    case Kind::kDno: return "DNO" + std::to_string(index);
    case Kind::kSupplier: return "SUP" + std::to_string(index);
  }
  return "?";
}

uint16_t Transcript::PhaseIndex(std::string_view phase) {
  // Phases are few and usually repeat, so check the most recent first.
  for (std::size_t i = phase_names_.size(); i-- > 0;) {
    if (phase_names_[i] == phase) return static_cast<uint16_t>(i);
  }
  phase_names_.emplace_back(phase);
  return static_cast<uint16_t>(phase_names_.size() - 1);
}

void Transcript::Add(uint64_t round, Endpoint from, Endpoint to,
                     uint32_t handle, uint32_t bytes, std::string_view phase) {
  records_.push_back({round, from, to, handle, bytes, PhaseIndex(phase)});
}

void Transcript::WriteHeader(std::ostream& os) {
  os << "region,round,sender,receiver,handle,bytes,phase\n";
}

void Transcript::WriteRows(std::ostream& os, std::string_view region) const {
  for (const auto& r : records_) {
    os << region << ',' << r.round << ',' << r.sender.ToString() << ','
       << r.receiver.ToString() << ',' << r.handle << ',' << r.bytes << ','
       << phase_names_[r.phase] << '\n';
  }
}

Engine::Engine(EngineOptions options)
    : options_(std::move(options)),
      dealer_rng_(MixSeed(options_.seed, 0xDEA1)),
      failed_(options_.params.n, false) {
  options_.params.Validate();
  for (int i = 1; i <= options_.params.n; ++i) {
    party_rng_.emplace_back(MixSeed(options_.seed, 0x5E7, static_cast<uint64_t>(i)));
  }
}

int Engine::LiveCount() const {
  return static_cast<int>(std::count(failed_.begin(), failed_.end(), false));
}

std::vector<int> Engine::LiveParties() const {
  std::vector<int> live;
  for (int i = 1; i <= n(); ++i) {
    if (!failed_[i - 1]) live.push_back(i);
  }
  return live;
}

Handle Engine::NewHandle(uint8_t degree) {
  const auto id = static_cast<uint32_t>(degree_.size());
  degree_.push_back(degree);
  values_.resize(values_.size() + n());
  present_.resize(present_.size() + n(), 0);
  return {id, degree};
}

void Engine::CheckHandle(Handle h) const {
  if (h.id >= degree_.size()) {
    throw Error(ErrorCode::kUnknownHandle, "handle " + std::to_string(h.id));
  }
}

void Engine::LogMessage(Endpoint from, Endpoint to, uint32_t handle) {
  if (options_.record_transcript) {
    transcript_.Add(round_, from, to, handle, kShareBytes, phase_);
  }
}

Handle Engine::Input(Fp value) {
  auto shares = ShareSecret(value, params(), dealer_rng_);
  std::vector<std::optional<Share>> per_party(shares.begin(), shares.end());
  return ImportDealt(per_party, Endpoint::Meter(0));
}

Handle Engine::ImportDealt(std::span<const std::optional<Share>> per_party,
                           Endpoint dealer) {
  if (per_party.size() != static_cast<std::size_t>(n())) {
    throw Error(ErrorCode::kLengthMismatch, "one slot per server expected");
  }
  Handle h = NewHandle(static_cast<uint8_t>(t()));
  auto& counters = meter_.At(phase_);
  for (int i = 1; i <= n(); ++i) {
    const auto& share = per_party[i - 1];
    if (!share || failed_[i - 1]) continue;
    if (share->party != i || share->degree != h.degree) {
      throw Error(ErrorCode::kPartyMismatch, "dealt share addressed wrongly");
    }
    values_[Slot(h.id, i)] = share->value;
    present_[Slot(h.id, i)] = 1;
    counters.messages_sm_to_dcc += 1;
    counters.bytes_sm_to_dcc += kShareBytes;
    LogMessage(dealer, Endpoint::Server(i), h.id);
  }
  return h;
}

Handle Engine::Constant(Fp c) {
  Handle h = NewHandle(static_cast<uint8_t>(t()));
  for (int i = 1; i <= n(); ++i) {
    if (failed_[i - 1]) continue;
    values_[Slot(h.id, i)] = c;
    present_[Slot(h.id, i)] = 1;
  }
  return h;
}

Handle Engine::LinearCombination(std::span<const Handle> terms,
                                 std::span<const Fp> weights, Fp constant) {
  if (terms.size() != weights.size()) {
    throw Error(ErrorCode::kLengthMismatch, "terms and weights");
  }
  for (const Handle& h : terms) {
    CheckHandle(h);
    if (h.degree != t()) throw Error(ErrorCode::kDegreeMismatch, "linear op");
  }
  Handle out = NewHandle(static_cast<uint8_t>(t()));
  for (int i = 1; i <= n(); ++i) {
    if (failed_[i - 1]) continue;
    Fp acc = constant;
    bool ok = true;
    for (std::size_t k = 0; k < terms.size() && ok; ++k) {
      ok = Has(terms[k].id, i);
      if (ok) acc += weights[k] * values_[Slot(terms[k].id, i)];
    }
    if (!ok) continue;
    values_[Slot(out.id, i)] = acc;
    present_[Slot(out.id, i)] = 1;
  }
  return out;
}

Handle Engine::Add(Handle a, Handle b) {
  const Handle terms[] = {a, b};
  const Fp weights[] = {Fp::One(), Fp::One()};
  return LinearCombination(terms, weights);
}

Handle Engine::Sub(Handle a, Handle b) {
  const Handle terms[] = {a, b};
  const Fp weights[] = {Fp::One(), -Fp::One()};
  return LinearCombination(terms, weights);
}

Handle Engine::AddConst(Handle a, Fp c) {
  const Handle terms[] = {a};
  const Fp weights[] = {Fp::One()};
  return LinearCombination(terms, weights, c);
}

Handle Engine::Scale(Handle a, Fp c) {
  const Handle terms[] = {a};
  const Fp weights[] = {c};
  return LinearCombination(terms, weights);
}

Handle Engine::Product(Handle a, Handle b) {
  const std::pair<Handle, Handle> pair[] = {{a, b}};
  return ProductBatch(pair).front();
}

std::vector<Handle> Engine::ProductBatch(
    std::span<const std::pair<Handle, Handle>> pairs) {
  const std::vector<int> live = LiveParties();
  const auto live_count = static_cast<int>(live.size());
  for (const auto& [a, b] : pairs) {
    CheckHandle(a);
    CheckHandle(b);
    if (a.degree + b.degree >= live_count) {
      throw Error(ErrorCode::kDegreeTooHigh,
                  "degree " + std::to_string(a.degree + b.degree) +
                      " product needs more than " + std::to_string(live_count) +
                      " live servers");
    }
    for (int i : live) {
      if (!Has(a.id, i) || !Has(b.id, i)) {
        throw Error(ErrorCode::kInsufficientShares,
                    "server " + std::to_string(i) +
                        " lacks an operand share; recover first");
      }
    }
  }
  if (pairs.empty()) return {};

  ++round_;
  auto& counters = meter_.At(phase_);
  counters.multiplications += pairs.size();
  counters.rounds += 1;

  std::vector<Fp> points;
  for (int i : live) points.emplace_back(static_cast<uint64_t>(i));
  const std::vector<Fp> lambda = LagrangeCoefficients(points, Fp::Zero());
  const SharingParams reshare{n(), t()};
  std::vector<Fp> coefficients(t());

  std::vector<Handle> out;
  out.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    Handle c = NewHandle(static_cast<uint8_t>(t()));
    for (int j : live) present_[Slot(c.id, j)] = 1;
    for (std::size_t k = 0; k < live.size(); ++k) {
      const int i = live[k];
      const Fp local = values_[Slot(a.id, i)] * values_[Slot(b.id, i)];
      if (options_.skip_degree_reduction) {
        values_[Slot(c.id, i)] = local;
      } else {
        for (auto& coef : coefficients) coef = party_rng_[i - 1].NextField();
        const auto sub = ShareWithCoefficients(local, coefficients, reshare);
        for (int j : live) values_[Slot(c.id, j)] += lambda[k] * sub[j - 1].value;
      }
      for (int j : live) {
        if (j != i) LogMessage(Endpoint::Server(i), Endpoint::Server(j), c.id);
      }
    }
    const uint64_t messages = static_cast<uint64_t>(live_count) * (live_count - 1);
    counters.messages_between_dcc += messages;
    counters.bytes_between_dcc += messages * kShareBytes;
    out.push_back(c);
  }
  return out;
}

Fp Engine::Open(Handle h, OpenKind kind) {
  const Handle handles[] = {h};
  return OpenBatch(handles, kind).front();
}

std::vector<Fp> Engine::OpenBatch(std::span<const Handle> handles, OpenKind kind) {
  const std::vector<int> live = LiveParties();
  for (const Handle& h : handles) CheckHandle(h);
  if (handles.empty()) return {};

  ++round_;
  auto& counters = meter_.At(phase_);
  counters.opens += handles.size();
  counters.rounds += 1;

  std::vector<Fp> out;
  out.reserve(handles.size());
  for (const Handle& h : handles) {
    std::vector<Share> shares;
    for (int i : live) {
      if (!Has(h.id, i)) continue;
      shares.push_back({static_cast<uint8_t>(i), values_[Slot(h.id, i)], h.degree});
      for (int j : live) {
        if (j == i) continue;
        LogMessage(Endpoint::Server(i), Endpoint::Server(j), h.id);
        counters.messages_between_dcc += 1;
        counters.bytes_between_dcc += kShareBytes;
      }
    }
    if (shares.size() < static_cast<std::size_t>(h.degree) + 1) {
      throw Error(ErrorCode::kInsufficientShares,
                  "handle " + std::to_string(h.id) + " has " +
                      std::to_string(shares.size()) + " live shares");
    }
    const Fp value = Reconstruct(shares, ConsistencyCheck::kDetect);
    opened_.push_back({phase_, h.id, value, kind});
    out.push_back(value);
  }
  return out;
}

std::vector<Handle> Engine::JointRandom(std::size_t count) {
  const std::vector<int> live = LiveParties();
  if (LiveCount() < t() + 1) {
    throw Error(ErrorCode::kInsufficientShares, "too few live servers");
  }
  ++round_;
  auto& counters = meter_.At(phase_);
  counters.rounds += 1;
  std::vector<Handle> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    Handle h = NewHandle(static_cast<uint8_t>(t()));
    for (int j : live) present_[Slot(h.id, j)] = 1;
    for (int i : live) {
      const auto dealt = ShareSecret(party_rng_[i - 1].NextField(), params(),
                                     party_rng_[i - 1]);
      for (int j : live) {
        values_[Slot(h.id, j)] += dealt[j - 1].value;
        if (j != i) {
          LogMessage(Endpoint::Server(i), Endpoint::Server(j), h.id);
          counters.messages_between_dcc += 1;
          counters.bytes_between_dcc += kShareBytes;
        }
      }
    }
    out.push_back(h);
  }
  return out;
}

Handle Engine::RandomBit() { return RandomBits(1).front(); }

std::vector<Handle> Engine::RandomBits(std::size_t count) {
  std::vector<Handle> bits;
  bits.reserve(count);
  const Fp half = Fp(2).Inverse();
  while (bits.size() < count) {
    const auto r = JointRandom(count - bits.size());
    std::vector<std::pair<Handle, Handle>> squares_in;
    for (Handle h : r) squares_in.emplace_back(h, h);
    const auto squares = ProductBatch(squares_in);
    const auto opened = OpenBatch(squares, OpenKind::kRandomness);
    for (std::size_t k = 0; k < r.size(); ++k) {
      if (opened[k] == Fp::Zero()) continue;  // r = 0; draw again
      const Fp root_inv = CanonicalSqrt(opened[k]).Inverse();
      // r / root is +-1; map to {0, 1}.
      const Handle terms[] = {r[k]};
      const Fp weights[] = {root_inv * half};
      bits.push_back(LinearCombination(terms, weights, half));
    }
  }
  meter_.At(phase_).random_bits += count;
  return bits;
}

void Engine::FailParty(int party) {
  if (party < 1 || party > n()) {
    throw Error(ErrorCode::kInvalidParams, "no server " + std::to_string(party));
  }
  if (failed_[party - 1]) {
    throw Error(ErrorCode::kAlreadyFailed,
                "server " + std::to_string(party) +
                    " already failed; failures are permanent");
  }
  if (LiveCount() - 1 < t() + 1) {
    throw Error(ErrorCode::kTooManyFailures,
                "failing server " + std::to_string(party) + " leaves fewer than t+1");
  }
  failed_[party - 1] = true;
}

std::size_t Engine::RecoverMissingShares() {
  const std::vector<int> live = LiveParties();
  struct Missing {
    uint32_t id;
    int party;
    std::vector<int> holders;
  };
  std::vector<Missing> work;
  for (uint32_t id = 0; id < degree_.size(); ++id) {
    std::vector<int> holders;
    for (int i : live) {
      if (Has(id, i)) holders.push_back(i);
    }
    if (holders.size() == live.size()) continue;
    if (holders.size() < static_cast<std::size_t>(degree_[id]) + 1) {
      throw Error(ErrorCode::kInsufficientShares,
                  "value " + std::to_string(id) + " has " +
                      std::to_string(holders.size()) + " shares, need " +
                      std::to_string(degree_[id] + 1));
    }
    for (int k : live) {
      if (!Has(id, k)) work.push_back({id, k, holders});
    }
  }
  if (work.empty()) return 0;

  // Round 1: holders jointly share a mask g with g(k) = 0.
  // Round 2: each holder sends f(i) + g(i) to k, which interpolates at k.
  round_ += 2;
  auto& counters = meter_.At(phase_);
  counters.rounds += 2;
  for (const Missing& m : work) {
    const uint8_t degree = degree_[m.id];
    const Fp target(static_cast<uint64_t>(m.party));
    std::vector<Fp> mask(m.holders.size());
    for (int dealer : m.holders) {
      // g_dealer(x) = (x - k) * q(x), q random of degree t-1.
      std::vector<Fp> q(degree);
      for (auto& c : q) c = party_rng_[dealer - 1].NextField();
      for (std::size_t h = 0; h < m.holders.size(); ++h) {
        const Fp x(static_cast<uint64_t>(m.holders[h]));
        Fp qx;
        for (auto it = q.rbegin(); it != q.rend(); ++it) qx = qx * x + *it;
        mask[h] += (x - target) * qx;
        if (m.holders[h] != dealer) {
          LogMessage(Endpoint::Server(dealer), Endpoint::Server(m.holders[h]), m.id);
          counters.messages_between_dcc += 1;
          counters.bytes_between_dcc += kShareBytes;
        }
      }
    }
    std::vector<Fp> xs, ys;
    for (std::size_t h = 0; h < m.holders.size(); ++h) {
      const int i = m.holders[h];
      LogMessage(Endpoint::Server(i), Endpoint::Server(m.party), m.id);
      counters.messages_between_dcc += 1;
      counters.bytes_between_dcc += kShareBytes;
      if (xs.size() < static_cast<std::size_t>(degree) + 1) {
        xs.emplace_back(static_cast<uint64_t>(i));
        ys.push_back(values_[Slot(m.id, i)] + mask[h]);
      }
    }
    values_[Slot(m.id, m.party)] = InterpolateAt(xs, ys, target);
    present_[Slot(m.id, m.party)] = 1;
  }
  return work.size();
}

Sharing Engine::Export(Handle h) const {
  CheckHandle(h);
  Sharing s;
  s.degree = h.degree;
  s.slots.resize(n());
  for (int i = 1; i <= n(); ++i) {
    if (Has(h.id, i) && !failed_[i - 1]) s.slots[i - 1] = values_[Slot(h.id, i)];
  }
  return s;
}

Handle Engine::Import(const Sharing& sharing) {
  if (sharing.slots.size() != static_cast<std::size_t>(n())) {
    throw Error(ErrorCode::kLengthMismatch, "sharing width");
  }
  Handle h = NewHandle(sharing.degree);
  for (int i = 1; i <= n(); ++i) {
    if (sharing.slots[i - 1] && !failed_[i - 1]) {
      values_[Slot(h.id, i)] = *sharing.slots[i - 1];
      present_[Slot(h.id, i)] = 1;
    }
  }
  return h;
}

std::optional<Fp> Engine::PeekShare(Handle h, int party) const {
  CheckHandle(h);
  if (!Has(h.id, party)) return std::nullopt;
  return values_[Slot(h.id, party)];
}

}  // namespace metershare
