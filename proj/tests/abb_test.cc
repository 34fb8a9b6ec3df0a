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

#include <sstream>

#include <gtest/gtest.h>

#include "metershare/error.h"

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

EngineOptions Options(uint64_t seed, SharingParams params = {}) {
  EngineOptions o;
  o.params = params;
  o.seed = seed;
  return o;
}

TEST(EngineTest, InputOpenRoundTrip) {
  Engine e(Options(1));
  EXPECT_EQ(e.Open(e.Input(Fp(5))), Fp(5));
  EXPECT_EQ(e.Open(e.Add(e.Input(Fp(20)), e.Input(Fp(22)))), Fp(42));
}

TEST(EngineTest, InputCountsOneShareMessagePerServer) {
  Engine e(Options(1));
  e.SetPhase("input");
  e.Input(Fp(5));
  const PhaseCounters* c = e.meter().Find("input");
  ASSERT_NE(c, nullptr);
  EXPECT_EQ(c->messages_sm_to_dcc, 3u);
  EXPECT_EQ(c->bytes_sm_to_dcc, 3u * 10);
  EXPECT_EQ(c->messages_between_dcc, 0u);
}

TEST(EngineTest, ProductValuesAndMeter) {
  Engine e(Options(2));
  const Handle a = e.Input(Fp(3)), b = e.Input(Fp(4)), z = e.Input(Fp(0));
  e.SetPhase("mul");
  const Handle ab = e.Product(a, b);
  const Handle az = e.Product(a, z);
  const PhaseCounters c = *e.meter().Find("mul");
  EXPECT_EQ(c.multiplications, 2u);
  EXPECT_EQ(c.rounds, 2u);
  EXPECT_EQ(c.messages_between_dcc, 2u * 3 * 2);
  EXPECT_EQ(c.bytes_between_dcc, 2u * 3 * 2 * 10);
  EXPECT_EQ(ab.degree, 1);
  EXPECT_EQ(e.Open(ab), Fp(12));
  EXPECT_EQ(e.Open(az), Fp(0));
}

TEST(EngineTest, ProductCorrectOnRandomPairs) {
  Engine e(Options(3));
  Prng rng(4);
  std::vector<std::pair<Handle, Handle>> pairs;
  std::vector<Fp> expect;
  for (int i = 0; i < 1000; ++i) {
    const Fp a = rng.NextField(), b = rng.NextField();
    pairs.emplace_back(e.Input(a), e.Input(b));
    expect.push_back(a * b);
  }
  const uint64_t before = e.round();
  const auto products = e.ProductBatch(pairs);
  EXPECT_EQ(e.round(), before + 1) << "a batch is one round";
  const auto opened = e.OpenBatch(products);
  EXPECT_EQ(opened, expect);
  EXPECT_EQ(e.meter().Total().multiplications, 1000u);
}

TEST(EngineTest, OpenMeter) {
  Engine e(Options(5));
  const Handle h = e.Input(Fp(9));
  e.SetPhase("open");
  EXPECT_EQ(e.Open(h), Fp(9));
  const PhaseCounters c = *e.meter().Find("open");
  EXPECT_EQ(c.opens, 1u);
  EXPECT_EQ(c.MultEquivalents(), 1u);
  EXPECT_EQ(c.messages_between_dcc, 6u);
  ASSERT_EQ(e.opened().size(), 1u);
  EXPECT_EQ(e.opened()[0].value, Fp(9));
  EXPECT_EQ(e.opened()[0].phase, "open");
}

TEST(EngineTest, OpenSurvivesOneFailedServer) {
  Engine e(Options(6));
  const Handle h = e.Input(Fp(123));
  e.FailParty(2);
  EXPECT_TRUE(e.IsFailed(2));
  EXPECT_EQ(e.LiveCount(), 2);
  EXPECT_EQ(e.Open(h), Fp(123));
  // Surviving servers exchange with each other only.
  EXPECT_EQ(e.meter().Total().messages_between_dcc, 2u);
}

TEST(EngineTest, FailureContract) {
  Engine e(Options(7));
  e.FailParty(1);
  EXPECT_EQ(CodeOf([&] { e.FailParty(1); }), ErrorCode::kAlreadyFailed);
  EXPECT_EQ(CodeOf([&] { e.FailParty(3); }), ErrorCode::kTooManyFailures);
  EXPECT_EQ(CodeOf([&] { e.FailParty(4); }), ErrorCode::kInvalidParams);
  EXPECT_EQ(CodeOf([&] { e.FailParty(0); }), ErrorCode::kInvalidParams);
}

TEST(EngineTest, OpenBelowThresholdIsInsufficient) {
  Engine e(Options(8));
  Sharing lone{{Fp(5), std::nullopt, std::nullopt}, 1};
  const Handle h = e.Import(lone);
  EXPECT_EQ(CodeOf([&] { e.Open(h); }), ErrorCode::kInsufficientShares);
}

TEST(EngineTest, ProductNeedsHonestMajorityOfLiveServers) {
  Engine small(Options(9));
  const Handle a = small.Input(Fp(2)), b = small.Input(Fp(3));
  small.FailParty(3);
  EXPECT_EQ(CodeOf([&] { small.Product(a, b); }), ErrorCode::kDegreeTooHigh);

  Engine big(Options(9, {5, 1}));
  const Handle c = big.Input(Fp(2)), d = big.Input(Fp(3));
  big.FailParty(5);
  EXPECT_EQ(big.Open(big.Product(c, d)), Fp(6));
}

TEST(EngineTest, RandomBitRangeMeanAndCost) {
  Engine e(Options(10));
  e.SetPhase("bits");
  const auto bits = e.RandomBits(10000);
  const PhaseCounters c = *e.meter().Find("bits");
  EXPECT_EQ(c.random_bits, 10000u);
  // One squaring and one open per bit; a zero square would add a retry, which
  // has probability about 10^4 / p here.
  EXPECT_EQ(c.multiplications, 10000u);
  EXPECT_EQ(c.opens, 10000u);
  EXPECT_EQ(c.MultEquivalents(), 20000u);
  e.SetPhase("check");
  const auto opened = e.OpenBatch(bits);
  uint64_t ones = 0;
  for (const Fp& v : opened) {
    ASSERT_TRUE(v == Fp(0) || v == Fp(1));
    ones += v.value();
  }
  const double mean = static_cast<double>(ones) / 10000.0;
  EXPECT_GE(mean, 0.47);
  EXPECT_LE(mean, 0.53);
  for (const OpenRecord& r : e.opened()) {
    if (r.phase == "bits") EXPECT_EQ(r.kind, OpenKind::kRandomness);
  }
}

TEST(EngineTest, DeterministicTranscriptsAndCounters) {
  auto run = [](uint64_t seed) {
    Engine e(Options(seed));
    e.SetPhase("p");
    Handle acc = e.Input(Fp(1));
    for (int i = 0; i < 20; ++i) acc = e.Product(acc, e.Input(Fp(i + 2)));
    const auto bits = e.RandomBits(5);
    e.OpenBatch(bits);
    std::ostringstream os;
    e.transcript().WriteRows(os, "r");
    std::vector<std::optional<Fp>> shares;
    for (int party = 1; party <= 3; ++party) shares.push_back(e.PeekShare(acc, party));
    return std::make_tuple(os.str(), e.meter().Total(), shares);
  };
  EXPECT_EQ(run(77), run(77));
  EXPECT_NE(std::get<2>(run(77)), std::get<2>(run(78)));
}

TEST(EngineTest, DegreeStaysAtThreshold) {
  Engine e(Options(11, {5, 2}));
  Handle h = e.Input(Fp(3));
  for (int i = 0; i < 5; ++i) {
    h = e.Product(h, e.Input(Fp(2)));
    ASSERT_EQ(h.degree, 2);
    h = e.AddConst(e.Scale(h, Fp(3)), Fp(1));
    ASSERT_EQ(h.degree, 2);
  }
  EXPECT_EQ(e.RandomBit().degree, 2);
}

TEST(EngineTest, SkippingDegreeReductionIsDetectable) {
  EngineOptions o = Options(12);
  o.skip_degree_reduction = true;
  Engine e(o);
  // Shares stay on the degree-2t product polynomial while the handle claims
  // degree t; the consistency check on open catches it.
  const Handle h = e.Product(e.Input(Fp(3)), e.Input(Fp(5)));
  EXPECT_EQ(CodeOf([&] { e.Open(h); }), ErrorCode::kInconsistentShares);
}

TEST(EngineTest, RecoverMissingShares) {
  Engine e(Options(13));
  Prng dealer(14);
  const auto shares = ShareSecret(Fp(555), {3, 1}, dealer);
  std::vector<std::optional<Share>> slots = {shares[0], std::nullopt, shares[2]};
  e.SetPhase("input");
  const Handle h = e.ImportDealt(slots, Endpoint::Meter(1));
  EXPECT_FALSE(e.PeekShare(h, 2).has_value());
  e.SetPhase("recovery");
  EXPECT_EQ(e.RecoverMissingShares(), 1u);
  const PhaseCounters c = *e.meter().Find("recovery");
  EXPECT_EQ(c.rounds, 2u);
  // |S|(|S|-1) mask messages plus |S| masked shares to the receiver.
  EXPECT_EQ(c.messages_between_dcc, 2u * 1 + 2);
  ASSERT_TRUE(e.PeekShare(h, 2).has_value());
  EXPECT_EQ(*e.PeekShare(h, 2), shares[1].value) << "rebuilt share is the dealt one";
  EXPECT_EQ(e.Open(e.Product(h, e.Input(Fp(2)))), Fp(1110));
  EXPECT_EQ(e.RecoverMissingShares(), 0u);
}

TEST(EngineTest, RecoveryNeedsThresholdHolders) {
  Engine e(Options(15));
  Prng dealer(16);
  const auto shares = ShareSecret(Fp(1), {3, 1}, dealer);
  std::vector<std::optional<Share>> slots = {shares[0], std::nullopt, std::nullopt};
  e.ImportDealt(slots, Endpoint::Meter(1));
  EXPECT_EQ(CodeOf([&] { e.RecoverMissingShares(); }), ErrorCode::kInsufficientShares);
}

TEST(EngineTest, UnknownHandle) {
  Engine e(Options(17));
  EXPECT_EQ(CodeOf([&] { e.Open(Handle{99, 1}); }), ErrorCode::kUnknownHandle);
}

TEST(EngineTest, ExportImportRoundTrip) {
  Engine a(Options(18)), b(Options(19));
  const Sharing s = a.Export(a.Input(Fp(31337)));
  EXPECT_EQ(s.PresentCount(), 3u);
  EXPECT_EQ(b.Open(b.Import(s)), Fp(31337));
}

TEST(TranscriptTest, CsvRows) {
  Transcript t;
  t.Add(4, Endpoint::Server(1), Endpoint::Server(3), 7, 10, "naa/imp");
  t.Add(0, Endpoint::Meter(12), Endpoint::Server(2), 0, 10, "input");
  std::ostringstream os;
  Transcript::WriteHeader(os);
  t.WriteRows(os, "2");
  EXPECT_EQ(os.str(),
            "region,round,sender,receiver,handle,bytes,phase\n"
            "2,4,S1,S3,7,10,naa/imp\n"
            "2,0,SM12,S2,0,10,input\n");
}

TEST(CostMeterTest, PrefixSumsAndMerge) {
  CostMeter m;
  m.At("naa/imp").multiplications = 3;
  m.At("naa/exp").multiplications = 4;
  m.At("ncaa/imp/ctrl").opens = 2;
  EXPECT_EQ(m.SumPrefix("naa").multiplications, 7u);
  EXPECT_EQ(m.SumPrefix("naa/imp").multiplications, 3u);
  EXPECT_EQ(m.SumPrefix("ncaa").MultEquivalents(), 2u);
  CostMeter other;
  other.At("naa/imp").multiplications = 10;
  m.Merge(other);
  EXPECT_EQ(m.Find("naa/imp")->multiplications, 13u);
  EXPECT_EQ(m.Total().MultEquivalents(), 19u);
  EXPECT_EQ(m.Find("missing"), nullptr);
}

}  // namespace
}  // namespace metershare
