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

#include "metershare/aggregation.h"

#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "metershare/error.h"
#include "metershare/metering.h"
#include "metershare/prng.h"

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

EngineOptions Options(uint64_t seed) {
  EngineOptions o;
  o.seed = seed;
  return o;
}

struct PlainMeter {
  uint64_t imp_supplier;
  uint64_t exp_supplier;
  uint64_t imp;
  uint64_t exp;
};

std::vector<PlainMeter> RandomMeters(uint64_t seed, int count, int n_suppliers) {
  Prng rng(seed);
  std::vector<PlainMeter> out;
  for (int i = 0; i < count; ++i) {
    out.push_back({1 + rng.NextBelow(n_suppliers), 1 + rng.NextBelow(n_suppliers),
                   rng.NextBelow(10000), rng.NextBelow(4000)});
  }
  return out;
}

std::vector<NaaTuple> InputNaa(Engine& e, const std::vector<PlainMeter>& meters) {
  std::vector<NaaTuple> batch;
  for (const PlainMeter& m : meters) {
    batch.push_back({InputBits(e, m.imp_supplier, 8), InputBits(e, m.exp_supplier, 8),
                     e.Input(Fp(m.imp)), e.Input(Fp(m.exp))});
  }
  return batch;
}

std::vector<Fp> OpenRow(Engine& e, const std::vector<Handle>& row) { return e.OpenBatch(row); }

std::pair<std::vector<Fp>, std::vector<Fp>> Oracle(const std::vector<PlainMeter>& meters,
                                                   int n_suppliers) {
  std::vector<Fp> imp(n_suppliers), exp(n_suppliers);
  for (const PlainMeter& m : meters) {
    imp[m.imp_supplier - 1] += Fp(m.imp);
    exp[m.exp_supplier - 1] += Fp(m.exp);
  }
  return {imp, exp};
}

TEST(NaaTest, SingleMeter) {
  Engine e(Options(1));
  const auto batch = InputNaa(e, {{3, 1, 10, 0}});
  const RegionRow row = NaaRegion(e, batch, SupplierIds(3));
  EXPECT_EQ(OpenRow(e, row.imp), (std::vector<Fp>{Fp(0), Fp(0), Fp(10)}));
  EXPECT_EQ(OpenRow(e, row.exp), (std::vector<Fp>{Fp(0), Fp(0), Fp(0)}));
}

TEST(NaaTest, EmptyBatch) {
  Engine e(Options(2));
  const RegionRow row = NaaRegion(e, {}, SupplierIds(3));
  EXPECT_EQ(OpenRow(e, row.imp), std::vector<Fp>(3));
  EXPECT_EQ(e.meter().SumPrefix("naa").multiplications, 0u);
}

TEST(NaaTest, FiftyMetersFourSuppliers) {
  Engine e(Options(3));
  const auto meters = RandomMeters(4, 50, 4);
  const auto batch = InputNaa(e, meters);
  const RegionRow row = NaaRegion(e, batch, SupplierIds(4));
  const auto [imp, exp] = Oracle(meters, 4);
  EXPECT_EQ(OpenRow(e, row.imp), imp);
  EXPECT_EQ(OpenRow(e, row.exp), exp);
  // 8*50*4 + 50*4 per stream.
  EXPECT_EQ(e.meter().Find("naa/imp")->multiplications, 1800u);
  EXPECT_EQ(e.meter().Find("naa/exp")->multiplications, 1800u);
  EXPECT_EQ(e.meter().Find("naa/imp")->rounds, 5u) << "4 equality layers + 1 routing";
  EXPECT_EQ(e.meter().Find("naa/imp")->opens, 0u);
}

TEST(NaaTest, UnknownIdFallsInNoBucket) {
  Engine e(Options(5));
  const auto batch = InputNaa(e, {{7, 1, 99, 5}});
  const RegionRow row = NaaRegion(e, batch, SupplierIds(3));
  EXPECT_EQ(OpenRow(e, row.imp), std::vector<Fp>(3));
  EXPECT_EQ(OpenRow(e, row.exp), (std::vector<Fp>{Fp(5), Fp(0), Fp(0)}));
}

TEST(NcaaTest, SingleMeterLeaksItsSupplier) {
  Engine e(Options(6));
  const auto batch = InputNaa(e, {{2, 3, 40, 8}});
  const NcaaResult r = NcaaRegion(e, batch, SupplierIds(3));
  EXPECT_EQ(r.imp_counts, (std::vector<uint64_t>{0, 1, 0}));
  EXPECT_EQ(r.exp_counts, (std::vector<uint64_t>{0, 0, 1}));
  EXPECT_EQ(OpenRow(e, r.row.imp), (std::vector<Fp>{Fp(0), Fp(40), Fp(0)}));
  EXPECT_EQ(OpenRow(e, r.row.exp), (std::vector<Fp>{Fp(0), Fp(0), Fp(8)}));
}

TEST(NcaaTest, FiftyMeters) {
  Engine e(Options(7));
  const auto meters = RandomMeters(8, 50, 5);
  const auto batch = InputNaa(e, meters);
  const std::size_t opens_before = e.opened().size();
  const NcaaResult r = NcaaRegion(e, batch, SupplierIds(5));
  const auto [imp, exp] = Oracle(meters, 5);
  std::vector<uint64_t> true_imp(5), true_exp(5);
  for (const PlainMeter& m : meters) {
    ++true_imp[m.imp_supplier - 1];
    ++true_exp[m.exp_supplier - 1];
  }
  EXPECT_EQ(r.imp_counts, true_imp);
  EXPECT_EQ(r.exp_counts, true_exp);

  // Data opens are exactly the supplier IDs, as a multiset, per stream.
  std::multiset<uint64_t> opened_imp, expect_imp;
  for (std::size_t k = opens_before; k < e.opened().size(); ++k) {
    const OpenRecord& rec = e.opened()[k];
    if (rec.kind != OpenKind::kData) continue;
    if (rec.phase == "ncaa/imp/open") opened_imp.insert(rec.value.value());
    else EXPECT_EQ(rec.phase, "ncaa/exp/open");
  }
  for (const PlainMeter& m : meters) expect_imp.insert(m.imp_supplier);
  EXPECT_EQ(opened_imp, expect_imp);

  EXPECT_EQ(OpenRow(e, r.row.imp), imp);
  EXPECT_EQ(OpenRow(e, r.row.exp), exp);

  const uint64_t gates = BatcherGateCount(50);
  EXPECT_EQ(r.imp_network.gates, gates);
  EXPECT_EQ(e.meter().SumPrefix("ncaa/imp").MultEquivalents(), 4 * gates + 50);
  EXPECT_EQ(e.meter().SumPrefix("ncaa/exp").MultEquivalents(), 4 * gates + 50);
  EXPECT_EQ(e.meter().Find("ncaa/imp/open")->opens, 50u);
}

TEST(NcaaTest, OpenedIdMustMatchASupplier) {
  Engine e(Options(9));
  const auto batch = InputNaa(e, {{9, 1, 1, 1}});
  EXPECT_EQ(CodeOf([&] { NcaaRegion(e, batch, SupplierIds(3)); }),
            ErrorCode::kOpenedIdInvalid);
}

std::vector<NiaaTuple> InputNiaa(Engine& e, const std::vector<PlainMeter>& meters, int ns) {
  std::vector<NiaaTuple> batch;
  for (const PlainMeter& m : meters) {
    NiaaTuple t;
    for (int u = 1; u <= ns; ++u) {
      t.imp.push_back(e.Input(Fp(static_cast<uint64_t>(u) == m.imp_supplier ? m.imp : 0)));
      t.exp.push_back(e.Input(Fp(static_cast<uint64_t>(u) == m.exp_supplier ? m.exp : 0)));
    }
    batch.push_back(std::move(t));
  }
  return batch;
}

TEST(NiaaTest, SingleMeter) {
  Engine e(Options(10));
  const auto batch = InputNiaa(e, {{2, 2, 7, 0}}, 3);
  const RegionRow row = NiaaRegion(e, batch, 3);
  EXPECT_EQ(OpenRow(e, row.imp), (std::vector<Fp>{Fp(0), Fp(7), Fp(0)}));
}

TEST(NiaaTest, FiftyMetersWithoutInteraction) {
  Engine e(Options(11));
  const auto meters = RandomMeters(12, 50, 6);
  const auto batch = InputNiaa(e, meters, 6);
  const PhaseCounters before = e.meter().Total();
  const RegionRow row = NiaaRegion(e, batch, 6);
  const PhaseCounters after = e.meter().Total();
  EXPECT_EQ(after.messages_between_dcc, before.messages_between_dcc);
  EXPECT_EQ(after.MultEquivalents(), before.MultEquivalents());
  EXPECT_EQ(after.rounds, before.rounds);
  const auto [imp, exp] = Oracle(meters, 6);
  EXPECT_EQ(OpenRow(e, row.imp), imp);
  EXPECT_EQ(OpenRow(e, row.exp), exp);
}

TEST(NiaaTest, WrongVectorLength) {
  Engine e(Options(13));
  auto batch = InputNiaa(e, {{1, 1, 1, 1}}, 3);
  batch[0].exp.pop_back();
  EXPECT_EQ(CodeOf([&] { NiaaRegion(e, batch, 3); }), ErrorCode::kVectorLengthMismatch);
}

TEST(NiaaTest, SingleServerViewExtendsToAlternativeInputs) {
  // Server 1's shares of every input, plus alternative inputs with the same
  // per-supplier sums, extend to full sharings whose sums reproduce server 1's
  // output shares and the true aggregates.
  Engine e(Options(14));
  const auto meters = RandomMeters(15, 6, 2);
  const auto batch = InputNiaa(e, meters, 2);
  const RegionRow row = NiaaRegion(e, batch, 2);
  const SharingParams params{3, 1};

  // Alternative: rotate the per-meter values within each supplier column.
  for (int u = 0; u < 2; ++u) {
    std::vector<Fp> truth;
    for (const PlainMeter& m : meters) {
      truth.push_back(Fp(static_cast<uint64_t>(u + 1) == m.imp_supplier ? m.imp : 0));
    }
    std::vector<Fp> alt = truth;
    std::rotate(alt.begin(), alt.begin() + 1, alt.end());

    std::vector<Share> sum(3);
    for (int i = 0; i < 3; ++i) sum[i] = Share{static_cast<uint8_t>(i + 1), Fp(), 1};
    for (std::size_t k = 0; k < batch.size(); ++k) {
      const Share mine{1, *e.PeekShare(batch[k].imp[u], 1), 1};
      const Share known[] = {mine};
      const auto ext = ExtendToSecret(known, alt[k], params);
      ASSERT_EQ(ext[0], mine);
      ASSERT_EQ(Reconstruct(ext, ConsistencyCheck::kDetect), alt[k]);
      for (int i = 0; i < 3; ++i) sum[i] = AddLocal(sum[i], ext[i]);
    }
    EXPECT_EQ(sum[0].value, *e.PeekShare(row.imp[u], 1));
    Fp total;
    for (const Fp& v : truth) total += v;
    EXPECT_EQ(Reconstruct(sum, ConsistencyCheck::kDetect), total);
  }
}

SharedRow RowOf(int n_suppliers, const std::vector<uint64_t>& imp,
                const std::vector<uint64_t>& exp, Prng& rng) {
  SharedRow row;
  for (int u = 0; u < n_suppliers; ++u) {
    for (auto [value, target] : {std::pair{imp[u], &row.imp}, std::pair{exp[u], &row.exp}}) {
      Sharing s;
      s.degree = 1;
      for (const Share& sh : ShareSecret(Fp(value), {3, 1}, rng)) s.slots.push_back(sh.value);
      target->push_back(s);
    }
  }
  return row;
}

TEST(GridTest, SingleRegion) {
  Prng rng(16);
  const std::vector<SharedRow> rows = {RowOf(3, {1, 2, 3}, {4, 5, 6}, rng)};
  CostMeter meter;
  const auto bundles = DistributeOutputs(GridAggregate(rows), meter);
  const AggregateMatrix m = MatrixFromBundles(bundles);
  EXPECT_EQ(m.imp, (std::vector<uint64_t>{1, 2, 3}));
  EXPECT_EQ(m.exp, (std::vector<uint64_t>{4, 5, 6}));
  EXPECT_EQ(m.grid_imp, 6u);
  EXPECT_EQ(m.grid_exp, 15u);
  EXPECT_TRUE(m.TotalsConsistent());
}

TEST(GridTest, TwoByTwoRandom) {
  Prng rng(17);
  std::vector<SharedRow> rows;
  std::vector<uint64_t> imp, exp;
  for (int j = 0; j < 2; ++j) {
    std::vector<uint64_t> ri = {rng.NextBelow(1000), rng.NextBelow(1000)};
    std::vector<uint64_t> re = {rng.NextBelow(1000), rng.NextBelow(1000)};
    imp.insert(imp.end(), ri.begin(), ri.end());
    exp.insert(exp.end(), re.begin(), re.end());
    rows.push_back(RowOf(2, ri, re, rng));
  }
  CostMeter meter;
  const AggregateMatrix m = MatrixFromBundles(DistributeOutputs(GridAggregate(rows), meter));
  EXPECT_EQ(m, AggregateMatrix::FromCells(2, 2, imp, exp));
  EXPECT_TRUE(m.TotalsConsistent());
  EXPECT_EQ(m.region_imp[0], imp[0] + imp[1]);
  EXPECT_EQ(m.supplier_exp[1], exp[1] + exp[3]);
}

TEST(GridTest, AllZero) {
  const std::vector<SharedRow> rows = {ZeroRow(3, 1, 2), ZeroRow(3, 1, 2)};
  CostMeter meter;
  const AggregateMatrix m = MatrixFromBundles(DistributeOutputs(GridAggregate(rows), meter));
  EXPECT_EQ(m.imp, std::vector<uint64_t>(4, 0));
  EXPECT_EQ(m.grid_exp, 0u);
}

TEST(DistributeTest, BundlesFollowEntitlements) {
  Prng rng(18);
  const int nd = 3, ns = 4;
  std::vector<SharedRow> rows;
  for (int j = 0; j < nd; ++j) {
    std::vector<uint64_t> imp, exp;
    for (int u = 0; u < ns; ++u) {
      imp.push_back(100 * (j + 1) + u);
      exp.push_back(10 * (j + 1) + u);
    }
    rows.push_back(RowOf(ns, imp, exp, rng));
  }
  CostMeter meter;
  Transcript transcript;
  const auto bundles = DistributeOutputs(GridAggregate(rows), meter, &transcript);
  ASSERT_EQ(bundles.size(), static_cast<std::size_t>(1 + nd + ns));

  const RecipientBundle& tso = bundles[0];
  EXPECT_EQ(tso.Key(), "tso");
  EXPECT_EQ(tso.cells.size(), static_cast<std::size_t>(nd * ns));
  EXPECT_EQ(tso.totals.size(), static_cast<std::size_t>(nd + ns + 1));

  for (int j = 1; j <= nd; ++j) {
    const RecipientBundle& dno = bundles[j];
    EXPECT_EQ(dno.role, Role::kDno);
    EXPECT_EQ(dno.Key(), "dno_" + std::to_string(j));
    ASSERT_EQ(dno.cells.size(), static_cast<std::size_t>(ns));
    for (const CellValue& c : dno.cells) EXPECT_EQ(c.region, j);
    ASSERT_EQ(dno.totals.size(), 1u);
    EXPECT_EQ(dno.totals[0].scope, "region");
    EXPECT_EQ(dno.totals[0].imp, 100u * j * ns + 6);
  }
  for (int u = 1; u <= ns; ++u) {
    const RecipientBundle& sup = bundles[nd + u];
    EXPECT_EQ(sup.role, Role::kSupplier);
    for (const CellValue& c : sup.cells) EXPECT_EQ(c.supplier, u);
    EXPECT_EQ(sup.ValueCount(), 2u * (nd + 1));
  }

  // 3 servers x 2 streams x (TSO + DNOs + suppliers) x N_d x N_s.
  const PhaseCounters c = *meter.Find("output");
  EXPECT_EQ(c.messages_to_recipients, 18u * nd * ns);
  EXPECT_EQ(c.bytes_to_recipients, 18u * nd * ns * 10);
  EXPECT_EQ(transcript.records().size(), 18u * nd * ns);
}

TEST(DistributeTest, TooFewServersIsAnError) {
  SharedRow row = ZeroRow(3, 1, 2);
  for (auto* streams : {&row.imp, &row.exp}) {
    for (Sharing& s : *streams) s.slots[1] = s.slots[2] = std::nullopt;
  }
  const std::vector<SharedRow> rows = {row};
  CostMeter meter;
  EXPECT_EQ(CodeOf([&] { DistributeOutputs(GridAggregate(rows), meter); }),
            ErrorCode::kInsufficientShares);
}

}  // namespace
}  // namespace metershare
