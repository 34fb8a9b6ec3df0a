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

#include <string>

#include "metershare/error.h"

namespace metershare {

namespace {

// Sets the engine phase for the duration of a scope.
class ScopedPhase {
 public:
  ScopedPhase(Engine& engine, std::string phase)
      : engine_(engine), saved_(engine.phase()) {
    engine_.SetPhase(std::move(phase));
  }
  ~ScopedPhase() { engine_.SetPhase(saved_); }

 private:
  Engine& engine_;
  std::string saved_;
};

Handle SumHandles(Engine& engine, std::span<const Handle> terms) {
  std::vector<Fp> ones(terms.size(), Fp::One());
  return engine.LinearCombination(terms, ones);
}

std::vector<Handle> NaaStream(Engine& engine, std::span<const NaaTuple> batch,
                              std::span<const uint64_t> suppliers, bool import) {
  const std::size_t n_s = suppliers.size();
  std::vector<EqualityQuery> queries;
  queries.reserve(batch.size() * n_s);
  for (const NaaTuple& tuple : batch) {
    const BitSharedId& id = import ? tuple.imp_supplier : tuple.exp_supplier;
    for (uint64_t s : suppliers) queries.push_back({&id, s});
  }
  const auto matches = EqualsPublicBatch(engine, queries);

  std::vector<std::pair<Handle, Handle>> pairs;
  pairs.reserve(matches.size());
  for (std::size_t k = 0; k < batch.size(); ++k) {
    const Handle energy = import ? batch[k].imp : batch[k].exp;
    for (std::size_t u = 0; u < n_s; ++u) pairs.emplace_back(matches[k * n_s + u], energy);
  }
  const auto routed = engine.ProductBatch(pairs);

  std::vector<Handle> row;
  for (std::size_t u = 0; u < n_s; ++u) {
    std::vector<Handle> terms;
    for (std::size_t k = 0; k < batch.size(); ++k) terms.push_back(routed[k * n_s + u]);
    row.push_back(SumHandles(engine, terms));
  }
  return row;
}

struct NcaaStreamResult {
  std::vector<Handle> row;
  std::vector<uint64_t> counts;
  PermuteStats network;
};

NcaaStreamResult NcaaStream(Engine& engine, std::span<const NaaTuple> batch,
                            std::span<const uint64_t> suppliers, bool import) {
  const std::string base = import ? "ncaa/imp" : "ncaa/exp";
  NcaaStreamResult result;
  std::vector<TupleRow> rows;
  {
    ScopedPhase phase(engine, base);
    for (const NaaTuple& tuple : batch) {
      const BitSharedId& id = import ? tuple.imp_supplier : tuple.exp_supplier;
      rows.push_back({{ComposeBits(engine, id), import ? tuple.imp : tuple.exp}});
    }
    rows = ObliviousPermute(engine, std::move(rows), &result.network);
  }

  std::vector<Handle> ids;
  for (const TupleRow& r : rows) ids.push_back(r.items[0]);
  std::vector<Fp> opened;
  {
    ScopedPhase phase(engine, base + "/open");
    opened = engine.OpenBatch(ids, OpenKind::kData);
  }

  std::vector<std::vector<Handle>> buckets(suppliers.size());
  result.counts.assign(suppliers.size(), 0);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    std::size_t u = 0;
    while (u < suppliers.size() && Fp(suppliers[u]) != opened[k]) ++u;
    if (u == suppliers.size()) {
      throw Error(ErrorCode::kOpenedIdInvalid,
                  "opened supplier ID " + std::to_string(opened[k].value()) +
                      " matches no supplier");
    }
    buckets[u].push_back(rows[k].items[1]);
    ++result.counts[u];
  }
  for (const auto& bucket : buckets) result.row.push_back(SumHandles(engine, bucket));
  return result;
}

}  // namespace

RegionRow NaaRegion(Engine& engine, std::span<const NaaTuple> batch,
                    std::span<const uint64_t> suppliers) {
  RegionRow row;
  {
    ScopedPhase phase(engine, "naa/imp");
    row.imp = NaaStream(engine, batch, suppliers, true);
  }
  {
    ScopedPhase phase(engine, "naa/exp");
    row.exp = NaaStream(engine, batch, suppliers, false);
  }
  return row;
}

NcaaResult NcaaRegion(Engine& engine, std::span<const NaaTuple> batch,
                      std::span<const uint64_t> suppliers) {
  NcaaResult result;
  auto imp = NcaaStream(engine, batch, suppliers, true);
  auto exp = NcaaStream(engine, batch, suppliers, false);
  result.row.imp = std::move(imp.row);
  result.row.exp = std::move(exp.row);
  result.imp_counts = std::move(imp.counts);
  result.exp_counts = std::move(exp.counts);
  result.imp_network = imp.network;
  result.exp_network = exp.network;
  return result;
}

RegionRow NiaaRegion(Engine& engine, std::span<const NiaaTuple> batch,
                     int n_suppliers) {
  ScopedPhase phase(engine, "niaa");
  const auto width = static_cast<std::size_t>(n_suppliers);
  for (const NiaaTuple& tuple : batch) {
    if (tuple.imp.size() != width || tuple.exp.size() != width) {
      throw Error(ErrorCode::kVectorLengthMismatch,
                  "one-hot vectors must have length " + std::to_string(n_suppliers));
    }
  }
  RegionRow row;
  for (std::size_t u = 0; u < width; ++u) {
    std::vector<Handle> imp_terms, exp_terms;
    for (const NiaaTuple& tuple : batch) {
      imp_terms.push_back(tuple.imp[u]);
      exp_terms.push_back(tuple.exp[u]);
    }
    row.imp.push_back(SumHandles(engine, imp_terms));
    row.exp.push_back(SumHandles(engine, exp_terms));
  }
  return row;
}

SharedRow ExportRow(const Engine& engine, const RegionRow& row) {
  SharedRow out;
  for (Handle h : row.imp) out.imp.push_back(engine.Export(h));
  for (Handle h : row.exp) out.exp.push_back(engine.Export(h));
  return out;
}

SharedRow ZeroRow(int n_servers, int degree, int n_suppliers) {
  SharedRow row;
  const Sharing zero = ZeroSharing(n_servers, static_cast<uint8_t>(degree));
  row.imp.assign(n_suppliers, zero);
  row.exp.assign(n_suppliers, zero);
  return row;
}

SharedAggregates GridAggregate(std::span<const SharedRow> rows) {
  if (rows.empty()) throw Error(ErrorCode::kInvalidParams, "no regions");
  SharedAggregates agg;
  agg.n_dno = static_cast<int>(rows.size());
  agg.n_suppliers = static_cast<int>(rows.front().imp.size());
  const Sharing& sample = rows.front().imp.empty() ? Sharing{} : rows.front().imp.front();
  const Sharing zero = ZeroSharing(static_cast<int>(sample.slots.size()), sample.degree);

  agg.supplier_imp.assign(agg.n_suppliers, zero);
  agg.supplier_exp.assign(agg.n_suppliers, zero);
  agg.grid_imp = zero;
  agg.grid_exp = zero;
  for (const SharedRow& row : rows) {
    if (row.imp.size() != static_cast<std::size_t>(agg.n_suppliers) ||
        row.exp.size() != row.imp.size()) {
      throw Error(ErrorCode::kVectorLengthMismatch, "region rows differ in width");
    }
    agg.imp.push_back(row.imp);
    agg.exp.push_back(row.exp);
    Sharing region_imp = zero, region_exp = zero;
    for (int u = 0; u < agg.n_suppliers; ++u) {
      region_imp = AddSharings(region_imp, row.imp[u]);
      region_exp = AddSharings(region_exp, row.exp[u]);
      agg.supplier_imp[u] = AddSharings(agg.supplier_imp[u], row.imp[u]);
      agg.supplier_exp[u] = AddSharings(agg.supplier_exp[u], row.exp[u]);
    }
    agg.grid_imp = AddSharings(agg.grid_imp, region_imp);
    agg.grid_exp = AddSharings(agg.grid_exp, region_exp);
    agg.region_imp.push_back(std::move(region_imp));
    agg.region_exp.push_back(std::move(region_exp));
  }
  return agg;
}

AggregateMatrix AggregateMatrix::FromCells(int n_dno, int n_suppliers,
                                           std::vector<uint64_t> imp,
                                           std::vector<uint64_t> exp) {
  AggregateMatrix m;
  m.n_dno = n_dno;
  m.n_suppliers = n_suppliers;
  m.imp = std::move(imp);
  m.exp = std::move(exp);
  m.region_imp.assign(n_dno, 0);
  m.region_exp.assign(n_dno, 0);
  m.supplier_imp.assign(n_suppliers, 0);
  m.supplier_exp.assign(n_suppliers, 0);
  for (int j = 1; j <= n_dno; ++j) {
    for (int u = 1; u <= n_suppliers; ++u) {
      m.region_imp[j - 1] += m.ImpAt(j, u);
      m.region_exp[j - 1] += m.ExpAt(j, u);
      m.supplier_imp[u - 1] += m.ImpAt(j, u);
      m.supplier_exp[u - 1] += m.ExpAt(j, u);
      m.grid_imp += m.ImpAt(j, u);
      m.grid_exp += m.ExpAt(j, u);
    }
  }
  return m;
}

bool AggregateMatrix::TotalsConsistent() const {
  uint64_t ri = 0, re = 0, si = 0, se = 0;
  for (uint64_t v : region_imp) ri += v;
  for (uint64_t v : region_exp) re += v;
  for (uint64_t v : supplier_imp) si += v;
  for (uint64_t v : supplier_exp) se += v;
  return ri == grid_imp && si == grid_imp && re == grid_exp && se == grid_exp;
}

std::string_view RoleName(Role role) {
  switch (role) {
    case Role::kTso: return "tso";
    case Role::kDno: return "dno";
    case Role::kSupplier: return "supplier";
  }
  return "?";
}

std::string RecipientBundle::Key() const {
  if (role == Role::kTso) return "tso";
  return std::string(RoleName(role)) + "_" + std::to_string(index);
}

std::vector<RecipientBundle> DistributeOutputs(const SharedAggregates& aggregates,
                                               CostMeter& meter,
                                               Transcript* transcript) {
  auto& counters = meter.At("output");
  const int n_s = aggregates.n_suppliers;

  auto endpoint_of = [](Role role, int index) {
    switch (role) {
      case Role::kTso: return Endpoint{Endpoint::Kind::kTso, 0};
      case Role::kDno: return Endpoint{Endpoint::Kind::kDno, static_cast<uint32_t>(index)};
      case Role::kSupplier:
        return Endpoint{Endpoint::Kind::kSupplier, static_cast<uint32_t>(index)};
    }
    return Endpoint{};
  };

  // One cell as received by one recipient: every server holding shares
  // sends its imp and exp share.
  auto receive = [&](Role role, int index, int j, int u) {
    const Sharing* streams[] = {&aggregates.imp[j - 1][u - 1], &aggregates.exp[j - 1][u - 1]};
    uint64_t opened[2];
    for (int s = 0; s < 2; ++s) {
      const auto shares = streams[s]->PresentShares();
      for (const Share& share : shares) {
        counters.messages_to_recipients += 1;
        counters.bytes_to_recipients += Share::kSerializedBytes;
        if (transcript != nullptr) {
          transcript->Add(0, Endpoint::Server(share.party), endpoint_of(role, index),
                          static_cast<uint32_t>((j - 1) * n_s + (u - 1)),
                          Share::kSerializedBytes, "output");
        }
      }
      if (shares.size() < static_cast<std::size_t>(streams[s]->degree) + 1) {
        throw Error(ErrorCode::kInsufficientShares,
                    "recipient " + std::string(RoleName(role)) + " " +
                        std::to_string(index) + " got " + std::to_string(shares.size()) +
                        " shares of cell (" + std::to_string(j) + "," +
                        std::to_string(u) + ")");
      }
      opened[s] = Reconstruct(shares, ConsistencyCheck::kDetect).value();
    }
    return CellValue{j, u, opened[0], opened[1]};
  };

  auto total_of = [](std::string scope, int index, std::span<const CellValue> cells) {
    Fp imp, exp;
    for (const CellValue& c : cells) {
      imp += Fp(c.imp);
      exp += Fp(c.exp);
    }
    return TotalValue{std::move(scope), index, imp.value(), exp.value()};
  };

  std::vector<RecipientBundle> bundles;

  RecipientBundle tso{Role::kTso, 0, {}, {}};
  for (int j = 1; j <= aggregates.n_dno; ++j) {
    for (int u = 1; u <= n_s; ++u) tso.cells.push_back(receive(Role::kTso, 0, j, u));
  }
  for (int j = 1; j <= aggregates.n_dno; ++j) {
    std::vector<CellValue> row(tso.cells.begin() + (j - 1) * n_s, tso.cells.begin() + j * n_s);
    tso.totals.push_back(total_of("region", j, row));
  }
  for (int u = 1; u <= n_s; ++u) {
    std::vector<CellValue> column;
    for (int j = 1; j <= aggregates.n_dno; ++j) column.push_back(tso.cells[(j - 1) * n_s + (u - 1)]);
    tso.totals.push_back(total_of("supplier", u, column));
  }
  tso.totals.push_back(total_of("grid", 0, tso.cells));
  bundles.push_back(std::move(tso));

  for (int j = 1; j <= aggregates.n_dno; ++j) {
    RecipientBundle dno{Role::kDno, j, {}, {}};
    for (int u = 1; u <= n_s; ++u) dno.cells.push_back(receive(Role::kDno, j, j, u));
    dno.totals.push_back(total_of("region", j, dno.cells));
    bundles.push_back(std::move(dno));
  }
  for (int u = 1; u <= n_s; ++u) {
    RecipientBundle supplier{Role::kSupplier, u, {}, {}};
    for (int j = 1; j <= aggregates.n_dno; ++j) {
      supplier.cells.push_back(receive(Role::kSupplier, u, j, u));
    }
    supplier.totals.push_back(total_of("supplier", u, supplier.cells));
    bundles.push_back(std::move(supplier));
  }
  return bundles;
}

AggregateMatrix MatrixFromBundles(std::span<const RecipientBundle> bundles) {
  for (const RecipientBundle& b : bundles) {
    if (b.role != Role::kTso) continue;
    int n_dno = 0, n_s = 0;
    for (const CellValue& c : b.cells) {
      n_dno = std::max(n_dno, c.region);
      n_s = std::max(n_s, c.supplier);
    }
    std::vector<uint64_t> imp(static_cast<std::size_t>(n_dno) * n_s, 0);
    std::vector<uint64_t> exp(imp.size(), 0);
    for (const CellValue& c : b.cells) {
      imp[(c.region - 1) * n_s + (c.supplier - 1)] = c.imp;
      exp[(c.region - 1) * n_s + (c.supplier - 1)] = c.exp;
    }
    return AggregateMatrix::FromCells(n_dno, n_s, std::move(imp), std::move(exp));
  }
  throw Error(ErrorCode::kInvalidParams, "no TSO bundle");
}

}  // namespace metershare
