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

#ifndef METERSHARE_AGGREGATION_H_
#define METERSHARE_AGGREGATION_H_

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "metershare/abb.h"
#include "metershare/gates.h"

namespace metershare {

// NAA/NCAA input of one meter inside a region engine.
struct NaaTuple {
  BitSharedId imp_supplier;
  BitSharedId exp_supplier;
  Handle imp;
  Handle exp;
};

// NIAA input: one-hot import and export vectors of length N_s.
struct NiaaTuple {
  std::vector<Handle> imp;
  std::vector<Handle> exp;
};

// Shared per-supplier aggregates of one region.
struct RegionRow {
  std::vector<Handle> imp;
  std::vector<Handle> exp;
};

// Equality-test routing. Per stream the cost is exactly
// |batch| * N_s * (sigma + 1) multiplications, metered under "naa/imp" and
// "naa/exp". An ID matching no supplier lands in no bucket.
RegionRow NaaRegion(Engine& engine, std::span<const NaaTuple> batch,
                    std::span<const uint64_t> suppliers);

struct NcaaResult {
  RegionRow row;
  // What the servers learn: how many meters name each supplier.
  std::vector<uint64_t> imp_counts;
  std::vector<uint64_t> exp_counts;
  PermuteStats imp_network;
  PermuteStats exp_network;
};

// Permute-then-open routing. Each stream is shuffled independently, its
// supplier IDs opened, and payloads added into buckets locally. Throws
// kOpenedIdInvalid if an opened ID matches no supplier.
NcaaResult NcaaRegion(Engine& engine, std::span<const NaaTuple> batch,
                      std::span<const uint64_t> suppliers);

// Share-wise vector sums; no interaction at all. Throws
// kVectorLengthMismatch on a vector of the wrong length.
RegionRow NiaaRegion(Engine& engine, std::span<const NiaaTuple> batch,
                     int n_suppliers);

// A region row lifted out of its engine.
struct SharedRow {
  std::vector<Sharing> imp;
  std::vector<Sharing> exp;
};

SharedRow ExportRow(const Engine& engine, const RegionRow& row);
SharedRow ZeroRow(int n_servers, int degree, int n_suppliers);

// Cells plus every derived total, still shared. Totals are local additions.
struct SharedAggregates {
  int n_dno = 0;
  int n_suppliers = 0;
  std::vector<std::vector<Sharing>> imp;  // [region][supplier]
  std::vector<std::vector<Sharing>> exp;
  std::vector<Sharing> region_imp, region_exp;
  std::vector<Sharing> supplier_imp, supplier_exp;
  Sharing grid_imp, grid_exp;
};

SharedAggregates GridAggregate(std::span<const SharedRow> rows);

// Opened aggregates. Cells are indexed region-major, 0-based.
struct AggregateMatrix {
  int n_dno = 0;
  int n_suppliers = 0;
  std::vector<uint64_t> imp;
  std::vector<uint64_t> exp;
  std::vector<uint64_t> region_imp, region_exp;
  std::vector<uint64_t> supplier_imp, supplier_exp;
  uint64_t grid_imp = 0;
  uint64_t grid_exp = 0;

  uint64_t ImpAt(int region, int supplier) const {
    return imp[(region - 1) * n_suppliers + (supplier - 1)];
  }
  uint64_t ExpAt(int region, int supplier) const {
    return exp[(region - 1) * n_suppliers + (supplier - 1)];
  }

  // Builds the matrix and its totals from cell values.
  static AggregateMatrix FromCells(int n_dno, int n_suppliers,
                                   std::vector<uint64_t> imp,
                                   std::vector<uint64_t> exp);
  // grid = sum of region totals = sum of supplier totals, for both streams.
  bool TotalsConsistent() const;

  friend bool operator==(const AggregateMatrix&, const AggregateMatrix&) = default;
};

enum class Role { kTso, kDno, kSupplier };
std::string_view RoleName(Role role);

struct CellValue {
  int region = 0;
  int supplier = 0;
  uint64_t imp = 0;
  uint64_t exp = 0;

  friend bool operator==(const CellValue&, const CellValue&) = default;
};

struct TotalValue {
  std::string scope;  // "region", "supplier" or "grid"
  int index = 0;      // 0 for grid
  uint64_t imp = 0;
  uint64_t exp = 0;

  friend bool operator==(const TotalValue&, const TotalValue&) = default;
};

// What one output party is entitled to, and nothing else:
//   DNO j: its region total and row {E_{j,u}} for all u.
//   supplier u: its supplier total and column {E_{j,u}} for all j.
//   TSO: every cell, every region and supplier total, and the grid total.
struct RecipientBundle {
  Role role = Role::kTso;
  int index = 0;  // 0 for the TSO
  std::vector<CellValue> cells;
  std::vector<TotalValue> totals;

  std::string Key() const;
  // imp and exp each count once.
  std::size_t ValueCount() const { return 2 * (cells.size() + totals.size()); }

  friend bool operator==(const RecipientBundle&, const RecipientBundle&) = default;
};

// Each server sends the (imp, exp) cell shares a role is entitled to; the
// recipient reconstructs cells from >= t+1 servers and derives its totals.
// Traffic is metered under phase "output". Throws kInsufficientShares.
std::vector<RecipientBundle> DistributeOutputs(const SharedAggregates& aggregates,
                                               CostMeter& meter,
                                               Transcript* transcript = nullptr);

// The TSO bundle holds the full matrix.
AggregateMatrix MatrixFromBundles(std::span<const RecipientBundle> bundles);

}  // namespace metershare

#endif  // METERSHARE_AGGREGATION_H_
