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

#ifndef METERSHARE_GATES_H_
#define METERSHARE_GATES_H_

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "metershare/abb.h"

namespace metershare {

// An integer shared bit by bit, most significant bit first. Every bit opens
// to 0 or 1.
struct BitSharedId {
  std::vector<Handle> bits;

  std::size_t width() const { return bits.size(); }
};

// Shares a public sigma-bit integer with the engine's dealer (test helper
// and input path for engine-level callers).
BitSharedId InputBits(Engine& engine, uint64_t value, int sigma);

// Free linear recomposition sum_i 2^(sigma-1-i) [b_i].
Handle ComposeBits(Engine& engine, const BitSharedId& id);

struct EqualityQuery {
  const BitSharedId* x = nullptr;
  uint64_t y = 0;
};

// Shared indicator of x == y for a public y. Per bit, [x_i] xor y_i is free;
// the xor bits and the initial zero accumulator are OR-reduced pairwise with
// a + b - ab, so a test costs exactly sigma multiplications in
// ceil(log2(sigma + 1)) rounds. The OR result is 1 on mismatch; the returned
// handle is 1 - OR. Throws kLengthMismatch when y needs more than sigma bits.
Handle EqualsPublic(Engine& engine, const BitSharedId& x, uint64_t y);

// Runs many equality tests with their tree layers batched together, so the
// round count stays that of a single test.
std::vector<Handle> EqualsPublicBatch(Engine& engine,
                                      std::span<const EqualityQuery> queries);

// A row moved as a unit by the permutation network.
struct TupleRow {
  std::vector<Handle> items;
};

// Conditional swap of two rows under one shared control bit c:
// x' = x + c (y - x), y' = x + y - x'. One multiplication per item.
std::pair<TupleRow, TupleRow> ExchangeGate(Engine& engine, const TupleRow& a,
                                           const TupleRow& b, Handle ctrl);

// Comparator positions of Batcher's odd-even merge sorting network for n
// wires, layer by layer. Built directly for any n (wires past n are pruned),
// so it stays a sorting network and can realise every permutation.
using NetworkLayer = std::vector<std::pair<std::size_t, std::size_t>>;
std::vector<NetworkLayer> BatcherNetwork(std::size_t n);
std::size_t BatcherGateCount(std::size_t n);

struct PermuteStats {
  std::size_t gates = 0;
  std::size_t layers = 0;
};

// Oblivious shuffle: every gate of the network gets a fresh random shared
// control bit. Control bits are metered under "<phase>/ctrl" and swaps under
// "<phase>/swap". The opened multiset of rows is preserved.
std::vector<TupleRow> ObliviousPermute(Engine& engine, std::vector<TupleRow> rows,
                                       PermuteStats* stats = nullptr);

}  // namespace metershare

#endif  // METERSHARE_GATES_H_
