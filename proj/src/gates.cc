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

#include "metershare/gates.h"

#include <algorithm>
#include <string>

#include "metershare/error.h"

namespace metershare {

namespace {

// Restores the engine phase label on scope exit.
class PhaseSuffix {
 public:
  PhaseSuffix(Engine& engine, std::string_view suffix)
      : engine_(engine), saved_(engine.phase()) {
    engine_.SetPhase(saved_ + "/" + std::string(suffix));
  }
  ~PhaseSuffix() { engine_.SetPhase(saved_); }

 private:
  Engine& engine_;
  std::string saved_;
};

}  // namespace

BitSharedId InputBits(Engine& engine, uint64_t value, int sigma) {
  if (sigma < 64 && (value >> sigma) != 0) {
    throw Error(ErrorCode::kIdOverflow, std::to_string(value) + " needs more than " +
                                            std::to_string(sigma) + " bits");
  }
  BitSharedId id;
  for (int i = sigma - 1; i >= 0; --i) {
    id.bits.push_back(engine.Input(Fp((value >> i) & 1)));
  }
  return id;
}

Handle ComposeBits(Engine& engine, const BitSharedId& id) {
  std::vector<Fp> weights;
  Fp w = Fp::One();
  for (std::size_t i = 0; i < id.width(); ++i) {
    weights.push_back(w);
    w = w + w;
  }
  std::reverse(weights.begin(), weights.end());
  return engine.LinearCombination(id.bits, weights);
}

std::vector<Handle> EqualsPublicBatch(Engine& engine,
                                      std::span<const EqualityQuery> queries) {
  // Leaves per query: the zero accumulator followed by [x_i] xor y_i.
  std::vector<std::vector<Handle>> layers(queries.size());
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const BitSharedId& x = *queries[q].x;
    const uint64_t y = queries[q].y;
    const std::size_t sigma = x.width();
    if (sigma == 0 || (sigma < 64 && (y >> sigma) != 0)) {
      throw Error(ErrorCode::kLengthMismatch,
                  "public operand does not fit " + std::to_string(sigma) + " bits");
    }
    auto& leaves = layers[q];
    leaves.push_back(engine.Constant(Fp::Zero()));
    for (std::size_t i = 0; i < sigma; ++i) {
      const bool y_bit = (y >> (sigma - 1 - i)) & 1;
      // x + y - 2xy with y public: x when y = 0, 1 - x when y = 1.
      leaves.push_back(y_bit ? engine.AddConst(engine.Scale(x.bits[i], -Fp::One()), Fp::One())
                             : x.bits[i]);
    }
  }

  // OR-reduce all trees one layer at a time: a | b = a + b - ab.
  while (true) {
    std::vector<std::pair<Handle, Handle>> pairs;
    for (const auto& layer : layers) {
      for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
        pairs.emplace_back(layer[i], layer[i + 1]);
      }
    }
    if (pairs.empty()) break;
    const auto products = engine.ProductBatch(pairs);
    std::size_t next = 0;
    for (auto& layer : layers) {
      std::vector<Handle> reduced;
      for (std::size_t i = 0; i + 1 < layer.size(); i += 2) {
        const Handle terms[] = {layer[i], layer[i + 1], products[next++]};
        const Fp weights[] = {Fp::One(), Fp::One(), -Fp::One()};
        reduced.push_back(engine.LinearCombination(terms, weights));
      }
      if (layer.size() % 2 == 1) reduced.push_back(layer.back());
      layer = std::move(reduced);
    }
  }

  std::vector<Handle> out;
  out.reserve(layers.size());
  for (const auto& layer : layers) {
    const Handle mismatch = layer.front();
    out.push_back(engine.options().flip_equality_polarity
                      ? mismatch
                      : engine.AddConst(engine.Scale(mismatch, -Fp::One()), Fp::One()));
  }
  return out;
}

Handle EqualsPublic(Engine& engine, const BitSharedId& x, uint64_t y) {
  const EqualityQuery q[] = {{&x, y}};
  return EqualsPublicBatch(engine, q).front();
}

std::pair<TupleRow, TupleRow> ExchangeGate(Engine& engine, const TupleRow& a,
                                           const TupleRow& b, Handle ctrl) {
  if (a.items.size() != b.items.size()) {
    throw Error(ErrorCode::kLengthMismatch, "exchange gate rows differ in width");
  }
  std::vector<std::pair<Handle, Handle>> pairs;
  for (std::size_t k = 0; k < a.items.size(); ++k) {
    pairs.emplace_back(ctrl, engine.Sub(b.items[k], a.items[k]));
  }
  const auto deltas = engine.ProductBatch(pairs);
  TupleRow x, y;
  for (std::size_t k = 0; k < a.items.size(); ++k) {
    x.items.push_back(engine.Add(a.items[k], deltas[k]));
    y.items.push_back(engine.Sub(b.items[k], deltas[k]));
  }
  return {std::move(x), std::move(y)};
}

std::vector<NetworkLayer> BatcherNetwork(std::size_t n) {
  std::vector<NetworkLayer> layers;
  for (std::size_t p = 1; p < n; p *= 2) {
    for (std::size_t k = p; k >= 1; k /= 2) {
      NetworkLayer layer;
      for (std::size_t j = k % p; j + k < n; j += 2 * k) {
        for (std::size_t i = 0; i < std::min(k, n - j - k); ++i) {
          if ((i + j) / (2 * p) == (i + j + k) / (2 * p)) {
            layer.emplace_back(i + j, i + j + k);
          }
        }
      }
      if (!layer.empty()) layers.push_back(std::move(layer));
    }
  }
  return layers;
}

std::size_t BatcherGateCount(std::size_t n) {
  std::size_t count = 0;
  for (const auto& layer : BatcherNetwork(n)) count += layer.size();
  return count;
}

std::vector<TupleRow> ObliviousPermute(Engine& engine, std::vector<TupleRow> rows,
                                       PermuteStats* stats) {
  const auto layers = BatcherNetwork(rows.size());
  std::size_t gates = 0;
  for (const auto& layer : layers) gates += layer.size();
  if (stats != nullptr) *stats = {gates, layers.size()};
  if (gates == 0) return rows;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    if (rows[r].items.size() != rows[0].items.size()) {
      throw Error(ErrorCode::kLengthMismatch, "rows differ in width");
    }
  }

  std::vector<Handle> ctrl;
  {
    PhaseSuffix scope(engine, "ctrl");
    ctrl = engine.RandomBits(gates);
  }
  PhaseSuffix scope(engine, "swap");
  std::size_t next_ctrl = 0;
  for (const auto& layer : layers) {
    // All swaps of a layer share one round.
    std::vector<std::pair<Handle, Handle>> pairs;
    for (const auto& [lo, hi] : layer) {
      const Handle c = ctrl[next_ctrl++];
      for (std::size_t k = 0; k < rows[lo].items.size(); ++k) {
        pairs.emplace_back(c, engine.Sub(rows[hi].items[k], rows[lo].items[k]));
      }
    }
    const auto deltas = engine.ProductBatch(pairs);
    std::size_t d = 0;
    for (const auto& [lo, hi] : layer) {
      for (std::size_t k = 0; k < rows[lo].items.size(); ++k, ++d) {
        const Handle x = rows[lo].items[k];
        const Handle y = rows[hi].items[k];
        rows[lo].items[k] = engine.Add(x, deltas[d]);
        rows[hi].items[k] = engine.Sub(y, deltas[d]);
      }
    }
  }
  return rows;
}

}  // namespace metershare
