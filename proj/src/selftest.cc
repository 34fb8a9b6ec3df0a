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

#include "metershare/selftest.h"

#include <exception>
#include <functional>

#include "metershare/abb.h"
#include "metershare/error.h"
#include "metershare/gates.h"
#include "metershare/prng.h"
#include "metershare/protocol.h"
#include "metershare/shamir.h"

namespace metershare {

namespace {

EngineOptions MutatedEngine(const SelftestOptions& o, uint64_t seed) {
  EngineOptions eo;
  eo.seed = seed;
  eo.record_transcript = false;
  eo.flip_equality_polarity = o.flip_equality_polarity;
  eo.skip_degree_reduction = o.skip_degree_reduction;
  return eo;
}

std::string EqualityExhaustive(const SelftestOptions& o) {
  constexpr int kSigma = 6;
  constexpr uint64_t kValues = uint64_t{1} << kSigma;
  Engine engine(MutatedEngine(o, 11));
  for (uint64_t x = 0; x < kValues; ++x) {
    const BitSharedId id = InputBits(engine, x, kSigma);
    std::vector<EqualityQuery> queries;
    for (uint64_t y = 0; y < kValues; ++y) queries.push_back({&id, y});
    const auto eq = EqualsPublicBatch(engine, queries);
    const auto opened = engine.OpenBatch(eq);
    for (uint64_t y = 0; y < kValues; ++y) {
      if (opened[y] != Fp(x == y ? 1 : 0)) {
        return "equals(" + std::to_string(x) + ", " + std::to_string(y) + ") wrong";
      }
    }
  }
  return {};
}

std::string ShamirRoundTrip(const SelftestOptions&) {
  Prng rng(12);
  for (int n = 3; n <= 5; ++n) {
    for (int t = 1; 2 * t + 1 <= n; ++t) {
      const SharingParams params{n, t};
      for (int trial = 0; trial < 20; ++trial) {
        const Fp secret = rng.NextField();
        const auto shares = ShareSecret(secret, params, rng);
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
          if (__builtin_popcount(mask) != t + 1) continue;
          std::vector<Share> subset;
          for (int i = 0; i < n; ++i) {
            if (mask & (1u << i)) subset.push_back(shares[i]);
          }
          if (Reconstruct(subset) != secret) {
            return "n=" + std::to_string(n) + " t=" + std::to_string(t) +
                   " subset " + std::to_string(mask) + " failed";
          }
        }
      }
    }
  }
  return {};
}

std::string ProductDegree(const SelftestOptions& o) {
  Engine engine(MutatedEngine(o, 13));
  Prng rng(14);
  for (int k = 0; k < 200; ++k) {
    const Fp a = rng.NextField(), b = rng.NextField();
    const Handle h = engine.Product(engine.Input(a), engine.Input(b));
    if (h.degree != engine.t()) return "product left degree " + std::to_string(h.degree);
    if (engine.Open(h) != a * b) return "product value wrong";
  }
  return {};
}

std::string AlgorithmEquivalence(const SelftestOptions& o) {
  Scenario s;
  s.n_dno = 2;
  s.n_suppliers = 3;
  s.sm_per_region = {5, 5};
  s.seed = 15;
  RunOptions ro;
  ro.record_transcript = false;
  ro.flip_equality_polarity = o.flip_equality_polarity;
  ro.skip_degree_reduction = o.skip_degree_reduction;
  for (Algorithm a : {Algorithm::kNaa, Algorithm::kNcaa, Algorithm::kNiaa}) {
    s.algorithm = a;
    const RunResult r = RunScenario(s, ro);
    if (!(r.matrix == OracleFor(r))) {
      return std::string(AlgorithmName(a)) + " differs from the plaintext oracle";
    }
  }
  return {};
}

SelftestCheck Check(const std::string& name,
                    const std::function<std::string(const SelftestOptions&)>& fn,
                    const SelftestOptions& o) {
  SelftestCheck c{name, false, {}};
  try {
    c.detail = fn(o);
    c.pass = c.detail.empty();
  } catch (const std::exception& e) {
    c.detail = e.what();
  }
  return c;
}

}  // namespace

bool SelftestResult::ok() const {
  for (const SelftestCheck& c : checks) {
    if (!c.pass) return false;
  }
  return !checks.empty();
}

SelftestResult RunSelftest(const SelftestOptions& options) {
  SelftestResult r;
  r.checks.push_back(Check("equality_exhaustive", EqualityExhaustive, options));
  r.checks.push_back(Check("shamir_round_trip", ShamirRoundTrip, options));
  r.checks.push_back(Check("product_degree", ProductDegree, options));
  r.checks.push_back(Check("algorithm_equivalence", AlgorithmEquivalence, options));
  return r;
}

}  // namespace metershare
