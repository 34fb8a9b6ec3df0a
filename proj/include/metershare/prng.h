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

#ifndef METERSHARE_PRNG_H_
#define METERSHARE_PRNG_H_

#include <cstdint>
#include <random>

#include "metershare/field.h"

namespace metershare {

// Seeded randomness for every protocol step. Built on mt19937_64, whose
// output sequence is fixed by the standard, and avoids the
// implementation-defined std distributions so transcripts replay bit for bit
// across toolchains.
class Prng {
 public:
  explicit Prng(uint64_t seed) : engine_(seed) {}

  uint64_t NextU64() { return engine_(); }
  // Uniform in [0, bound) by rejection; bound > 0.
  uint64_t NextBelow(uint64_t bound);
  // Uniform field element by rejection on 63-bit draws.
  Fp NextField();
  // Uniform in [0, 1) with 53 bits of precision.
  double NextUnit();
  bool Bernoulli(double probability) { return NextUnit() < probability; }

 private:
  std::mt19937_64 engine_;
};

// splitmix64-style mixing used to derive independent sub-seeds, e.g. one per
// region engine or one per (slot, meter) reading stream.
uint64_t MixSeed(uint64_t seed, uint64_t a, uint64_t b = 0);

}  // namespace metershare

#endif  // METERSHARE_PRNG_H_
