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

#include "metershare/prng.h"

namespace metershare {

uint64_t Prng::NextBelow(uint64_t bound) {
  // Largest multiple of bound that fits in 2^64, minus one.
  const uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
  uint64_t x;
  do {
    x = engine_();
  } while (x > limit);
  return x % bound;
}

Fp Prng::NextField() {
  uint64_t x;
  do {
    x = engine_() >> 1;
  } while (x >= kModulus);
  return Fp(x);
}

double Prng::NextUnit() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

uint64_t MixSeed(uint64_t seed, uint64_t a, uint64_t b) {
  auto mix = [](uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  };
  return mix(mix(mix(seed) ^ a) ^ (b * 0xD1B54A32D192ED03ULL));
}

}  // namespace metershare
