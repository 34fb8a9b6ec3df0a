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

#include "metershare/field.h"

#include <string>

#include "metershare/error.h"

namespace metershare {

Fp Fp::Pow(uint64_t exponent) const {
  Fp result = One();
  Fp base = *this;
  while (exponent != 0) {
    if (exponent & 1) result *= base;
    base *= base;
    exponent >>= 1;
  }
  return result;
}

Fp Fp::Inverse() const {
  if (value_ == 0) throw Error(ErrorCode::kZeroInverse, "inverse of 0");
  return Pow(kModulus - 2);
}

std::array<uint8_t, Fp::kSerializedBytes> Fp::ToBytes() const {
  std::array<uint8_t, kSerializedBytes> out{};
  for (std::size_t i = 0; i < kSerializedBytes; ++i) {
    out[i] = static_cast<uint8_t>(value_ >> (8 * i));
  }
  return out;
}

Fp Fp::FromBytes(std::span<const uint8_t, kSerializedBytes> bytes) {
  uint64_t v = 0;
  for (std::size_t i = 0; i < kSerializedBytes; ++i) {
    v |= static_cast<uint64_t>(bytes[i]) << (8 * i);
  }
  return Fp(v);
}

std::ostream& operator<<(std::ostream& os, Fp f) { return os << f.value(); }

Fp Add(Fp a, Fp b) { return a + b; }
Fp Mul(Fp a, Fp b) { return a * b; }
Fp Inv(Fp a) { return a.Inverse(); }

Fp CanonicalSqrt(Fp a) {
  static_assert(kModulus % 4 == 3);
  Fp root = a.Pow((kModulus + 1) / 4);
  if (root.value() > (kModulus - 1) / 2) root = -root;
  return root;
}

Fp EncodeReading(Reading r, uint64_t scale) {
  if (scale == 0) throw Error(ErrorCode::kInvalidParams, "scale must be > 0");
  unsigned __int128 product = static_cast<unsigned __int128>(r.raw) * scale;
  if (product >= kModulus) {
    throw Error(ErrorCode::kEncodingOverflow,
                "reading " + std::to_string(r.raw) + " times scale " +
                    std::to_string(scale) + " does not fit the field");
  }
  return Fp(static_cast<uint64_t>(product));
}

uint64_t DecodeReading(Fp encoded, uint64_t scale) {
  if (scale == 0) throw Error(ErrorCode::kInvalidParams, "scale must be > 0");
  return encoded.value() / scale;
}

}  // namespace metershare
