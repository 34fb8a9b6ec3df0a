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

#ifndef METERSHARE_FIELD_H_
#define METERSHARE_FIELD_H_

#include <array>
#include <compare>
#include <cstdint>
#include <ostream>
#include <span>

namespace metershare {

// Largest prime below 2^63. Every element serializes to 63 significant bits
// inside one little-endian 8-byte word.
inline constexpr uint64_t kModulus = 9223372036854775783ULL;

// Residue modulo kModulus. The stored value is always reduced.
class Fp {
 public:
  static constexpr uint64_t kModulus = ::metershare::kModulus;
  static constexpr std::size_t kSerializedBytes = 8;

  constexpr Fp() = default;
  // Reduces any 64-bit integer into the field.
  constexpr explicit Fp(uint64_t v) : value_(v % kModulus) {}

  static constexpr Fp Zero() { return Fp(); }
  static constexpr Fp One() { return Fp(1); }

  constexpr uint64_t value() const { return value_; }

  friend constexpr Fp operator+(Fp a, Fp b) {
    uint64_t s = a.value_ + b.value_;  // < 2^64 since both < 2^63
    if (s >= kModulus) s -= kModulus;
    return FromReduced(s);
  }
  friend constexpr Fp operator-(Fp a, Fp b) {
    return FromReduced(a.value_ >= b.value_ ? a.value_ - b.value_
                                            : a.value_ + (kModulus - b.value_));
  }
  friend constexpr Fp operator-(Fp a) { return Fp() - a; }
  friend constexpr Fp operator*(Fp a, Fp b) {
    unsigned __int128 prod =
        static_cast<unsigned __int128>(a.value_) * b.value_;
    return FromReduced(static_cast<uint64_t>(prod % kModulus));
  }
  Fp& operator+=(Fp o) { return *this = *this + o; }
  Fp& operator-=(Fp o) { return *this = *this - o; }
  Fp& operator*=(Fp o) { return *this = *this * o; }

  friend constexpr bool operator==(Fp a, Fp b) = default;
  friend constexpr auto operator<=>(Fp a, Fp b) = default;

  Fp Pow(uint64_t exponent) const;
  // Throws Error(kZeroInverse) for zero.
  Fp Inverse() const;

  std::array<uint8_t, kSerializedBytes> ToBytes() const;
  static Fp FromBytes(std::span<const uint8_t, kSerializedBytes> bytes);

 private:
  static constexpr Fp FromReduced(uint64_t v) {
    Fp f;
    f.value_ = v;
    return f;
  }

  uint64_t value_ = 0;
};

std::ostream& operator<<(std::ostream& os, Fp f);

Fp Add(Fp a, Fp b);
Fp Mul(Fp a, Fp b);
Fp Inv(Fp a);

// Square root for p = 3 (mod 4). Returns the root in [0, (p-1)/2]; the
// caller must ensure `a` is a quadratic residue.
Fp CanonicalSqrt(Fp a);

// Energy amount for one time slot, in scaled watt-hours. The 32-bit width is
// the whole invariant.
struct Reading {
  uint32_t raw = 0;

  friend bool operator==(const Reading&, const Reading&) = default;
};

// raw * scale as a field element. Throws Error(kEncodingOverflow) when the
// product does not fit below the modulus; decoding is exact division.
Fp EncodeReading(Reading r, uint64_t scale = 1);
uint64_t DecodeReading(Fp encoded, uint64_t scale = 1);

}  // namespace metershare

#endif  // METERSHARE_FIELD_H_
