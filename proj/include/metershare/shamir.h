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

#ifndef METERSHARE_SHAMIR_H_
#define METERSHARE_SHAMIR_H_

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "metershare/field.h"
#include "metershare/prng.h"

namespace metershare {

// One party's view of a secret: the sharing polynomial evaluated at the
// party's index. Wire form is 1 byte party, 1 byte degree, 8 bytes value.
struct Share {
  static constexpr std::size_t kSerializedBytes = 2 + Fp::kSerializedBytes;

  uint8_t party = 0;  // evaluation point, 1..n
  Fp value;
  uint8_t degree = 0;

  friend bool operator==(const Share&, const Share&) = default;

  std::array<uint8_t, kSerializedBytes> ToBytes() const;
  static Share FromBytes(std::span<const uint8_t, kSerializedBytes> bytes);
};

// n parties, polynomials of degree t. Honest-majority multiplication needs
// n >= 2t + 1.
struct SharingParams {
  int n = 3;
  int t = 1;

  // Throws Error(kInvalidParams).
  void Validate() const;
};

enum class ConsistencyCheck {
  kNone,
  // Every share beyond the first t+1 must lie on the interpolated
  // polynomial; otherwise kInconsistentShares.
  kDetect,
};

// Shares of a uniformly random degree-t polynomial with f(0) = secret,
// evaluated at 1..n.
std::vector<Share> ShareSecret(Fp secret, const SharingParams& params,
                               Prng& rng);

// Deterministic variant: `coefficients` are f_1..f_t (f_0 is the secret).
// Passing all zeros with secret 0 yields the all-zero sharing.
std::vector<Share> ShareWithCoefficients(Fp secret,
                                         std::span<const Fp> coefficients,
                                         const SharingParams& params);

// Lagrange interpolation at 0. Needs >= t+1 shares with distinct parties and
// a common degree.
Fp Reconstruct(std::span<const Share> shares,
               ConsistencyCheck check = ConsistencyCheck::kNone);

// Lagrange basis coefficients at x for the given distinct nonzero points.
std::vector<Fp> LagrangeCoefficients(std::span<const Fp> points, Fp x);

// Interpolates the unique polynomial through (x_i, y_i) and evaluates at x.
Fp InterpolateAt(std::span<const Fp> xs, std::span<const Fp> ys, Fp x);

Share AddLocal(const Share& a, const Share& b);
Share AddConst(const Share& a, Fp c);
Share ScaleLocal(const Share& a, Fp c);

// Constructive form of t-privacy: given at most t shares, returns a full
// sharing of `alternative` (degree t) that agrees with every given share.
std::vector<Share> ExtendToSecret(std::span<const Share> known, Fp alternative,
                                  const SharingParams& params);

// n per-party slots of one shared value; a slot is empty when that party
// never received or has lost its share.
struct Sharing {
  std::vector<std::optional<Fp>> slots;
  uint8_t degree = 0;

  std::size_t PresentCount() const;
  std::vector<Share> PresentShares() const;
};

Sharing AddSharings(const Sharing& a, const Sharing& b);
Sharing ZeroSharing(int n, uint8_t degree);

}  // namespace metershare

#endif  // METERSHARE_SHAMIR_H_
