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

#include "metershare/shamir.h"

#include <set>
#include <string>

#include "metershare/error.h"

namespace metershare {

std::array<uint8_t, Share::kSerializedBytes> Share::ToBytes() const {
  std::array<uint8_t, kSerializedBytes> out{};
  out[0] = party;
  out[1] = degree;
  auto v = value.ToBytes();
  std::copy(v.begin(), v.end(), out.begin() + 2);
  return out;
}

Share Share::FromBytes(std::span<const uint8_t, kSerializedBytes> bytes) {
  Share s;
  s.party = bytes[0];
  s.degree = bytes[1];
  s.value = Fp::FromBytes(bytes.subspan<2, Fp::kSerializedBytes>());
  return s;
}

void SharingParams::Validate() const {
  if (t < 1) throw Error(ErrorCode::kInvalidParams, "threshold t must be >= 1");
  if (n < 2 * t + 1) {
    throw Error(ErrorCode::kInvalidParams,
                "need n >= 2t+1, got n=" + std::to_string(n) +
                    " t=" + std::to_string(t));
  }
  if (n > 255) throw Error(ErrorCode::kInvalidParams, "n must fit one byte");
}

std::vector<Share> ShareWithCoefficients(Fp secret,
                                         std::span<const Fp> coefficients,
                                         const SharingParams& params) {
  params.Validate();
  if (coefficients.size() != static_cast<std::size_t>(params.t)) {
    throw Error(ErrorCode::kInvalidParams, "need exactly t coefficients");
  }
  std::vector<Share> shares;
  shares.reserve(params.n);
  for (int i = 1; i <= params.n; ++i) {
    const Fp x(static_cast<uint64_t>(i));
    Fp acc;
    // Horner from the top coefficient down to the secret.
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      acc = acc * x + *it;
    }
    acc = acc * x + secret;
    shares.push_back({static_cast<uint8_t>(i), acc,
                      static_cast<uint8_t>(params.t)});
  }
  return shares;
}

std::vector<Share> ShareSecret(Fp secret, const SharingParams& params,
                               Prng& rng) {
  params.Validate();
  std::vector<Fp> coefficients(params.t);
  for (auto& c : coefficients) c = rng.NextField();
  return ShareWithCoefficients(secret, coefficients, params);
}

std::vector<Fp> LagrangeCoefficients(std::span<const Fp> points, Fp x) {
  std::vector<Fp> out(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    Fp num = Fp::One();
    Fp den = Fp::One();
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      num *= x - points[j];
      den *= points[i] - points[j];
    }
    out[i] = num * den.Inverse();
  }
  return out;
}

Fp InterpolateAt(std::span<const Fp> xs, std::span<const Fp> ys, Fp x) {
  if (xs.size() != ys.size()) {
    throw Error(ErrorCode::kLengthMismatch, "interpolation points");
  }
  auto lambda = LagrangeCoefficients(xs, x);
  Fp acc;
  for (std::size_t i = 0; i < xs.size(); ++i) acc += lambda[i] * ys[i];
  return acc;
}

Fp Reconstruct(std::span<const Share> shares, ConsistencyCheck check) {
  if (shares.empty()) {
    throw Error(ErrorCode::kInsufficientShares, "no shares");
  }
  const uint8_t degree = shares.front().degree;
  std::set<uint8_t> seen;
  for (const Share& s : shares) {
    if (s.degree != degree) {
      throw Error(ErrorCode::kDegreeMismatch, "shares of mixed degree");
    }
    if (s.party == 0 || !seen.insert(s.party).second) {
      throw Error(ErrorCode::kPartyMismatch,
                  "party indices must be distinct and nonzero");
    }
  }
  const std::size_t needed = static_cast<std::size_t>(degree) + 1;
  if (shares.size() < needed) {
    throw Error(ErrorCode::kInsufficientShares,
                "have " + std::to_string(shares.size()) + " shares, need " +
                    std::to_string(needed));
  }
  std::vector<Fp> xs, ys;
  for (std::size_t i = 0; i < needed; ++i) {
    xs.emplace_back(shares[i].party);
    ys.push_back(shares[i].value);
  }
  if (check == ConsistencyCheck::kDetect) {
    for (std::size_t i = needed; i < shares.size(); ++i) {
      if (InterpolateAt(xs, ys, Fp(shares[i].party)) != shares[i].value) {
        throw Error(ErrorCode::kInconsistentShares,
                    "share of party " + std::to_string(shares[i].party) +
                        " is off the interpolated polynomial");
      }
    }
  }
  return InterpolateAt(xs, ys, Fp::Zero());
}

Share AddLocal(const Share& a, const Share& b) {
  if (a.party != b.party) throw Error(ErrorCode::kPartyMismatch, "add_local");
  if (a.degree != b.degree) {
    throw Error(ErrorCode::kDegreeMismatch, "add_local");
  }
  return {a.party, a.value + b.value, a.degree};
}

Share AddConst(const Share& a, Fp c) { return {a.party, a.value + c, a.degree}; }

Share ScaleLocal(const Share& a, Fp c) {
  return {a.party, a.value * c, a.degree};
}

std::vector<Share> ExtendToSecret(std::span<const Share> known, Fp alternative,
                                  const SharingParams& params) {
  params.Validate();
  if (known.size() > static_cast<std::size_t>(params.t)) {
    throw Error(ErrorCode::kInvalidParams,
                "at most t shares can be extended freely");
  }
  std::vector<Fp> xs{Fp::Zero()};
  std::vector<Fp> ys{alternative};
  std::set<uint8_t> used;
  for (const Share& s : known) {
    if (s.party == 0 || s.party > params.n || !used.insert(s.party).second) {
      throw Error(ErrorCode::kPartyMismatch, "bad party index in view");
    }
    xs.emplace_back(s.party);
    ys.push_back(s.value);
  }
  // Fewer than t known points leave free coefficients; pin them to 0 at the
  // lowest unused indices.
  for (int i = 1; i <= params.n && xs.size() < static_cast<std::size_t>(params.t) + 1; ++i) {
    if (used.count(static_cast<uint8_t>(i))) continue;
    xs.emplace_back(static_cast<uint64_t>(i));
    ys.push_back(Fp::Zero());
    used.insert(static_cast<uint8_t>(i));
  }
  std::vector<Share> out;
  for (int i = 1; i <= params.n; ++i) {
    out.push_back({static_cast<uint8_t>(i),
                   InterpolateAt(xs, ys, Fp(static_cast<uint64_t>(i))),
                   static_cast<uint8_t>(params.t)});
  }
  return out;
}

std::size_t Sharing::PresentCount() const {
  std::size_t c = 0;
  for (const auto& s : slots) c += s.has_value();
  return c;
}

std::vector<Share> Sharing::PresentShares() const {
  std::vector<Share> out;
  for (std::size_t i = 0; i < slots.size(); ++i) {
    if (slots[i]) out.push_back({static_cast<uint8_t>(i + 1), *slots[i], degree});
  }
  return out;
}

Sharing AddSharings(const Sharing& a, const Sharing& b) {
  if (a.slots.size() != b.slots.size()) {
    throw Error(ErrorCode::kPartyMismatch, "sharings over different parties");
  }
  if (a.degree != b.degree) throw Error(ErrorCode::kDegreeMismatch, "sharing add");
  Sharing out;
  out.degree = a.degree;
  out.slots.resize(a.slots.size());
  for (std::size_t i = 0; i < a.slots.size(); ++i) {
    if (a.slots[i] && b.slots[i]) out.slots[i] = *a.slots[i] + *b.slots[i];
  }
  return out;
}

Sharing ZeroSharing(int n, uint8_t degree) {
  Sharing s;
  s.degree = degree;
  s.slots.assign(n, Fp::Zero());
  return s;
}

}  // namespace metershare
