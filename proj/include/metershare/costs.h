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

#ifndef METERSHARE_COSTS_H_
#define METERSHARE_COSTS_H_

#include <string>
#include <string_view>
#include <vector>

#include "metershare/metering.h"

namespace metershare {

// Analytic cost model of the aggregation protocol and two baselines: TRAD
// (plaintext collection) and DEP2SA (homomorphic encryption). Baselines exist
// here only as formulas.
enum class Protocol { kTrad, kDep2sa, kNaa, kNcaa, kNiaa };
enum class Segment { kSmToDcc, kBetweenDcc, kToRecipients };

inline constexpr Protocol kAllProtocols[] = {Protocol::kTrad, Protocol::kDep2sa,
                                             Protocol::kNaa, Protocol::kNcaa,
                                             Protocol::kNiaa};
inline constexpr Segment kAllSegments[] = {Segment::kSmToDcc, Segment::kBetweenDcc,
                                           Segment::kToRecipients};

std::string_view ProtocolName(Protocol p);
std::string_view SegmentName(Segment s);
// Both throw Error(kUnknownRow).
Protocol ParseProtocol(std::string_view name);
Segment ParseSegment(std::string_view name);
Protocol ProtocolOf(Algorithm a);

// Counts are doubles: grid-scale parameters overflow nothing and the
// formulas are evaluated, not enumerated.
struct CostParams {
  double n_dno = 14;
  double n_suppliers = 10;
  double sigma = 8;           // |s_u|, supplier ID bits
  double meters = 2.2e6;      // |SM_dj|, meters per region
  double data_bits = 32;      // |x|
  double random_bits = 32;    // |r|
  double share_bits = 63;     // |[x]|
  double sym_cipher_bits = 128;   // |c|
  double pk_cipher_bits = 1024;   // |C|
  double per_mult_seconds = 20.8e-6;
  int threads = 1;
  // Recipients fetch from a trusted TSO instead of from every server.
  bool trusted_tso = false;

  // Throws Error(kInvalidParams) naming the field.
  void Validate() const;
};

// Multiplications per region for one aggregation loop (log base 2).
//   NAA:  sigma*m*N_s + m*N_s
//   NCAA: 2*(m*log2(m) + m)
//   NIAA: 0
// Baselines have no multiplications.
double FormulaMults(Protocol p, const CostParams& params);
// NCAA with a Batcher network in place of an n log n one:
// 2*(m*log2(m)^2*3 + m). Other protocols fall back to FormulaMults.
double FormulaMultsBatcher(Protocol p, const CostParams& params);

// Bits on one segment of the architecture. Between-DCC values are per
// region, as the multiplication counts they derive from.
double FormulaComm(Protocol p, Segment s, const CostParams& params);
// Row/column lookup by name; throws Error(kUnknownRow).
double FormulaComm(std::string_view protocol, std::string_view segment,
                   const CostParams& params);

// mult_count * per_mult_seconds / threads.
double ExtrapolateCpu(double mult_count, const CostParams& params);

struct FormulaEntry {
  Protocol protocol;
  Segment segment;
  double bits = 0;
  double mults = 0;         // filled on the between-DCC row only
  double mults_batcher = 0;
  double cpu_seconds = 0;
};

// Every (protocol, segment) cell at one parameter point.
std::vector<FormulaEntry> FormulaTable(const CostParams& params);

// "sm=0.5M:4M:0.5M" style range; K and M suffixes scale by 1e3 and 1e6.
// Throws Error(kInvalidParams).
struct SweepRange {
  std::string field;
  std::vector<double> values;
};
SweepRange ParseSweep(std::string_view spec);
// Applies one sweep value to the named CostParams field.
void ApplySweepValue(CostParams& params, std::string_view field, double value);

}  // namespace metershare

#endif  // METERSHARE_COSTS_H_
