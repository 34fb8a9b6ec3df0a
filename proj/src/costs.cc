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

#include "metershare/costs.h"

#include <cmath>
#include <string>

#include "metershare/error.h"

namespace metershare {

namespace {

[[noreturn]] void UnknownRow(const std::string& what) {
  throw Error(ErrorCode::kUnknownRow, what);
}

[[noreturn]] void BadParam(const std::string& what) {
  throw Error(ErrorCode::kInvalidParams, what);
}

double ParseQuantity(std::string_view text) {
  if (text.empty()) BadParam("empty sweep bound");
  double scale = 1;
  const char last = text.back();
  if (last == 'K' || last == 'k') scale = 1e3;
  if (last == 'M' || last == 'm') scale = 1e6;
  if (scale != 1) text.remove_suffix(1);
  try {
    std::size_t used = 0;
    const std::string s(text);
    const double v = std::stod(s, &used);
    if (used != s.size()) BadParam("bad number '" + s + "' in sweep");
    return v * scale;
  } catch (const std::logic_error&) {
    BadParam("bad number '" + std::string(text) + "' in sweep");
  }
}

}  // namespace

std::string_view ProtocolName(Protocol p) {
  switch (p) {
    case Protocol::kTrad: return "trad";
    case Protocol::kDep2sa: return "dep2sa";
    case Protocol::kNaa: return "naa";
    case Protocol::kNcaa: return "ncaa";
    case Protocol::kNiaa: return "niaa";
  }
  return "?";
}

std::string_view SegmentName(Segment s) {
  switch (s) {
    case Segment::kSmToDcc: return "sm_to_dcc";
    case Segment::kBetweenDcc: return "between_dcc";
    case Segment::kToRecipients: return "to_recipients";
  }
  return "?";
}

Protocol ParseProtocol(std::string_view name) {
  for (Protocol p : kAllProtocols) {
    if (ProtocolName(p) == name) return p;
  }
  UnknownRow("no protocol row '" + std::string(name) + "'");
}

Segment ParseSegment(std::string_view name) {
  for (Segment s : kAllSegments) {
    if (SegmentName(s) == name) return s;
  }
  UnknownRow("no segment column '" + std::string(name) + "'");
}

Protocol ProtocolOf(Algorithm a) {
  switch (a) {
    case Algorithm::kNaa: return Protocol::kNaa;
    case Algorithm::kNcaa: return Protocol::kNcaa;
    case Algorithm::kNiaa: return Protocol::kNiaa;
  }
  return Protocol::kNaa;
}

void CostParams::Validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0) || !std::isfinite(v)) BadParam(std::string(name) + " must be positive");
  };
  positive(n_dno, "n_dno");
  positive(n_suppliers, "n_suppliers");
  positive(sigma, "sigma");
  positive(meters, "sm");
  positive(data_bits, "x_bits");
  positive(random_bits, "r_bits");
  positive(share_bits, "share_bits");
  positive(sym_cipher_bits, "sym_bits");
  positive(pk_cipher_bits, "pk_bits");
  positive(per_mult_seconds, "per_mult_seconds");
  if (threads < 1) BadParam("threads must be >= 1");
}

double FormulaMults(Protocol p, const CostParams& c) {
  const double m = c.meters;
  switch (p) {
    case Protocol::kNaa: return c.sigma * m * c.n_suppliers + m * c.n_suppliers;
    case Protocol::kNcaa: return m > 0 ? 2 * (m * std::log2(m) + m) : 0;
    default: return 0;
  }
}

double FormulaMultsBatcher(Protocol p, const CostParams& c) {
  if (p != Protocol::kNcaa) return FormulaMults(p, c);
  const double m = c.meters;
  if (m <= 0) return 0;
  const double lg = std::log2(m);
  return 2 * (m * lg * lg * 3 + m);
}

double FormulaComm(Protocol p, Segment s, const CostParams& c) {
  const double nd = c.n_dno, ns = c.n_suppliers, m = c.meters;
  const double x = c.data_bits, r = c.random_bits, sh = c.share_bits;
  const double cs = c.sym_cipher_bits, cp = c.pk_cipher_bits;
  switch (s) {
    case Segment::kSmToDcc:
      switch (p) {
        case Protocol::kTrad: return 2 * nd * m * x;
        case Protocol::kDep2sa: return 2 * nd * m * cp;
        case Protocol::kNaa:
        case Protocol::kNcaa: return 12 * nd * m * sh;
        case Protocol::kNiaa: return 6 * nd * m * ns * sh;
      }
      break;
    case Segment::kBetweenDcc:
      switch (p) {
        case Protocol::kTrad:
        case Protocol::kDep2sa:
        case Protocol::kNiaa: return 0;
        case Protocol::kNaa:
        case Protocol::kNcaa: return 6 * sh * FormulaMults(p, c);
      }
      break;
    case Segment::kToRecipients:
      switch (p) {
        case Protocol::kTrad: return 6 * nd * ns * x;
        case Protocol::kDep2sa: return 2 * nd * ns * (2 * cp + x + r);
        case Protocol::kNaa:
        case Protocol::kNcaa:
        case Protocol::kNiaa:
          if (c.trusted_tso) return 6 * nd * ns * sh + (nd + ns) * cs;
          return 18 * nd * ns * sh;
      }
      break;
  }
  UnknownRow("no such cell");
}

double FormulaComm(std::string_view protocol, std::string_view segment,
                   const CostParams& params) {
  return FormulaComm(ParseProtocol(protocol), ParseSegment(segment), params);
}

double ExtrapolateCpu(double mult_count, const CostParams& params) {
  if (params.threads < 1) BadParam("threads must be >= 1");
  return mult_count * params.per_mult_seconds / params.threads;
}

std::vector<FormulaEntry> FormulaTable(const CostParams& params) {
  params.Validate();
  std::vector<FormulaEntry> table;
  for (Protocol p : kAllProtocols) {
    for (Segment s : kAllSegments) {
      FormulaEntry e{p, s, FormulaComm(p, s, params)};
      if (s == Segment::kBetweenDcc) {
        e.mults = FormulaMults(p, params);
        e.mults_batcher = FormulaMultsBatcher(p, params);
        e.cpu_seconds = ExtrapolateCpu(e.mults, params);
      }
      table.push_back(e);
    }
  }
  return table;
}

SweepRange ParseSweep(std::string_view spec) {
  const auto eq = spec.find('=');
  if (eq == std::string_view::npos) BadParam("sweep must look like field=start:stop:step");
  SweepRange range;
  range.field = std::string(spec.substr(0, eq));
  std::string_view rest = spec.substr(eq + 1);
  const auto c1 = rest.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : rest.find(':', c1 + 1);
  if (c2 == std::string_view::npos) BadParam("sweep must look like field=start:stop:step");
  const double start = ParseQuantity(rest.substr(0, c1));
  const double stop = ParseQuantity(rest.substr(c1 + 1, c2 - c1 - 1));
  const double step = ParseQuantity(rest.substr(c2 + 1));
  if (!(step > 0) || stop < start) BadParam("sweep needs step > 0 and stop >= start");
  // Index-based so rounding never drops the last point.
  const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
  if (count > 100000) BadParam("sweep has too many points");
  for (long i = 0; i < count; ++i) range.values.push_back(start + step * i);
  CostParams probe;
  ApplySweepValue(probe, range.field, start);
  return range;
}

void ApplySweepValue(CostParams& params, std::string_view field, double value) {
  if (field == "sm") params.meters = value;
  else if (field == "n_dno") params.n_dno = value;
  else if (field == "n_suppliers") params.n_suppliers = value;
  else if (field == "sigma") params.sigma = value;
  else if (field == "threads") params.threads = static_cast<int>(value);
  else BadParam("cannot sweep '" + std::string(field) + "'");
}

}  // namespace metershare
