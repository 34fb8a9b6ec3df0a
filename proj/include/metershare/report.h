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

#ifndef METERSHARE_REPORT_H_
#define METERSHARE_REPORT_H_

#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "metershare/costs.h"
#include "metershare/protocol.h"

namespace metershare {

// One (protocol, segment) line of a cost report. Empty optionals are cells
// that do not apply, e.g. measured values in a formula-only table.
struct CostRow {
  std::string protocol;
  std::string segment;
  std::string region;  // "all" or the region index
  double n_dno = 0;
  double n_suppliers = 0;
  double sigma = 0;
  std::string sm_per_region;  // ';'-joined when regions differ
  std::optional<double> formula_bits;
  std::optional<double> measured_bits;
  std::optional<double> formula_mults;
  std::optional<double> measured_mult_equivalents;
  std::optional<double> cpu_seconds;
};

struct Verdict {
  std::string name;
  bool exact = false;  // informational rows never fail
  bool pass = true;
  double formula = 0;
  double measured = 0;
  std::string detail;
};

struct CostReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<CostRow> rows;
  std::vector<Verdict> verdicts;

  bool ExactPass() const;
};

// Formula-only table at one parameter point, baselines included.
CostReport FormulaReport(const CostParams& params);
// Formula table repeated over a sweep; one block per value.
CostReport SweepReport(const CostParams& params, const SweepRange& sweep);

// Measured counters of a run next to the formulas. Between-DCC rows are per
// region and cover both streams, so their formula values are twice the
// single-loop figures. `base` supplies widths and the CPU model.
CostReport RunReport(const RunResult& result, const CostParams& base = {});

// Exact-match checks on a run: NAA multiplications per region and stream,
// NIAA zero interaction, recipient traffic; plus informational NCAA ratios.
std::vector<Verdict> Compare(const RunResult& result, const CostParams& base = {});

void WriteCostCsv(std::ostream& os, const CostReport& report);
void WriteCostJson(std::ostream& os, const CostReport& report);
void WriteVerdicts(std::ostream& os, const std::vector<Verdict>& verdicts);

// Run artifacts. None of them carries wall-clock data.
void WriteAggregatesCsv(std::ostream& os, const AggregateMatrix& matrix);
void WriteBundlesJson(std::ostream& os, const std::vector<RecipientBundle>& bundles);
void WriteTranscriptCsv(std::ostream& os, const RunResult& result);

}  // namespace metershare

#endif  // METERSHARE_REPORT_H_
