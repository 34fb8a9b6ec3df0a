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

#include "metershare/report.h"

#include <cstdio>
#include <string>

#if __has_include("json.hpp")
#include "json.hpp"
#else
#include <nlohmann/json.hpp>
#endif

#include "metershare/field.h"
#include "metershare/gates.h"

namespace metershare {

namespace {

using nlohmann::ordered_json;

std::string Num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

std::string Cell(const std::optional<double>& v) { return v ? Num(*v) : std::string(); }

ordered_json JsonCell(const std::optional<double>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string JoinCounts(const std::vector<uint32_t>& counts) {
  std::string out;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    if (i) out += ';';
    out += std::to_string(counts[i]);
  }
  return out;
}

CostRow BaseRow(std::string_view protocol, std::string_view segment,
                const CostParams& p) {
  CostRow row;
  row.protocol = std::string(protocol);
  row.segment = std::string(segment);
  row.region = "all";
  row.n_dno = p.n_dno;
  row.n_suppliers = p.n_suppliers;
  row.sigma = p.sigma;
  row.sm_per_region = Num(p.meters);
  return row;
}

CostParams ParamsFor(const Scenario& s, const CostParams& base) {
  CostParams p = base;
  p.n_dno = s.n_dno;
  p.n_suppliers = s.n_suppliers;
  p.sigma = s.sigma;
  return p;
}

void AppendFormulaRows(CostReport& report, const CostParams& params) {
  for (const FormulaEntry& e : FormulaTable(params)) {
    CostRow row = BaseRow(ProtocolName(e.protocol), SegmentName(e.segment), params);
    row.formula_bits = e.bits;
    if (e.segment == Segment::kBetweenDcc) {
      row.formula_mults = e.mults;
      row.cpu_seconds = e.cpu_seconds;
    }
    report.rows.push_back(row);
    if (e.protocol == Protocol::kNcaa && e.segment == Segment::kBetweenDcc) {
      CostRow batcher = BaseRow("ncaa_batcher", SegmentName(e.segment), params);
      batcher.formula_mults = e.mults_batcher;
      batcher.formula_bits = 6 * params.share_bits * e.mults_batcher;
      batcher.cpu_seconds = ExtrapolateCpu(e.mults_batcher, params);
      report.rows.push_back(batcher);
    }
  }
}

void FormulaMetadata(CostReport& report, const CostParams& params) {
  report.metadata = {
      {"prime", std::to_string(kModulus)},
      {"share_bits", Num(params.share_bits)},
      {"log_base", "2"},
      {"per_mult_seconds", Num(params.per_mult_seconds)},
      {"threads", std::to_string(params.threads)},
      {"recipients", params.trusted_tso ? "trusted_tso" : "every_server"},
  };
}

Verdict Exact(std::string name, double formula, double measured, std::string detail) {
  return {std::move(name), true, formula == measured, formula, measured, std::move(detail)};
}

Verdict Info(std::string name, double formula, double measured, std::string detail) {
  return {std::move(name), false, true, formula, measured, std::move(detail)};
}

}  // namespace

bool CostReport::ExactPass() const {
  for (const Verdict& v : verdicts) {
    if (v.exact && !v.pass) return false;
  }
  return true;
}

CostReport FormulaReport(const CostParams& params) {
  params.Validate();
  CostReport report;
  FormulaMetadata(report, params);
  AppendFormulaRows(report, params);
  return report;
}

CostReport SweepReport(const CostParams& params, const SweepRange& sweep) {
  CostReport report;
  FormulaMetadata(report, params);
  report.metadata.emplace_back("sweep", sweep.field);
  for (double v : sweep.values) {
    CostParams p = params;
    ApplySweepValue(p, sweep.field, v);
    p.Validate();
    AppendFormulaRows(report, p);
  }
  return report;
}

std::vector<Verdict> Compare(const RunResult& result, const CostParams& base) {
  const Scenario& s = result.scenario;
  const CostParams params = ParamsFor(s, base);
  const bool all_live = result.dead_servers.empty() && result.lost_meters.empty();
  std::vector<Verdict> out;

  for (const RegionOutcome& r : result.regions) {
    const std::string tag = "region" + std::to_string(r.region);
    const double m = r.aggregated;
    for (const char* stream : {"imp", "exp"}) {
      const std::string phase = std::string(AlgorithmName(s.algorithm)) + "/" + stream;
      const PhaseCounters c = r.meter.SumPrefix(phase);
      switch (s.algorithm) {
        case Algorithm::kNaa: {
          CostParams p = params;
          p.meters = m;
          const double f = FormulaMults(Protocol::kNaa, p);
          out.push_back(Exact("naa_mults/" + tag + "/" + stream, f,
                              static_cast<double>(c.multiplications),
                              "sigma*m*N_s + m*N_s per stream"));
          if (all_live && s.n_servers == 3 && r.recovered_shares == 0) {
            out.push_back(Exact("naa_between_bits/" + tag + "/" + stream,
                                FormulaComm(Protocol::kNaa, Segment::kBetweenDcc, p),
                                static_cast<double>(c.messages_between_dcc) * params.share_bits,
                                "6*|[x]|*mults"));
          }
          break;
        }
        case Algorithm::kNcaa: {
          const auto& net = std::string(stream) == "imp" ? r.imp_network : r.exp_network;
          out.push_back(Exact("ncaa_mult_eq/" + tag + "/" + stream,
                              4.0 * static_cast<double>(BatcherGateCount(r.aggregated)) + m,
                              static_cast<double>(c.MultEquivalents()),
                              "4*gates(m) + m with gates = " + std::to_string(net.gates)));
          CostParams p = params;
          p.meters = m;
          // Printed formula covers both streams in one loop; halve it.
          const double headline = FormulaMults(Protocol::kNcaa, p) / 2;
          out.push_back(Info("ncaa_vs_nlogn/" + tag + "/" + stream, headline,
                             static_cast<double>(c.MultEquivalents()),
                             headline > 0 ? "ratio " + Num(c.MultEquivalents() / headline)
                                          : "ratio n/a"));
          break;
        }
        case Algorithm::kNiaa:
          break;
      }
    }
    if (s.algorithm == Algorithm::kNiaa) {
      const PhaseCounters c = r.meter.SumPrefix("niaa");
      out.push_back(Exact("niaa_mults/" + tag, 0, static_cast<double>(c.MultEquivalents()),
                          "no multiplications or opens"));
      out.push_back(Exact("niaa_between_messages/" + tag, 0,
                          static_cast<double>(c.messages_between_dcc),
                          "no server-to-server traffic"));
    }
  }

  const double recipient_bits =
      static_cast<double>(result.output_meter.Total().messages_to_recipients) *
      params.share_bits;
  const double recipient_formula =
      FormulaComm(ProtocolOf(s.algorithm), Segment::kToRecipients, params);
  if (s.n_servers == 3 && result.dead_servers.empty() && !params.trusted_tso) {
    out.push_back(Exact("recipient_bits", recipient_formula, recipient_bits,
                        "18*N_d*N_s*|[x]|"));
  } else {
    out.push_back(Info("recipient_bits", recipient_formula, recipient_bits,
                       "formula assumes three live servers"));
  }
  return out;
}

CostReport RunReport(const RunResult& result, const CostParams& base) {
  const Scenario& s = result.scenario;
  const CostParams params = ParamsFor(s, base);
  const Protocol protocol = ProtocolOf(s.algorithm);
  const auto name = ProtocolName(protocol);

  CostReport report;
  FormulaMetadata(report, params);
  std::string dead, lost = std::to_string(result.lost_meters.size()), incomplete;
  for (int d : result.dead_servers) dead += (dead.empty() ? "" : ";") + std::to_string(d);
  for (const RegionOutcome& r : result.regions) {
    if (!r.complete) incomplete += (incomplete.empty() ? "" : ";") + std::to_string(r.region);
  }
  report.metadata.insert(report.metadata.end(), {
      {"algorithm", std::string(AlgorithmName(s.algorithm))},
      {"byte_accounting", std::string(ByteAccountingName(s.byte_accounting))},
      {"network", "batcher_odd_even_merge_pruned"},
      {"n_servers", std::to_string(s.n_servers)},
      {"threshold", std::to_string(s.threshold)},
      {"seed", std::to_string(s.seed)},
      {"fault_rate", Num(s.fault_rate)},
      {"fault_mode", std::string(FaultModeName(s.fault_mode))},
      {"dead_servers", dead},
      {"lost_meters", lost},
      {"incomplete_regions", incomplete},
  });

  // SMs to servers, summed over regions of possibly different sizes.
  CostRow up = BaseRow(name, SegmentName(Segment::kSmToDcc), params);
  up.sm_per_region = JoinCounts(s.sm_per_region);
  double up_formula = 0;
  for (uint32_t m : s.sm_per_region) {
    CostParams p = params;
    p.n_dno = 1;
    p.meters = m;
    up_formula += FormulaComm(protocol, Segment::kSmToDcc, p);
  }
  up.formula_bits = up_formula;
  if (s.byte_accounting == ByteAccounting::kPaper) {
    const double per_bundle =
        s.algorithm == Algorithm::kNiaa ? 2.0 * s.n_suppliers : 4.0;
    up.measured_bits =
        static_cast<double>(result.bundles_delivered) * per_bundle * params.share_bits;
  } else {
    up.measured_bits = static_cast<double>(result.shares_delivered) * params.share_bits;
  }
  report.rows.push_back(up);

  for (const RegionOutcome& r : result.regions) {
    CostRow row = BaseRow(name, SegmentName(Segment::kBetweenDcc), params);
    row.region = std::to_string(r.region);
    row.sm_per_region = std::to_string(r.meters);
    CostParams p = params;
    p.meters = r.aggregated;
    row.formula_mults = 2 * FormulaMults(protocol, p);
    row.formula_bits = 2 * FormulaComm(protocol, Segment::kBetweenDcc, p);
    const PhaseCounters total = r.meter.Total();
    row.measured_bits = static_cast<double>(total.messages_between_dcc) * params.share_bits;
    row.measured_mult_equivalents = static_cast<double>(total.MultEquivalents());
    row.cpu_seconds = ExtrapolateCpu(*row.measured_mult_equivalents, params);
    report.rows.push_back(row);
  }

  CostRow down = BaseRow(name, SegmentName(Segment::kToRecipients), params);
  down.sm_per_region = JoinCounts(s.sm_per_region);
  down.formula_bits = FormulaComm(protocol, Segment::kToRecipients, params);
  down.measured_bits =
      static_cast<double>(result.output_meter.Total().messages_to_recipients) *
      params.share_bits;
  report.rows.push_back(down);

  report.verdicts = Compare(result, base);
  return report;
}

void WriteCostCsv(std::ostream& os, const CostReport& report) {
  os << "protocol,segment,region,n_dno,n_suppliers,sigma,sm_per_region,formula_bits,"
        "measured_bits,formula_mults,measured_mult_equivalents,cpu_seconds\n";
  for (const CostRow& r : report.rows) {
    os << r.protocol << ',' << r.segment << ',' << r.region << ',' << Num(r.n_dno) << ','
       << Num(r.n_suppliers) << ',' << Num(r.sigma) << ',' << r.sm_per_region << ','
       << Cell(r.formula_bits) << ',' << Cell(r.measured_bits) << ','
       << Cell(r.formula_mults) << ',' << Cell(r.measured_mult_equivalents) << ','
       << Cell(r.cpu_seconds) << '\n';
  }
}

void WriteCostJson(std::ostream& os, const CostReport& report) {
  ordered_json doc;
  ordered_json meta = ordered_json::object();
  for (const auto& [k, v] : report.metadata) meta[k] = v;
  doc["metadata"] = meta;
  ordered_json rows = ordered_json::array();
  for (const CostRow& r : report.rows) {
    rows.push_back({{"protocol", r.protocol},
                    {"segment", r.segment},
                    {"region", r.region},
                    {"n_dno", r.n_dno},
                    {"n_suppliers", r.n_suppliers},
                    {"sigma", r.sigma},
                    {"sm_per_region", r.sm_per_region},
                    {"formula_bits", JsonCell(r.formula_bits)},
                    {"measured_bits", JsonCell(r.measured_bits)},
                    {"formula_mults", JsonCell(r.formula_mults)},
                    {"measured_mult_equivalents", JsonCell(r.measured_mult_equivalents)},
                    {"cpu_seconds", JsonCell(r.cpu_seconds)}});
  }
  doc["rows"] = rows;
  ordered_json verdicts = ordered_json::array();
  for (const Verdict& v : report.verdicts) {
    verdicts.push_back({{"name", v.name},
                        {"exact", v.exact},
                        {"pass", v.pass},
                        {"formula", v.formula},
                        {"measured", v.measured},
                        {"detail", v.detail}});
  }
  doc["verdicts"] = verdicts;
  os << doc.dump(2) << '\n';
}

void WriteVerdicts(std::ostream& os, const std::vector<Verdict>& verdicts) {
  for (const Verdict& v : verdicts) {
    const char* status = !v.exact ? "INFO" : v.pass ? "PASS" : "FAIL";
    os << status << ' ' << v.name << " formula=" << Num(v.formula)
       << " measured=" << Num(v.measured) << " delta=" << Num(v.measured - v.formula);
    if (v.formula != 0) os << " rel=" << Num((v.measured - v.formula) / v.formula);
    os << " (" << v.detail << ")\n";
  }
}

void WriteAggregatesCsv(std::ostream& os, const AggregateMatrix& m) {
  os << "region,supplier,imp,exp\n";
  for (int j = 1; j <= m.n_dno; ++j) {
    for (int u = 1; u <= m.n_suppliers; ++u) {
      os << j << ',' << u << ',' << m.ImpAt(j, u) << ',' << m.ExpAt(j, u) << '\n';
    }
  }
}

void WriteBundlesJson(std::ostream& os, const std::vector<RecipientBundle>& bundles) {
  ordered_json doc = ordered_json::object();
  for (const RecipientBundle& b : bundles) {
    ordered_json cells = ordered_json::array();
    for (const CellValue& c : b.cells) {
      cells.push_back({{"region", c.region}, {"supplier", c.supplier},
                       {"imp", c.imp}, {"exp", c.exp}});
    }
    ordered_json totals = ordered_json::array();
    for (const TotalValue& t : b.totals) {
      totals.push_back({{"scope", t.scope}, {"index", t.index},
                        {"imp", t.imp}, {"exp", t.exp}});
    }
    doc[b.Key()] = {{"role", std::string(RoleName(b.role))},
                    {"index", b.index},
                    {"cells", cells},
                    {"totals", totals}};
  }
  os << doc.dump(2) << '\n';
}

void WriteTranscriptCsv(std::ostream& os, const RunResult& result) {
  Transcript::WriteHeader(os);
  for (const RegionOutcome& r : result.regions) {
    r.transcript.WriteRows(os, std::to_string(r.region));
  }
  result.output_transcript.WriteRows(os, "grid");
}

}  // namespace metershare
