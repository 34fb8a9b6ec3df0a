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

#include "metershare/protocol.h"

#include <algorithm>
#include <exception>
#include <thread>

#include "metershare/error.h"
#include "metershare/gates.h"
#include "metershare/prng.h"

namespace metershare {

namespace {

constexpr uint64_t kRegionTag = 0x2E610;

struct RegionInput {
  int region = 0;
  uint32_t meters = 0;
  std::vector<const Submission*> submissions;
};

RegionOutcome RunRegion(const Scenario& scenario, const RunOptions& options,
                        const RegionInput& input) {
  EngineOptions eo;
  eo.params = scenario.sharing();
  eo.seed = MixSeed(scenario.seed, kRegionTag, static_cast<uint64_t>(input.region));
  eo.record_transcript = options.record_transcript;
  eo.skip_degree_reduction = options.skip_degree_reduction;
  eo.flip_equality_polarity = options.flip_equality_polarity;
  Engine engine(eo);

  RegionOutcome out;
  out.region = input.region;
  out.meters = input.meters;
  out.aggregated = static_cast<uint32_t>(input.submissions.size());
  out.complete = !input.submissions.empty();

  engine.SetPhase("input");
  std::vector<std::vector<Handle>> values;
  values.reserve(input.submissions.size());
  for (const Submission* sub : input.submissions) {
    std::vector<Handle> handles;
    handles.reserve(sub->shares.size());
    for (const auto& slots : sub->shares) {
      handles.push_back(engine.ImportDealt(slots, Endpoint::Meter(sub->meter_id)));
    }
    values.push_back(std::move(handles));
  }

  const auto suppliers = SupplierIds(scenario.n_suppliers);
  RegionRow row;
  if (scenario.algorithm == Algorithm::kNiaa) {
    const auto ns = static_cast<std::size_t>(scenario.n_suppliers);
    std::vector<NiaaTuple> batch;
    for (const auto& h : values) {
      batch.push_back({{h.begin(), h.begin() + ns}, {h.begin() + ns, h.end()}});
    }
    row = NiaaRegion(engine, batch, scenario.n_suppliers);
  } else {
    // Products need every live server to hold its operands.
    engine.SetPhase("recovery");
    out.recovered_shares = engine.RecoverMissingShares();
    const auto sigma = static_cast<std::size_t>(scenario.sigma);
    std::vector<NaaTuple> batch;
    for (const auto& h : values) {
      NaaTuple t;
      t.imp_supplier.bits.assign(h.begin(), h.begin() + sigma);
      t.exp_supplier.bits.assign(h.begin() + sigma, h.begin() + 2 * sigma);
      t.imp = h[2 * sigma];
      t.exp = h[2 * sigma + 1];
      batch.push_back(std::move(t));
    }
    if (scenario.algorithm == Algorithm::kNaa) {
      row = NaaRegion(engine, batch, suppliers);
    } else {
      NcaaResult r = NcaaRegion(engine, batch, suppliers);
      row = std::move(r.row);
      out.imp_counts = std::move(r.imp_counts);
      out.exp_counts = std::move(r.exp_counts);
      out.imp_network = r.imp_network;
      out.exp_network = r.exp_network;
    }
  }

  out.row = out.complete ? ExportRow(engine, row)
                        : ZeroRow(scenario.n_servers, scenario.threshold,
                                  scenario.n_suppliers);
  out.meter = engine.meter();
  out.transcript = engine.transcript();
  out.opened = engine.opened();
  return out;
}

}  // namespace

RunResult RunScenario(const Scenario& scenario, const RunOptions& options) {
  scenario.Validate();
  RunResult result;
  result.scenario = scenario;
  result.meters = BuildMeters(scenario);
  result.readings = GenerateReadings(scenario.seed, options.slot, result.meters);

  std::vector<MeterTuple> tuples;
  tuples.reserve(result.meters.size());
  for (std::size_t k = 0; k < result.meters.size(); ++k) {
    tuples.push_back(scenario.algorithm == Algorithm::kNiaa
                         ? EncodeNiaa(result.meters[k], result.readings[k],
                                      scenario.n_suppliers)
                         : EncodeNaa(result.meters[k], result.readings[k],
                                     scenario.sigma));
  }
  SubmitResult submitted = Submit(scenario, result.meters, tuples);
  result.dead_servers = submitted.dead_servers;
  result.lost_meters = submitted.lost_meters;
  result.shares_delivered = submitted.shares_delivered;
  result.bundles_delivered = submitted.bundles_delivered;

  std::vector<RegionInput> inputs(scenario.n_dno);
  for (int j = 1; j <= scenario.n_dno; ++j) {
    inputs[j - 1].region = j;
    inputs[j - 1].meters = scenario.sm_per_region[j - 1];
  }
  for (const Submission& sub : submitted.submissions) {
    inputs[sub.region - 1].submissions.push_back(&sub);
  }

  std::vector<RegionOutcome> outcomes(scenario.n_dno);
  std::vector<std::exception_ptr> errors(scenario.n_dno);
  auto work = [&](std::size_t j) {
    try {
      outcomes[j] = RunRegion(scenario, options, inputs[j]);
    } catch (...) {
      errors[j] = std::current_exception();
    }
  };
  const auto workers = static_cast<std::size_t>(
      std::clamp(options.threads, 1, scenario.n_dno));
  if (workers <= 1) {
    for (std::size_t j = 0; j < inputs.size(); ++j) work(j);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t j = w; j < inputs.size(); j += workers) work(j);
      });
    }
    for (auto& t : pool) t.join();
  }
  // Lowest region first, whatever the thread count.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  std::vector<SharedRow> rows;
  for (const RegionOutcome& o : outcomes) rows.push_back(o.row);
  result.regions = std::move(outcomes);

  const SharedAggregates aggregates = GridAggregate(rows);
  result.bundles = DistributeOutputs(
      aggregates, result.output_meter,
      options.record_transcript ? &result.output_transcript : nullptr);
  result.matrix = MatrixFromBundles(result.bundles);
  return result;
}

AggregateMatrix PlaintextOracle(int n_dno, int n_suppliers,
                                std::span<const SmartMeter> meters,
                                std::span<const MeterReadings> readings,
                                std::span<const uint32_t> excluded) {
  const auto cells = static_cast<std::size_t>(n_dno) * n_suppliers;
  std::vector<uint64_t> imp(cells, 0), exp(cells, 0);
  for (std::size_t k = 0; k < meters.size(); ++k) {
    const SmartMeter& m = meters[k];
    if (std::find(excluded.begin(), excluded.end(), m.id) != excluded.end()) continue;
    imp[(m.region - 1) * n_suppliers + (m.supplier_imp - 1)] += readings[k].imp.raw;
    exp[(m.region - 1) * n_suppliers + (m.supplier_exp - 1)] += readings[k].exp.raw;
  }
  return AggregateMatrix::FromCells(n_dno, n_suppliers, std::move(imp), std::move(exp));
}

AggregateMatrix OracleFor(const RunResult& result) {
  return PlaintextOracle(result.scenario.n_dno, result.scenario.n_suppliers,
                         result.meters, result.readings, result.lost_meters);
}

}  // namespace metershare
