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

#include "metershare/cli.h"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <string>

#if __has_include("CLI11.hpp")
#include "CLI11.hpp"
#else
#include <CLI/CLI.hpp>
#endif
#include "metershare/costs.h"
#include "metershare/error.h"
#include "metershare/protocol.h"
#include "metershare/report.h"
#include "metershare/scenario_io.h"
#include "metershare/selftest.h"

namespace metershare {

namespace {

namespace fs = std::filesystem;

struct RunFlags {
  std::string scenario;
  bool check = false;
  std::string out_dir = "out";
  std::string format = "csv";
  int threads = 1;
};

struct CostFlags {
  CostParams params;
  std::string format = "csv";
  std::string out_file;
  std::string sweep;
};

void AddCostFlags(CLI::App* cmd, CostFlags& f) {
  CostParams& p = f.params;
  cmd->add_option("--n-dno", p.n_dno, "number of DNO regions")->capture_default_str();
  cmd->add_option("--n-suppliers", p.n_suppliers, "number of suppliers")->capture_default_str();
  cmd->add_option("--sigma", p.sigma, "supplier ID bits")->capture_default_str();
  cmd->add_option("--sm", p.meters, "smart meters per region, K/M suffixes allowed")
      ->transform(CLI::AsNumberWithUnit(std::map<std::string, double>{{"k", 1e3}, {"m", 1e6}},
                                        CLI::AsNumberWithUnit::CASE_INSENSITIVE))
      ->capture_default_str();
  cmd->add_option("--x-bits", p.data_bits, "data length |x|")->capture_default_str();
  cmd->add_option("--r-bits", p.random_bits, "random number length |r|")->capture_default_str();
  cmd->add_option("--share-bits", p.share_bits, "share length |[x]|")->capture_default_str();
  cmd->add_option("--sym-bits", p.sym_cipher_bits, "symmetric ciphertext |c|")
      ->capture_default_str();
  cmd->add_option("--pk-bits", p.pk_cipher_bits, "public-key ciphertext |C|")
      ->capture_default_str();
  cmd->add_option("--per-mult-seconds", p.per_mult_seconds, "CPU seconds per multiplication")
      ->capture_default_str();
  cmd->add_option("--threads", p.threads, "threads sharing the CPU work")->capture_default_str();
  cmd->add_flag("--trusted-tso", p.trusted_tso, "recipients fetch from a trusted TSO");
  cmd->add_option("--format", f.format, "output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  cmd->add_option("--out", f.out_file, "write the table to this file instead of stdout");
}

void WriteReport(std::ostream& os, const CostReport& report, const std::string& format) {
  if (format == "json") {
    WriteCostJson(os, report);
  } else {
    WriteCostCsv(os, report);
  }
}

int EmitCostReport(const CostReport& report, const CostFlags& f, std::ostream& out,
                   std::ostream& err) {
  if (f.out_file.empty()) {
    WriteReport(out, report, f.format);
    return kExitOk;
  }
  std::ofstream file(f.out_file, std::ios::binary);
  if (!file) {
    err << "error: cannot write " << f.out_file << '\n';
    return kExitConfig;
  }
  WriteReport(file, report, f.format);
  return kExitOk;
}

bool WriteFile(const fs::path& path, const std::function<void(std::ostream&)>& body,
               std::ostream& err) {
  std::ofstream file(path, std::ios::binary);
  if (!file) {
    err << "error: cannot write " << path.string() << '\n';
    return false;
  }
  body(file);
  return static_cast<bool>(file);
}

int DoRun(const RunFlags& flags, std::ostream& out, std::ostream& err) {
  Scenario scenario;
  try {
    scenario = LoadScenario(flags.scenario);
    if (const char* env = std::getenv("METERSHARE_SEED")) {
      std::size_t used = 0;
      const std::string text(env);
      uint64_t seed = 0;
      try {
        seed = std::stoull(text, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (text.empty() || used != text.size() || text[0] == '-') {
        err << "error: METERSHARE_SEED must be a non-negative integer\n";
        return kExitConfig;
      }
      scenario.seed = seed;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }

  RunOptions options;
  options.threads = flags.threads;
  RunResult result;
  const auto start = std::chrono::steady_clock::now();
  try {
    result = RunScenario(scenario, options);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return e.code() == ErrorCode::kInvalidScenario ? kExitConfig : kExitCorrectness;
  }
  const double elapsed =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const CostReport report = RunReport(result);
  std::error_code ec;
  fs::create_directories(flags.out_dir, ec);
  const fs::path dir(flags.out_dir);
  const bool written =
      WriteFile(dir / "aggregates.csv",
                [&](std::ostream& os) { WriteAggregatesCsv(os, result.matrix); }, err) &&
      WriteFile(dir / "bundles.json",
                [&](std::ostream& os) { WriteBundlesJson(os, result.bundles); }, err) &&
      WriteFile(dir / ("costs." + flags.format),
                [&](std::ostream& os) { WriteReport(os, report, flags.format); }, err) &&
      WriteFile(dir / "transcript.csv",
                [&](std::ostream& os) { WriteTranscriptCsv(os, result); }, err);
  if (!written) return kExitConfig;

  uint64_t mult_eq = 0;
  for (const RegionOutcome& r : result.regions) mult_eq += r.meter.Total().MultEquivalents();
  out << "algorithm " << AlgorithmName(scenario.algorithm) << ", " << scenario.n_dno
      << " regions, " << scenario.total_meters() << " meters, "
      << result.lost_meters.size() << " lost, " << result.dead_servers.size()
      << " servers cut off\n";
  out << "mult-equivalents " << mult_eq;
  if (mult_eq > 0) out << ", wall " << (elapsed / static_cast<double>(mult_eq)) * 1e6
                       << " us per mult-equivalent (not a benchmark)";
  out << '\n';
  WriteVerdicts(out, report.verdicts);
  out << "artifacts written to " << dir.string() << '\n';

  if (!flags.check) return kExitOk;
  const AggregateMatrix oracle = OracleFor(result);
  bool ok = true;
  if (!(result.matrix == oracle)) {
    err << "check: opened aggregates differ from the plaintext oracle\n";
    ok = false;
  }
  if (!result.matrix.TotalsConsistent()) {
    err << "check: totals are inconsistent\n";
    ok = false;
  }
  if (!report.ExactPass()) {
    err << "check: an exact cost verdict failed\n";
    ok = false;
  }
  out << (ok ? "check passed\n" : "check FAILED\n");
  return ok ? kExitOk : kExitCorrectness;
}

int DoCosts(const CostFlags& f, bool sweep_mode, std::ostream& out, std::ostream& err) {
  try {
    f.params.Validate();
    if (sweep_mode || !f.sweep.empty()) {
      const SweepRange range = ParseSweep(f.sweep.empty() ? "sm=0.5M:4M:0.5M" : f.sweep);
      return EmitCostReport(SweepReport(f.params, range), f, out, err);
    }
    return EmitCostReport(FormulaReport(f.params), f, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

int DoSelftest(const std::string& mutate, std::ostream& out) {
  SelftestOptions o;
  o.flip_equality_polarity = mutate == "polarity";
  o.skip_degree_reduction = mutate == "degree";
  const SelftestResult r = RunSelftest(o);
  for (const SelftestCheck& c : r.checks) {
    out << (c.pass ? "PASS " : "FAIL ") << c.name;
    if (!c.pass) out << ": " << c.detail;
    out << '\n';
  }
  out << (r.ok() ? "selftest passed\n" : "selftest FAILED\n");
  return r.ok() ? kExitOk : kExitCorrectness;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Secret-shared smart-metering aggregation simulator", "metershare"};
  app.require_subcommand(1);

  RunFlags run_flags;
  CLI::App* run = app.add_subcommand("run", "simulate one time slot of a scenario");
  run->add_option("--scenario", run_flags.scenario, "scenario JSON file")->required();
  run->add_flag("--check", run_flags.check, "compare against the plaintext oracle");
  run->add_option("--out", run_flags.out_dir, "artifact directory")->capture_default_str();
  run->add_option("--format", run_flags.format, "cost report format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  run->add_option("--threads", run_flags.threads, "regions simulated concurrently")
      ->check(CLI::Range(1, 1024))
      ->capture_default_str();

  CostFlags cost_flags;
  CLI::App* costs = app.add_subcommand("costs", "print the analytic cost table");
  AddCostFlags(costs, cost_flags);
  costs->add_option("--sweep", cost_flags.sweep, "parameter range, e.g. sm=0.5M:4M:0.5M");

  CostFlags sweep_flags;
  CLI::App* sweep = app.add_subcommand("sweep", "cost table over a parameter range");
  AddCostFlags(sweep, sweep_flags);
  sweep->add_option("--sweep", sweep_flags.sweep, "parameter range")
      ->default_str("sm=0.5M:4M:0.5M");

  std::string mutate;
  CLI::App* selftest = app.add_subcommand("selftest", "built-in correctness checks");
  selftest->add_option("--mutate", mutate)
      ->check(CLI::IsMember({"polarity", "degree"}))
      ->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitConfig;
  }

  if (run->parsed()) return DoRun(run_flags, out, err);
  if (costs->parsed()) return DoCosts(cost_flags, false, out, err);
  if (sweep->parsed()) return DoCosts(sweep_flags, true, out, err);
  return DoSelftest(mutate, out);
}

}  // namespace metershare
