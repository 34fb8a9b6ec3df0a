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

#include <sstream>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "metershare/costs.h"
#include "metershare/error.h"
#include "metershare/field.h"
#include "metershare/prng.h"
#include "metershare/protocol.h"
#include "metershare/report.h"
#include "metershare/scenario_io.h"
#include "metershare/selftest.h"
#include "metershare/shamir.h"

namespace py = pybind11;
namespace ms = metershare;

namespace {

ms::CostParams ParamsFrom(const py::dict& kwargs) {
  ms::CostParams p;
  for (const auto& [key, value] : kwargs) {
    const std::string name = py::str(key);
    if (name == "n_dno") p.n_dno = value.cast<double>();
    else if (name == "n_suppliers") p.n_suppliers = value.cast<double>();
    else if (name == "sigma") p.sigma = value.cast<double>();
    else if (name == "meters") p.meters = value.cast<double>();
    else if (name == "data_bits") p.data_bits = value.cast<double>();
    else if (name == "random_bits") p.random_bits = value.cast<double>();
    else if (name == "share_bits") p.share_bits = value.cast<double>();
    else if (name == "sym_cipher_bits") p.sym_cipher_bits = value.cast<double>();
    else if (name == "pk_cipher_bits") p.pk_cipher_bits = value.cast<double>();
    else if (name == "per_mult_seconds") p.per_mult_seconds = value.cast<double>();
    else if (name == "threads") p.threads = value.cast<int>();
    else if (name == "trusted_tso") p.trusted_tso = value.cast<bool>();
    else throw py::type_error("unknown cost parameter '" + name + "'");
  }
  p.Validate();
  return p;
}

py::dict MatrixDict(const ms::AggregateMatrix& m) {
  py::dict d;
  d["n_dno"] = m.n_dno;
  d["n_suppliers"] = m.n_suppliers;
  d["imp"] = m.imp;
  d["exp"] = m.exp;
  d["region_imp"] = m.region_imp;
  d["region_exp"] = m.region_exp;
  d["supplier_imp"] = m.supplier_imp;
  d["supplier_exp"] = m.supplier_exp;
  d["grid_imp"] = m.grid_imp;
  d["grid_exp"] = m.grid_exp;
  return d;
}

py::dict RunScenarioJson(const std::string& json_text, int threads) {
  ms::RunOptions options;
  options.threads = threads;
  ms::RunResult result;
  {
    py::gil_scoped_release release;
    result = ms::RunScenario(ms::ParseScenario(json_text), options);
  }
  py::dict out;
  out["matrix"] = MatrixDict(result.matrix);
  out["oracle"] = MatrixDict(ms::OracleFor(result));
  out["dead_servers"] = result.dead_servers;
  out["lost_meters"] = result.lost_meters;
  py::list verdicts;
  for (const ms::Verdict& v : ms::Compare(result)) {
    py::dict row;
    row["name"] = v.name;
    row["exact"] = v.exact;
    row["pass"] = v.pass;
    row["formula"] = v.formula;
    row["measured"] = v.measured;
    verdicts.append(row);
  }
  out["verdicts"] = verdicts;
  std::ostringstream aggregates;
  ms::WriteAggregatesCsv(aggregates, result.matrix);
  out["aggregates_csv"] = aggregates.str();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Secret-shared aggregation of smart meter readings";

  // Messages start with the error code name, e.g. "InsufficientShares: ...".
  py::register_exception<ms::Error>(m, "MetershareError", PyExc_RuntimeError);

  m.attr("MODULUS") = ms::kModulus;

  m.def("field_add", [](uint64_t a, uint64_t b) { return (ms::Fp(a) + ms::Fp(b)).value(); });
  m.def("field_mul", [](uint64_t a, uint64_t b) { return (ms::Fp(a) * ms::Fp(b)).value(); });
  m.def("field_inv", [](uint64_t a) { return ms::Fp(a).Inverse().value(); });

  m.def(
      "share_secret",
      [](uint64_t secret, int n, int t, uint64_t seed) {
        ms::Prng rng(seed);
        std::vector<std::pair<int, uint64_t>> out;
        for (const ms::Share& s : ms::ShareSecret(ms::Fp(secret), {n, t}, rng)) {
          out.emplace_back(s.party, s.value.value());
        }
        return out;
      },
      py::arg("secret"), py::arg("n") = 3, py::arg("t") = 1, py::arg("seed") = 0,
      "Shamir shares as (party, value) pairs.");
  m.def(
      "reconstruct",
      [](const std::vector<std::pair<int, uint64_t>>& shares, int t) {
        std::vector<ms::Share> in;
        for (const auto& [party, value] : shares) {
          in.push_back({static_cast<uint8_t>(party), ms::Fp(value), static_cast<uint8_t>(t)});
        }
        return ms::Reconstruct(in, ms::ConsistencyCheck::kDetect).value();
      },
      py::arg("shares"), py::arg("t") = 1,
      "Lagrange interpolation at 0; extra shares are checked for consistency.");

  m.def("run_scenario_json", &RunScenarioJson, py::arg("scenario_json"),
        py::arg("threads") = 1);

  m.def(
      "formula_comm",
      [](const std::string& protocol, const std::string& segment, const py::kwargs& kw) {
        return ms::FormulaComm(protocol, segment, ParamsFrom(kw));
      },
      py::arg("protocol"), py::arg("segment"));
  m.def(
      "formula_mults",
      [](const std::string& protocol, const py::kwargs& kw) {
        return ms::FormulaMults(ms::ParseProtocol(protocol), ParamsFrom(kw));
      },
      py::arg("protocol"));
  m.def(
      "extrapolate_cpu",
      [](double mults, const py::kwargs& kw) { return ms::ExtrapolateCpu(mults, ParamsFrom(kw)); },
      py::arg("mults"));

  m.def("selftest", [] {
    py::list out;
    for (const ms::SelftestCheck& c : ms::RunSelftest().checks) {
      out.append(py::make_tuple(c.name, c.pass, c.detail));
    }
    return out;
  });
}
