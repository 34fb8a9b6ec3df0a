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

#include "metershare/scenario_io.h"

#include <fstream>
#include <limits>
#include <sstream>

#if __has_include("json.hpp")
#include "json.hpp"
#else
#include <nlohmann/json.hpp>
#endif
#include "metershare/error.h"

namespace metershare {

namespace {

using nlohmann::json;

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidScenario, what);
}

const json& Require(const json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) Invalid(std::string("missing field '") + key + "'");
  return *it;
}

int IntField(const json& doc, const char* key) {
  const json& v = Require(doc, key);
  if (!v.is_number_integer()) Invalid(std::string(key) + " must be an integer");
  const auto x = v.get<int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    Invalid(std::string(key) + " is out of range");
  }
  return static_cast<int>(x);
}

std::string StringField(const json& doc, const char* key) {
  const json& v = Require(doc, key);
  if (!v.is_string()) Invalid(std::string(key) + " must be a string");
  return v.get<std::string>();
}

}  // namespace

Scenario ParseScenario(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    Invalid(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) Invalid("scenario must be a JSON object");
  static constexpr const char* kKnown[] = {
      "n_servers", "threshold", "n_dno", "n_suppliers", "sigma", "sm_per_region",
      "seed", "fault_rate", "algorithm", "byte_accounting", "fault_mode"};
  for (const auto& [key, value] : doc.items()) {
    bool known = false;
    for (const char* k : kKnown) known = known || key == k;
    if (!known) Invalid("unknown field '" + key + "'");
  }

  Scenario s;
  s.n_servers = IntField(doc, "n_servers");
  s.threshold = IntField(doc, "threshold");
  s.n_dno = IntField(doc, "n_dno");
  s.n_suppliers = IntField(doc, "n_suppliers");
  s.sigma = IntField(doc, "sigma");

  const json& counts = Require(doc, "sm_per_region");
  if (!counts.is_array()) Invalid("sm_per_region must be an array");
  s.sm_per_region.clear();
  for (const json& c : counts) {
    if (!c.is_number_integer() || c.get<int64_t>() < 0 ||
        c.get<int64_t>() > std::numeric_limits<uint32_t>::max()) {
      Invalid("sm_per_region entries must be non-negative 32-bit integers");
    }
    s.sm_per_region.push_back(c.get<uint32_t>());
  }

  const json& seed = Require(doc, "seed");
  if (!seed.is_number_unsigned()) Invalid("seed must be a non-negative integer");
  s.seed = seed.get<uint64_t>();

  const json& rate = Require(doc, "fault_rate");
  if (!rate.is_number()) Invalid("fault_rate must be a number");
  s.fault_rate = rate.get<double>();

  s.algorithm = ParseAlgorithm(StringField(doc, "algorithm"));
  s.byte_accounting = ParseByteAccounting(StringField(doc, "byte_accounting"));
  if (doc.contains("fault_mode")) s.fault_mode = ParseFaultMode(StringField(doc, "fault_mode"));

  s.Validate();
  return s;
}

Scenario LoadScenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) Invalid("cannot read scenario file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseScenario(text.str());
}

std::string ScenarioToJson(const Scenario& s) {
  nlohmann::ordered_json doc = {
      {"n_servers", s.n_servers},
      {"threshold", s.threshold},
      {"n_dno", s.n_dno},
      {"n_suppliers", s.n_suppliers},
      {"sigma", s.sigma},
      {"sm_per_region", s.sm_per_region},
      {"seed", s.seed},
      {"fault_rate", s.fault_rate},
      {"algorithm", std::string(AlgorithmName(s.algorithm))},
      {"byte_accounting", std::string(ByteAccountingName(s.byte_accounting))},
      {"fault_mode", std::string(FaultModeName(s.fault_mode))},
  };
  return doc.dump(2) + "\n";
}

}  // namespace metershare
