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

#ifndef METERSHARE_SCENARIO_IO_H_
#define METERSHARE_SCENARIO_IO_H_

#include <string>
#include <string_view>

#include "metershare/metering.h"

namespace metershare {

// A scenario file is one JSON object:
//   n_servers, threshold, n_dno, n_suppliers, sigma, sm_per_region (array),
//   seed, fault_rate, algorithm ("naa" | "ncaa" | "niaa"),
//   byte_accounting ("paper" | "measured"), and optionally fault_mode
//   ("server" | "bundle"). All other keys are rejected.
// Throws Error(kInvalidScenario); the result is validated.
Scenario ParseScenario(std::string_view json_text);
Scenario LoadScenario(const std::string& path);
std::string ScenarioToJson(const Scenario& scenario);

}  // namespace metershare

#endif  // METERSHARE_SCENARIO_IO_H_
