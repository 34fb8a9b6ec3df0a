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

#ifndef METERSHARE_CLI_H_
#define METERSHARE_CLI_H_

#include <ostream>

namespace metershare {

// Exit codes of the command-line tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;       // bad flags, scenario or parameters
inline constexpr int kExitCorrectness = 2;  // oracle mismatch or failed self-test

// Entry point behind the `metershare` binary, callable in process.
// Subcommands: run, costs, sweep, selftest.
int RunCli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace metershare

#endif  // METERSHARE_CLI_H_
