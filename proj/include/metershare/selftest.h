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

#ifndef METERSHARE_SELFTEST_H_
#define METERSHARE_SELFTEST_H_

#include <string>
#include <vector>

namespace metershare {

struct SelftestOptions {
  // Mutation hooks: a correct build must fail the self-test when either is
  // set.
  bool flip_equality_polarity = false;
  bool skip_degree_reduction = false;
};

struct SelftestCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct SelftestResult {
  std::vector<SelftestCheck> checks;

  bool ok() const;
};

// Exhaustive equality tests at sigma = 6, Shamir round trips over every
// reconstructing subset for n <= 5, product degree and value checks, and one
// seeded scenario run with all three algorithms against the plaintext oracle.
SelftestResult RunSelftest(const SelftestOptions& options = {});

}  // namespace metershare

#endif  // METERSHARE_SELFTEST_H_
