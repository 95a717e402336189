// Copyright 2026 The DRODA Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DRODA_SELFCHECK_HPP
#define DRODA_SELFCHECK_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace droda {

struct CheckResult {
  std::string suite;
  bool passed = false;
  double deviation = 0.0;  // worst measured deviation
  double tolerance = 0.0;
  std::string detail;
};

struct SelfCheckReport {
  std::vector<CheckResult> results;

  bool all_passed() const;
};

struct SelfCheckOptions {
  // Tail function under test in the qfunction suite; swap in a corrupted one
  // to see the suite fail.
  std::function<double(double)> qfunction;
};

// Runs every oracle suite with fixed seeds.
SelfCheckReport selfcheck(const SelfCheckOptions& options = {});

// CSV: suite,status,deviation,tolerance,detail
void write_report(std::ostream& out, const SelfCheckReport& report);

namespace oracles {

// Q(x) = phi(x) int_0^inf exp(-x s - s^2/2) ds by composite Gauss-Legendre.
double qfunction_integral(double x);

// Real roots of the characteristic polynomial of a symmetric matrix, found by
// Faddeev-LeVerrier coefficients and bisection on a Gershgorin bracket.
std::vector<double> symmetric_eigenvalues_charpoly(const std::vector<std::vector<double>>& a);

}  // namespace oracles

}  // namespace droda

#endif  // DRODA_SELFCHECK_HPP
