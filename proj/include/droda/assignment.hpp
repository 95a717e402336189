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

#ifndef DRODA_ASSIGNMENT_HPP
#define DRODA_ASSIGNMENT_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace droda {

struct Assignment {
  std::vector<std::size_t> row_to_col;
  double cost = 0.0;
};

// Minimum-cost perfect matching on a square cost matrix via shortest
// augmenting paths with dual potentials, O(n^3).
Assignment solve_assignment(const Eigen::MatrixXd& cost);

}  // namespace droda

#endif  // DRODA_ASSIGNMENT_HPP
