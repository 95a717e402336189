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

#ifndef DRODA_SEQUENCES_HPP
#define DRODA_SEQUENCES_HPP

#include <cstdint>
#include <limits>
#include <string_view>
#include <vector>

#include "droda/gaussian_manifold.hpp"

namespace droda {

enum class PathMode { straight, random_walk, orbit, rotating2d };

std::string_view path_name(PathMode m);
PathMode parse_path(std::string_view name);  // throws ConfigError

// Per consecutive pair: mean displacement and the per-class Wasserstein
// bracket, lower min(||mu1 - mu2||, ||mu1 + mu2||) / 2 and upper ||mu1 - mu2||.
struct PairDistance {
  double mean_distance = 0.0;
  double wasserstein_lower = 0.0;
  double wasserstein_upper = 0.0;
};

PairDistance pair_distance(const GaussianModel& a, const GaussianModel& b);

struct SequencePath {
  std::vector<GaussianModel> models;  // T + 1 models
  std::vector<PairDistance> pairs;    // T pairs
};

// T steps from mu0.
//   straight     constant drift along a seeded random unit direction
//   random-walk  seeded unit steps; a step that would leave ||mu|| >= L has
//                its radial component reflected outward
//   orbit        rotation of mu0 in the plane of mu0 and a seeded orthogonal
//                direction, angle step_len / ||mu0|| per step
//   rotating2d   the same angle, in the (x0, x1) plane
// Throws ConfigError if any model falls below L or any mean step exceeds
// mean_budget.
SequencePath generate_sequence_gaussian(const Vector& mu0, double sigma, double step_len, std::size_t T,
                                        PathMode mode, double L, std::uint64_t seed,
                                        double mean_budget = std::numeric_limits<double>::infinity());

// Successive rotations of the (x0, x1) plane by angle_step; element 0 is the
// input. d = 1 is rejected.
std::vector<GaussianModel> generate_sequence_rotating2d(const GaussianModel& base, double angle_step,
                                                        std::size_t T);
std::vector<PointCloud> generate_sequence_rotating2d(const PointCloud& base, double angle_step, std::size_t T);

SequencePath make_path(std::vector<GaussianModel> models);

}  // namespace droda

#endif  // DRODA_SEQUENCES_HPP
