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

#ifndef DRODA_TESTS_SUPPORT_HPP
#define DRODA_TESTS_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "droda/core_metrics.hpp"
#include "droda/parallel.hpp"

namespace droda::testing {

inline PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t d, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  Matrix f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = normal(rng);
    y[i] = (rng() & 1) ? 1 : -1;
  }
  return {std::move(f), std::move(y)};
}

inline double euclid_cost(const PointCloud& a, std::size_t i, const PointCloud& b, std::size_t j, double lambda) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.dim(); ++k) {
    const double t = a.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) -
                     b.features()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k));
    s += t * t;
  }
  return std::sqrt(s) + (a.label(i) != b.label(j) ? lambda : 0.0);
}

// Minimum average cost over all bijections (p = 2, q = 1).
inline double brute_force_ot(const PointCloud& a, const PointCloud& b, double lambda) {
  const std::size_t n = a.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  double best = INFINITY;
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) total += euclid_cost(a, i, b, perm[i], lambda);
    best = std::min(best, total / static_cast<double>(n));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

// Exact right-limit enumeration of sup_{t >= 0} #(p < t)/m - gamma t.
inline double enumerate_sup(const std::vector<double>& p, double gamma) {
  const double m = static_cast<double>(p.size());
  double best = static_cast<double>(std::count_if(p.begin(), p.end(), [](double v) { return v < 0.0; })) / m;
  for (double t : p) {
    if (t < 0.0) continue;
    const double c = static_cast<double>(std::count_if(p.begin(), p.end(), [&](double v) { return v <= t; }));
    best = std::max(best, c / m - gamma * t);
  }
  return best;
}

// Grid maximization with step `step` on [0, max(p) + step].
inline double grid_sup(std::vector<double> p, double gamma, double step) {
  std::sort(p.begin(), p.end());
  const double m = static_cast<double>(p.size());
  const double top = p.back();
  double best = -INFINITY;
  const auto count = static_cast<long>(std::ceil((std::max(top, 0.0) + step) / step));
  for (long k = 0; k <= count; ++k) {
    const double t = static_cast<double>(k) * step;
    const double c = static_cast<double>(std::lower_bound(p.begin(), p.end(), t) - p.begin());
    best = std::max(best, c / m - gamma * t);
  }
  return best;
}

}  // namespace droda::testing

#endif  // DRODA_TESTS_SUPPORT_HPP
