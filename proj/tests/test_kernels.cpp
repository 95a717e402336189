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

#include <doctest.h>
#include <omp.h>

#include <cmath>

#include "droda/dual_dro.hpp"
#include "droda/expandable_props.hpp"
#include "droda/gaussian_manifold.hpp"

using namespace droda;

namespace {

// Forces a real thread team even on single-core hosts.
struct ThreadTeam {
  int saved = omp_get_max_threads();
  explicit ThreadTeam(int n) { omp_set_num_threads(n); }
  ~ThreadTeam() { omp_set_num_threads(saved); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("gaussian sampling") {
  ThreadTeam team(4);
  const GaussianModel m{Eigen::Vector3d(1.0, -2.0, 0.5), 1.5};
  for (std::size_t n : {1u, 4095u, 4096u, 4097u, 30000u}) {
    const PointCloud a = kernels::sample_serial(m, n, 21);
    const PointCloud b = kernels::sample_omp(m, n, 21);
    CHECK(a == b);
    CHECK(a.size() == n);
  }
  CHECK(sample(m, 5000, 3, Exec::serial) == sample(m, 5000, 3, Exec::parallel));
  CHECK_FALSE(sample(m, 5000, 3) == sample(m, 5000, 4));
}

TEST_CASE("pseudo-label sums") {
  ThreadTeam team(4);
  const PointCloud c = sample(GaussianModel{Eigen::Vector2d(0.3, 0.1), 1.0}, 50001, 5);
  const Vector theta = Eigen::Vector2d(0.6, 0.8);
  const Vector a = kernels::pseudolabel_sum_serial(c.features(), theta);
  const Vector b = kernels::pseudolabel_sum_omp(c.features(), theta);
  CHECK(a == b);
  // Block sums agree with a plain loop up to rounding.
  Vector plain = Vector::Zero(2);
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double s = c.row(i).dot(theta) >= 0.0 ? 1.0 : -1.0;
    plain += s * c.row(i).transpose();
  }
  CHECK((a - plain).norm() <= 1e-9 * plain.norm());
}

TEST_CASE("monte carlo counts") {
  ThreadTeam team(4);
  const Sampler s = isotropic_gaussian(Eigen::Vector2d(0.0, 0.0), 1.0);
  const kernels::Classifier quadrant = [](std::span<const double> x) {
    return (x[0] >= 0.0 ? 1u : 0u) | (x[1] >= 0.0 ? 2u : 0u);
  };
  for (std::size_t n : {1u, 4096u, 100003u}) {
    const auto a = kernels::count_serial(s, n, 8, quadrant, 4);
    const auto b = kernels::count_omp(s, n, 8, quadrant, 4);
    CHECK(a == b);
    std::uint64_t total = 0;
    for (auto v : a) total += v;
    CHECK(total == n);
  }
}

TEST_CASE("sphere restarts") {
  ThreadTeam team(4);
  const PointCloud c = sample(GaussianModel{Eigen::Vector3d(1.0, 0.5, -0.5), 1.0}, 300, 6);
  DualParams params;
  params.gamma = 2.0;
  const SphereResult a = minimize_over_sphere(c, params, 6, 17, Exec::serial);
  const SphereResult b = minimize_over_sphere(c, params, 6, 17, Exec::parallel);
  CHECK(a.risk == b.risk);
  CHECK(a.classifier.theta() == b.classifier.theta());
}

}  // TEST_SUITE
