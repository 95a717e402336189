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

#include <sstream>

#include "droda/core_metrics.hpp"
#include "droda/errors.hpp"
#include "support.hpp"

using namespace droda;

TEST_SUITE("core-metrics") {

TEST_CASE("ground cost examples") {
  const LabeledPoint a{Eigen::Vector2d(0.0, 0.0), 1};
  const LabeledPoint b{Eigen::Vector2d(3.0, 4.0), 1};
  const LabeledPoint c{Eigen::Vector2d(3.0, 4.0), -1};
  const MetricParams m{2.0, 1.0, 0.5};
  CHECK(ground_cost(a, a, m) == 0.0);
  CHECK(ground_cost(a, b, m) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(ground_cost(a, c, m) == doctest::Approx(5.5).epsilon(1e-15));
  CHECK(ground_cost(a, b, MetricParams{1.0, 1.0, 0.0}) == doctest::Approx(7.0));
  CHECK(ground_cost(a, b, MetricParams{2.0, 2.0, 0.0}) == doctest::Approx(25.0));
  CHECK(ground_cost(a, b, MetricParams{INFINITY, 1.0, 0.0}) == doctest::Approx(4.0));
  const LabeledPoint d3{Eigen::Vector3d(0.0, 0.0, 0.0), 1};
  CHECK_THROWS_AS(ground_cost(a, d3, m), InvalidInput);
  CHECK_THROWS_AS(MetricParams({0.5, 1.0, 0.0}).validate(), InvalidInput);
  CHECK_THROWS_AS(MetricParams({2.0, 1.0, -1.0}).validate(), InvalidInput);
}

TEST_CASE("labels outside +-1 are rejected") {
  Matrix f(1, 1);
  f << 0.0;
  CHECK_THROWS_AS(PointCloud(f, {0}), InvalidInput);
  CHECK_THROWS_AS(PointCloud(f, {1, 1}), InvalidInput);
}

TEST_CASE("identical clouds are at distance zero") {
  Rng rng(3);
  const PointCloud a = testing::random_cloud(rng, 5, 3);
  const auto r = empirical_wasserstein(a, a, MetricParams{2.0, 1.0, 1.0});
  CHECK(r.distance == doctest::Approx(0.0));
  CHECK(r.plan.matches.size() == 5);
}

TEST_CASE("label flips add lambda per unit mass") {
  Matrix f(2, 1);
  f << 0.0, 10.0;
  const PointCloud a(f, {1, -1});
  const PointCloud b(f, {-1, 1});
  // Moving each point to itself costs lambda; swapping costs 10.
  CHECK(empirical_wasserstein(a, b, MetricParams{2.0, 1.0, 0.5}).distance == doctest::Approx(0.5));
  CHECK(empirical_wasserstein(a, b, MetricParams{2.0, 1.0, 20.0}).distance == doctest::Approx(10.0));
}

TEST_CASE("solver matches permutation oracle on random small instances") {
  Rng rng(11);
  std::uniform_int_distribution<int> size(1, 7);
  const double lambdas[3] = {0.0, 0.5, 2.0};
  for (int rep = 0; rep < 30; ++rep) {
    const auto n = static_cast<std::size_t>(size(rng));
    const PointCloud a = testing::random_cloud(rng, n, 2), b = testing::random_cloud(rng, n, 2);
    const double lambda = lambdas[rep % 3];
    const auto r = empirical_wasserstein(a, b, MetricParams{2.0, 1.0, lambda});
    CHECK(std::abs(r.distance - testing::brute_force_ot(a, b, lambda)) <= 1e-9);
    // Plan is a bijection with mass 1/n per pair and reproduces the cost.
    std::vector<int> seen_s(n, 0), seen_t(n, 0);
    double cost = 0.0;
    for (const Match& m : r.plan.matches) {
      seen_s[m.source]++;
      seen_t[m.target]++;
      CHECK(m.mass == doctest::Approx(1.0 / static_cast<double>(n)));
      cost += m.mass * testing::euclid_cost(a, m.source, b, m.target, lambda);
    }
    CHECK(std::all_of(seen_s.begin(), seen_s.end(), [](int c) { return c == 1; }));
    CHECK(std::all_of(seen_t.begin(), seen_t.end(), [](int c) { return c == 1; }));
    CHECK(cost == doctest::Approx(r.distance).epsilon(1e-12));
  }
}

TEST_CASE("unequal sizes split mass") {
  Matrix fa(1, 1), fb(2, 1);
  fa << 0.0;
  fb << 1.0, 3.0;
  const auto r = empirical_wasserstein(PointCloud(fa, {1}), PointCloud(fb, {1, 1}), MetricParams{});
  CHECK(r.distance == doctest::Approx(2.0));
  double mass = 0.0;
  for (const Match& m : r.plan.matches) mass += m.mass;
  CHECK(mass == doctest::Approx(1.0));
}

TEST_CASE("distance is symmetric and obeys the triangle inequality") {
  Rng rng(19);
  for (int rep = 0; rep < 20; ++rep) {
    const PointCloud a = testing::random_cloud(rng, 4, 2), b = testing::random_cloud(rng, 4, 2),
                     c = testing::random_cloud(rng, 4, 2);
    const MetricParams m{2.0, 1.0, 0.7};
    const double ab = empirical_wasserstein(a, b, m).distance;
    CHECK(ab == doctest::Approx(empirical_wasserstein(b, a, m).distance).epsilon(1e-12));
    CHECK(ab <= empirical_wasserstein(a, c, m).distance + empirical_wasserstein(c, b, m).distance + 1e-12);
  }
}

TEST_CASE("size cap is enforced") {
  Matrix fa = Matrix::Zero(499, 1), fb = Matrix::Zero(2, 1);
  const PointCloud a(fa, std::vector<int>(499, 1)), b(fb, {1, 1});
  CHECK_THROWS_AS(empirical_wasserstein(a, b, MetricParams{}), InvalidInput);
}

TEST_CASE("qfunction against frozen values") {
  CHECK(qfunction(0.0) == 0.5);
  CHECK(qfunction(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
  CHECK(qfunction(2.0) == doctest::Approx(0.022750131948179207).epsilon(1e-14));
  CHECK(qfunction(6.0) == doctest::Approx(9.8658764503769814e-10).epsilon(1e-12));
  CHECK(qfunction(-1.0) == doctest::Approx(0.84134474606854295).epsilon(1e-14));
  CHECK(qfunction(INFINITY) == 0.0);
  CHECK(qfunction(-INFINITY) == 1.0);
  for (double x = -5.0; x <= 5.0; x += 0.25) CHECK(qfunction(x) + qfunction(-x) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(normal_pdf(0.0) == doctest::Approx(0.3989422804014327));
}

TEST_CASE("cloud csv round trip") {
  Rng rng(5);
  const PointCloud a = testing::random_cloud(rng, 6, 3);
  std::stringstream ss;
  write_cloud_csv(ss, a);
  CHECK(read_cloud_csv(ss) == a);

  std::istringstream bad_header("a,b,y\n1,2,1\n");
  CHECK_THROWS_AS(read_cloud_csv(bad_header), InvalidInput);
  std::istringstream bad_label("x0,y\n1,0\n");
  CHECK_THROWS_AS(read_cloud_csv(bad_label), InvalidInput);
  std::istringstream short_row("x0,x1,y\n1,1\n");
  CHECK_THROWS_AS(read_cloud_csv(short_row), InvalidInput);
}

}  // TEST_SUITE
