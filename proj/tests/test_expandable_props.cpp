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

#include <cmath>
#include <sstream>

#include "droda/dual_dro.hpp"
#include "droda/errors.hpp"
#include "droda/expandable_props.hpp"
#include "droda/gaussian_manifold.hpp"
#include "droda/selfcheck.hpp"
#include "support.hpp"

using namespace droda;

namespace {

Vector vec(std::initializer_list<double> v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index k = 0;
  for (double x : v) out(k++) = x;
  return out;
}

Sampler unit_square() { return uniform_box(Vector::Zero(2), Vector::Ones(2)); }

}  // namespace

TEST_SUITE("expandable-props") {

TEST_CASE("region membership and neighborhoods") {
  const RegionSpec h = RegionSpec::half_space(vec({2.0, 0.0}), 1.0);
  CHECK(h.contains(std::vector<double>{0.5, 7.0}));
  CHECK_FALSE(h.contains(std::vector<double>{0.51, 7.0}));
  // Offset grows by r ||n||, so the neighborhood is x0 <= 0.5 + r.
  CHECK(h.neighborhood(0.25).contains(std::vector<double>{0.75, 0.0}));
  CHECK_FALSE(h.neighborhood(0.25).contains(std::vector<double>{0.76, 0.0}));
  const RegionSpec b = RegionSpec::ball(vec({0.0, 0.0}), 1.0);
  CHECK(b.neighborhood(0.5).contains(std::vector<double>{0.0, 1.5}));
  CHECK_FALSE(b.neighborhood(0.5).contains(std::vector<double>{0.0, 1.51}));
  CHECK(RegionSpec::full_space(3).contains(std::vector<double>{1e300, -1e300, 0.0}));
  CHECK_THROWS_AS(RegionSpec::half_space(vec({0.0, 0.0}), 1.0), InvalidInput);
  CHECK_THROWS_AS(RegionSpec::ball(vec({0.0}), -1.0), InvalidInput);
  CHECK_THROWS_AS(h.contains(std::vector<double>{1.0}), InvalidInput);
}

TEST_CASE("segment neighborhoods") {
  const RegionSpec b = RegionSpec::ball(vec({0.0, 0.0}), 1.0);
  const Vector delta = vec({2.0, 0.0});
  CHECK(b.segment_neighborhood_contains(std::vector<double>{2.5, 0.8}, delta));
  CHECK(b.segment_neighborhood_contains(std::vector<double>{-2.5, 0.8}, delta));
  CHECK_FALSE(b.segment_neighborhood_contains(std::vector<double>{3.5, 0.0}, delta));
  CHECK_FALSE(b.segment_neighborhood_contains(std::vector<double>{0.0, 1.1}, delta));
  const RegionSpec h = RegionSpec::half_space(vec({1.0, 0.0}), 0.0);
  CHECK(h.segment_neighborhood_contains(std::vector<double>{0.3, 0.0}, vec({-0.3, 5.0})));
  CHECK_FALSE(h.segment_neighborhood_contains(std::vector<double>{0.31, 0.0}, vec({-0.3, 5.0})));
}

TEST_CASE("mass estimates") {
  const MassEstimate half = estimate_mass(unit_square(), RegionSpec::half_space(vec({1.0, 0.0}), 0.5), 200000, 1);
  CHECK(std::abs(half.estimate - 0.5) <= 4.0 * half.std_error);
  CHECK(half.std_error == doctest::Approx(std::sqrt(0.25 / 200000)).epsilon(1e-2));
  const MassEstimate tail = estimate_mass(isotropic_gaussian(vec({0.0}), 1.0),
                                          RegionSpec::half_space(vec({-1.0}), -1.0), 200000, 2);
  CHECK(std::abs(tail.estimate - 0.15865525393145705) <= 4.0 * tail.std_error);
  const MassEstimate all = estimate_mass(unit_square(), RegionSpec::full_space(2), 1000, 3);
  CHECK(all.estimate == 1.0);
  CHECK(all.std_error == 0.0);
  CHECK_THROWS_AS(estimate_mass(unit_square(), RegionSpec::full_space(3), 10, 0), InvalidInput);
  CHECK_THROWS_AS(estimate_mass(unit_square(), RegionSpec::full_space(2), 0, 0), InvalidInput);
}

TEST_CASE("expansion ratios") {
  const RatioEstimate box = estimate_expansion_ratio(unit_square(), RegionSpec::half_space(vec({1.0, 0.0}), 0.5), 0.1,
                                                     1000000, 4);
  CHECK(std::abs(box.ratio - 1.2) <= 4.0 * box.std_error);
  CHECK(std::abs(box.ratio - 1.2) <= 0.02);
  const RatioEstimate gauss = estimate_expansion_ratio(isotropic_gaussian(vec({0.0, 0.0}), 1.0),
                                                       RegionSpec::half_space(vec({1.0, 0.0}), 0.0), 0.5, 1000000, 5);
  CHECK(std::abs(gauss.ratio - 1.3829249225480262) <= 4.0 * gauss.std_error);
  const RatioEstimate tail = estimate_expansion_ratio(isotropic_gaussian(vec({0.0}), 1.0),
                                                      RegionSpec::half_space(vec({1.0}), -1.0), 0.3, 1000000, 6);
  CHECK(std::abs(tail.ratio - 1.5250906996600771) <= 4.0 * tail.std_error);
  const RatioEstimate none = estimate_expansion_ratio(unit_square(), RegionSpec::half_space(vec({1.0, 0.0}), 0.3), 0.0,
                                                      10000, 7);
  CHECK(none.ratio == 1.0);
  CHECK(none.std_error == 0.0);
}

TEST_CASE("tiny regions are rejected as unreliable") {
  CHECK_THROWS_AS(estimate_expansion_ratio(unit_square(), RegionSpec::half_space(vec({1.0, 0.0}), -0.1), 0.1, 1000, 0),
                  UnreliableEstimate);
  CHECK_THROWS_AS(estimate_expansion_ratio(isotropic_gaussian(vec({0.0}), 1.0),
                                           RegionSpec::half_space(vec({1.0}), -3.0), 0.1, 1000, 0),
                  UnreliableEstimate);
}

TEST_CASE("fitted expansion constants on the unit square") {
  // Half-planes x0 <= c grow to x0 <= c + r, so (ratio - 1) / r = 1 / c.
  const std::vector<RegionSpec> regions{RegionSpec::half_space(vec({1.0, 0.0}), 0.2),
                                        RegionSpec::half_space(vec({1.0, 0.0}), 0.3),
                                        RegionSpec::half_space(vec({1.0, 0.0}), 0.35)};
  const std::vector<double> grid{0.4, 0.1, 0.05, 0.2, 0.1};
  const ExpansionConstants c = fit_expansion_constants(unit_square(), regions, grid, 1000000, 8);
  CHECK(c.r_used == std::vector<double>{0.05, 0.1});
  CHECK(std::abs(c.C1 - 5.0) <= 0.1);
  CHECK(std::abs(c.C2 - 1.0 / 0.35) <= 0.1);
  CHECK(c.C1 >= c.C2);
}

TEST_CASE("fit rejects regions outside the mass window") {
  const std::vector<RegionSpec> regions{RegionSpec::half_space(vec({1.0, 0.0}), 0.45)};
  const std::vector<double> grid{0.1};
  CHECK_THROWS_AS(fit_expansion_constants(unit_square(), regions, grid, 100000, 0), InvalidInput);
  const std::vector<double> bad{0.0};
  CHECK_THROWS_AS(fit_expansion_constants(unit_square(), regions, bad, 100000, 0), InvalidInput);
  CHECK_THROWS_AS(fit_expansion_constants(unit_square(), regions, grid, 100000, 0, ExpansionWindow{0.3, 0.2}),
                  InvalidInput);
}

TEST_CASE("atoms do not expand") {
  const Sampler atoms = discrete_points({vec({0.0}), vec({10.0})}, {0.3, 0.7});
  const std::vector<RegionSpec> regions{RegionSpec::half_space(vec({1.0}), 1.0)};
  const std::vector<double> grid{0.5, 1.0};
  const ExpansionConstants c = fit_expansion_constants(atoms, regions, grid, 100000, 9);
  CHECK(c.C1 == 0.0);
  CHECK(c.C2 == 0.0);
}

TEST_CASE("directional smoothness") {
  const RegionSpec region = RegionSpec::half_space(vec({1.0, 0.0}), 0.0);
  const Vector delta = vec({0.2, 0.0});
  const SmoothnessEstimate same = estimate_directional_smoothness(
      isotropic_gaussian(vec({0.0, 0.0}), 1.0), isotropic_gaussian(vec({0.0, 0.0}), 1.0), region, delta, 1000000, 10);
  CHECK(same.epsilon <= 4.0 * same.epsilon_se);
  CHECK(std::abs(same.ratio_plus - 0.79259709439103023) <= 4.0 * same.se_plus);
  const SmoothnessEstimate skew = estimate_directional_smoothness(
      isotropic_gaussian(vec({0.0, 0.0}), 1.0), isotropic_gaussian(vec({0.0, 0.0}), 2.0), region, delta, 1000000, 11);
  CHECK(std::abs(skew.ratio_minus - 0.39827837277028981) <= 4.0 * skew.se_minus);
  CHECK(std::abs(skew.epsilon - 0.33111667214093735) <= 4.0 * skew.epsilon_se);
  CHECK_THROWS_AS(estimate_directional_smoothness(unit_square(), unit_square(), region, vec({0.0, 0.0}), 10, 0),
                  InvalidInput);
}

TEST_CASE("separation") {
  Matrix f(20, 2);
  std::vector<int> y(20);
  for (Eigen::Index i = 0; i < 20; ++i) {
    const int s = i % 2 == 0 ? 1 : -1;
    f(i, 0) = s * (1.0 + 0.1 * static_cast<double>(i));
    f(i, 1) = 0.5 * static_cast<double>(i % 5) - 1.0;
    y[static_cast<std::size_t>(i)] = s;
  }
  const PointCloud separable(f, y);
  CHECK(estimate_separation(separable, 4, 1) == 0.0);
  y[3] = -y[3];
  CHECK(estimate_separation(PointCloud(f, y), 4, 1) == doctest::Approx(1.0 / 20.0));

  const PointCloud gauss = sample(GaussianModel{vec({1.0, 0.0}), 1.0}, 10000, 12);
  const double sep = estimate_separation(gauss, 4, 2);
  CHECK(std::abs(sep - 0.15865525393145705) <= 0.015);
}

TEST_CASE("jacobian eigenvalue check") {
  const AffineMap id{Matrix::Identity(3, 3), Vector::Zero(3)};
  CHECK(jacobian_eig_bounds_check(id, 0.0).within);
  const AffineMap scaled{1.1 * Matrix::Identity(2, 2), Vector{}};
  CHECK_FALSE(jacobian_eig_bounds_check(scaled, 0.04).within);
  CHECK(jacobian_eig_bounds_check(scaled, 0.05).within);

  const double c = std::cos(0.5), s = std::sin(0.5);
  Matrix rot(2, 2);
  rot << c, -s, s, c;
  const EigenReport r = jacobian_eig_bounds_check({rot, Vector{}}, 0.0);
  CHECK(r.complex_spectrum);
  REQUIRE(r.values.size() == 2);
  CHECK(r.values[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.values[1] == doctest::Approx(1.0).epsilon(1e-14));

  Rng rng = make_rng(13, 0);
  std::normal_distribution<double> normal(0.0, 0.1);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix m(4, 4);
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j <= i; ++j) m(i, j) = m(j, i) = (i == j ? 1.0 : 0.0) + normal(rng);
    std::vector<std::vector<double>> rows(4, std::vector<double>(4));
    for (Eigen::Index i = 0; i < 4; ++i)
      for (Eigen::Index j = 0; j < 4; ++j) rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m(i, j);
    std::vector<double> want = oracles::symmetric_eigenvalues_charpoly(rows);
    const EigenReport e = jacobian_eig_bounds_check({m, Vector{}}, 0.5);
    std::vector<double> got = e.values;
    std::sort(want.begin(), want.end());
    std::sort(got.begin(), got.end());
    CHECK_FALSE(e.complex_spectrum);
    REQUIRE(got.size() == want.size());
    for (std::size_t k = 0; k < got.size(); ++k) CHECK(std::abs(got[k] - want[k]) <= 1e-8);
    const bool inside = std::all_of(want.begin(), want.end(), [](double v) { return v >= 0.0 && v <= 2.0; });
    CHECK(e.within == inside);
  }
  CHECK_THROWS_AS(jacobian_eig_bounds_check({Matrix::Identity(2, 3), Vector{}}, 0.1), InvalidInput);
}

TEST_CASE("compatibility bound") {
  const CompatibilityBound ok = compatibility_bound_expandable(2.0, 1.0, 0.005, 0.1, 0.05);
  CHECK(ok.value == doctest::Approx(0.072).epsilon(1e-14));
  CHECK_FALSE(ok.precondition_violated);
  CHECK(compatibility_bound_expandable(2.0, 1.0, 0.01, 0.1, 0.05).precondition_violated);
  CHECK_FALSE(compatibility_bound_expandable(2.0, 0.0, 0.01, 0.1, 0.05).precondition_violated);
  CHECK_THROWS_AS(compatibility_bound_expandable(-1.0, 1.0, 0.01, 0.1, 0.05), InvalidInput);
}

TEST_CASE("estimates csv") {
  std::ostringstream out;
  const std::vector<EstimateRow> rows{{"C1", 0.5, 0.25, 100, 7}};
  write_estimates_csv(out, rows);
  CHECK(out.str() == "quantity,estimate,std_error,n_mc,seed\nC1,0.5,0.25,100,7\n");
}

TEST_CASE("estimates are reproducible and independent of the execution mode") {
  const RegionSpec region = RegionSpec::ball(vec({0.5, 0.5}), 0.3);
  const RatioEstimate a = estimate_expansion_ratio(unit_square(), region, 0.05, 50000, 14, Exec::serial);
  const RatioEstimate b = estimate_expansion_ratio(unit_square(), region, 0.05, 50000, 14, Exec::parallel);
  CHECK(a.ratio == b.ratio);
  CHECK(a.std_error == b.std_error);
}

}  // TEST_SUITE
