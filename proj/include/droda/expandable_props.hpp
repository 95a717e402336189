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

#ifndef DRODA_EXPANDABLE_PROPS_HPP
#define DRODA_EXPANDABLE_PROPS_HPP

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "droda/core_metrics.hpp"
#include "droda/parallel.hpp"

namespace droda {

// Draws one point into `out` (size dim). Must be safe to call concurrently
// with distinct generators.
struct Sampler {
  std::size_t dim = 0;
  std::function<void(Rng&, std::span<double>)> draw;
};

Sampler uniform_box(Vector lo, Vector hi);
Sampler isotropic_gaussian(Vector mean, double sigma);
// Weighted atoms; weights need not be normalized.
Sampler discrete_points(std::vector<Vector> points, std::vector<double> weights);

// {x : <normal, x> <= offset}; offset = +inf is the whole space.
struct HalfSpace {
  Vector normal;
  double offset = 0.0;
};

// {x : ||x - center||_2 <= radius}.
struct Ball {
  Vector center;
  double radius = 0.0;
};

struct RegionSpec {
  std::variant<HalfSpace, Ball> shape;

  static RegionSpec half_space(Vector normal, double offset);
  static RegionSpec ball(Vector center, double radius);
  static RegionSpec full_space(std::size_t dim);

  std::size_t dim() const;
  bool contains(std::span<const double> x) const;
  // Euclidean r-neighborhood, exact for both shapes.
  RegionSpec neighborhood(double r) const;
  // Exists |a| <= 1 with x - a * delta in the region.
  bool segment_neighborhood_contains(std::span<const double> x, const Vector& delta) const;

  void validate() const;
};

// Mass window for the sets entering the expansion constants.
struct ExpansionWindow {
  double a_lo = 0.1;
  double a_hi = 0.4;

  void validate() const;
};

struct MassEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_mc = 0;
  std::uint64_t seed = 0;
};

MassEstimate estimate_mass(const Sampler& sampler, const RegionSpec& region, std::size_t n_mc,
                           std::uint64_t seed, Exec exec = Exec::parallel);

struct RatioEstimate {
  double ratio = 1.0;
  double std_error = 0.0;
  MassEstimate base;
  MassEstimate neighborhood;
};

// P(N_r(A)) / P(A) from one sample; throws UnreliableEstimate when the
// estimate of P(A) is below 10 standard errors.
RatioEstimate estimate_expansion_ratio(const Sampler& sampler, const RegionSpec& region, double r,
                                       std::size_t n_mc, std::uint64_t seed,
                                       Exec exec = Exec::parallel);

struct ExpansionConstants {
  double C1 = 0.0;  // max of (ratio - 1) / r
  double C2 = 0.0;  // min of (ratio - 1) / r
  std::vector<double> r_used;
};

// Uses the smaller half of the (positive) r grid. Regions whose estimated
// mass is outside the window are rejected with InvalidInput.
ExpansionConstants fit_expansion_constants(const Sampler& sampler, std::span<const RegionSpec> regions,
                                           std::span<const double> r_grid, std::size_t n_mc,
                                           std::uint64_t seed, const ExpansionWindow& window = {},
                                           Exec exec = Exec::parallel);

struct SmoothnessEstimate {
  // (1/r) (P^s(N_delta(A)) / P^s(A) - 1) for s = +, - with r = ||delta||.
  double ratio_plus = 0.0;
  double ratio_minus = 0.0;
  double se_plus = 0.0;
  double se_minus = 0.0;
  // |v+ - v-| / (v+ + v-), 0 when both vanish.
  double epsilon = 0.0;
  double epsilon_se = 0.0;
};

SmoothnessEstimate estimate_directional_smoothness(const Sampler& plus, const Sampler& minus,
                                                   const RegionSpec& region, const Vector& delta,
                                                   std::size_t n_mc, std::uint64_t seed,
                                                   Exec exec = Exec::parallel);

// Smallest empirical 0-1 error found over linear classifiers.
double estimate_separation(const PointCloud& cloud, std::size_t restarts, std::uint64_t seed,
                           Exec exec = Exec::parallel);

// f(x) = A x + b.
struct AffineMap {
  Matrix A;
  Vector b;
};

struct EigenReport {
  bool within = false;
  // Complex pairs present: `values` then holds moduli instead of real parts.
  bool complex_spectrum = false;
  std::vector<std::complex<double>> eigenvalues;
  std::vector<double> values;
};

// Tests every eigenvalue of the linear part against [1 - 2 eps, 1 + 2 eps].
EigenReport jacobian_eig_bounds_check(const AffineMap& map, double eps);

struct CompatibilityBound {
  double value = 0.0;
  bool precondition_violated = false;  // eps > eta / (14 R)
};

// (1 + C1 (4 R eps + 2 eta)) alpha, hidden constant taken as 1.
CompatibilityBound compatibility_bound_expandable(double C1, double R, double eps, double eta,
                                                  double alpha);

struct EstimateRow {
  std::string quantity;
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t n_mc = 0;
  std::uint64_t seed = 0;
};

void write_estimates_csv(std::ostream& out, std::span<const EstimateRow> rows);

namespace kernels {

// Histogram of classify(x) over n draws; classify returns a value below
// `bins`. Blocks of kBlockSize draws use generator make_rng(seed, block).
using Classifier = std::function<unsigned(std::span<const double>)>;
std::vector<std::uint64_t> count_serial(const Sampler& sampler, std::size_t n, std::uint64_t seed,
                                        const Classifier& classify, unsigned bins);
std::vector<std::uint64_t> count_omp(const Sampler& sampler, std::size_t n, std::uint64_t seed,
                                     const Classifier& classify, unsigned bins);

}  // namespace kernels

}  // namespace droda

#endif  // DRODA_EXPANDABLE_PROPS_HPP
