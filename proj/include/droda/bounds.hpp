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

#ifndef DRODA_BOUNDS_HPP
#define DRODA_BOUNDS_HPP

#include <cstddef>
#include <vector>

namespace droda {

// Nonnegative nondecreasing compatibility function g(x).
class BoundSpec {
 public:
  enum class Kind { constant, affine, tabulated };

  static BoundSpec constant(double c);
  // g(x) = beta x + alpha.
  static BoundSpec affine(double beta, double alpha);
  // Piecewise-linear through (xs, ys), extended by the end slopes and
  // clamped at 0. xs strictly increasing, ys nonnegative nondecreasing.
  static BoundSpec tabulated(std::vector<double> xs, std::vector<double> ys);

  double operator()(double x) const;

  Kind kind() const { return kind_; }
  double beta() const { return beta_; }
  double alpha() const { return alpha_; }

 private:
  BoundSpec() = default;

  Kind kind_ = Kind::constant;
  double beta_ = 0.0;
  double alpha_ = 0.0;
  std::vector<double> xs_;
  std::vector<double> ys_;
};

// T applications of u <- g(2 lambda u + eta) starting at seed_risk.
double compose_bound(const BoundSpec& g, double lambda, double eta, std::size_t T, double seed_risk);

// Closed form of compose_bound for affine g with r = 2 lambda beta:
//   r^T u0 + (1 - r^T) / (1 - r) (beta eta + alpha), and T (beta eta + alpha) + u0 at r = 1.
double compose_bound_affine_closed(double beta, double alpha, double lambda, double eta, std::size_t T,
                                   double seed_risk);

// 3 (alpha + max_w / (3 lambda)); lambda must be > 0.
double corollary_bound_linear(double alpha, double lambda, double max_w);

struct GaussianCompat {
  double value = 0.0;
  bool in_range = false;  // eta <= L / 3
};

// exp(-L^2 / (18 sigma^2)) on eta in [0, L/3].
GaussianCompat gaussian_compat_bound(double L, double sigma, double eta);

// exp(-L^2 / (2 sigma^2)) + sqrt(eta exp(-L^2 / (2 sigma^2))).
double unconstrained_compat_lower(double L, double sigma, double eta);

// Smallest eta at which the unconstrained lower bound exceeds the constrained
// constant, (c - u)^2 / u with c = exp(-L^2/18 sigma^2), u = exp(-L^2/2 sigma^2).
double dichotomy_crossover(double L, double sigma);

// rho = 4 L^2 / sigma^2 exp(-L^2 / (18 sigma^2)).
double propagation_ratio(double L, double sigma);

struct NonasymptoticBound {
  double value = 0.0;
  double rho = 0.0;
  bool diverges = false;  // rho >= 1
};

// 2 exp(-L^2 / 2 sigma^2) + (d log(2T/delta) / n)^(1/4) sum_{i=1..T} rho^i.
NonasymptoticBound nonasymptotic_bound(double L, double sigma, std::size_t d, std::size_t n, std::size_t T,
                                       double delta);

struct SampleSizeRequirement {
  std::size_t n_required = 0;  // ceil(n_raw)
  double n_raw = 0.0;          // d log T / eps^4
  double bound = 0.0;          // 2 exp(-L^2 / 2 sigma^2) + eps / (1 - rho); nan if undefined
  double rho = 0.0;
  bool bound_defined = false;
};

SampleSizeRequirement sample_size_requirement(std::size_t d, std::size_t T, double eps, double L, double sigma);

struct DkwBound {
  double two_term = 0.0;  // 4 sqrt(log(m+1)/m) + sqrt((2/m) log(2/delta))
  double majorant = 0.0;  // 4 sqrt((2/m) log(4m/delta))
};

DkwBound dkw_uniform_bound(std::size_t m, double delta);

struct GeneralizationBound {
  double value = 0.0;
  double log_argument = 0.0;  // (R/delta) sqrt(n^3/d)
  bool log_argument_ok = false;
};

// 64 sqrt((d/n) log((R/delta) sqrt(n^3/d))); nan when the log argument is <= 1.
GeneralizationBound generalization_bound_dualdro(std::size_t d, std::size_t n, double R, double delta);

// (2 lambda exp(-L^2/2 sigma^2))^2 eta^(1/2^T) + exp(-L^2/2 sigma^2), hidden constant 1.
double propagated_unconstrained_bound(double L, double sigma, double lambda, double eta, std::size_t T);

}  // namespace droda

#endif  // DRODA_BOUNDS_HPP
