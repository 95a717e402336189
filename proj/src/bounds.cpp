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

#include "droda/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "droda/errors.hpp"

namespace droda {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite and > 0");
}

void require_nonneg(double v, const char* what) {
  if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput(std::string(what) + " must be finite and >= 0");
}

double tail_factor(double L, double sigma, double divisor) {
  return std::exp(-L * L / (divisor * sigma * sigma));
}

}  // namespace

BoundSpec BoundSpec::constant(double c) {
  require_nonneg(c, "constant bound");
  BoundSpec g;
  g.kind_ = Kind::constant;
  g.alpha_ = c;
  return g;
}

BoundSpec BoundSpec::affine(double beta, double alpha) {
  require_nonneg(beta, "affine slope");
  require_nonneg(alpha, "affine intercept");
  BoundSpec g;
  g.kind_ = Kind::affine;
  g.beta_ = beta;
  g.alpha_ = alpha;
  return g;
}

BoundSpec BoundSpec::tabulated(std::vector<double> xs, std::vector<double> ys) {
  if (xs.size() < 2 || xs.size() != ys.size()) throw InvalidInput("tabulated bound: need >= 2 matching samples");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw InvalidInput("tabulated bound: non-finite sample");
    if (ys[i] < 0.0) throw InvalidInput("tabulated bound: negative value");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw InvalidInput("tabulated bound: x not strictly increasing");
    if (i > 0 && ys[i] < ys[i - 1]) throw InvalidInput("tabulated bound: values not monotone");
  }
  BoundSpec g;
  g.kind_ = Kind::tabulated;
  g.xs_ = std::move(xs);
  g.ys_ = std::move(ys);
  return g;
}

double BoundSpec::operator()(double x) const {
  switch (kind_) {
    case Kind::constant: return alpha_;
    case Kind::affine: return beta_ * x + alpha_;
    case Kind::tabulated: break;
  }
  const std::size_t m = xs_.size();
  std::size_t k = 0;  // segment [k, k+1]
  if (x >= xs_[m - 1]) {
    k = m - 2;
  } else if (x > xs_[0]) {
    while (xs_[k + 1] < x) ++k;
  }
  const double slope = (ys_[k + 1] - ys_[k]) / (xs_[k + 1] - xs_[k]);
  return std::max(0.0, ys_[k] + slope * (x - xs_[k]));
}

double compose_bound(const BoundSpec& g, double lambda, double eta, std::size_t T, double seed_risk) {
  require_nonneg(lambda, "lambda");
  require_nonneg(eta, "eta");
  require_nonneg(seed_risk, "seed risk");
  double u = seed_risk;
  for (std::size_t t = 0; t < T; ++t) u = g(2.0 * lambda * u + eta);
  return u;
}

double compose_bound_affine_closed(double beta, double alpha, double lambda, double eta, std::size_t T,
                                   double seed_risk) {
  const double r = 2.0 * lambda * beta;
  const double c = beta * eta + alpha;
  const double rT = std::pow(r, static_cast<double>(T));
  if (r == 1.0) return seed_risk + static_cast<double>(T) * c;
  return rT * seed_risk + (1.0 - rT) / (1.0 - r) * c;
}

double corollary_bound_linear(double alpha, double lambda, double max_w) {
  require_positive(lambda, "lambda");
  require_nonneg(alpha, "alpha");
  require_nonneg(max_w, "max_w");
  return 3.0 * (alpha + max_w / (3.0 * lambda));
}

GaussianCompat gaussian_compat_bound(double L, double sigma, double eta) {
  require_positive(L, "L");
  require_positive(sigma, "sigma");
  require_nonneg(eta, "eta");
  return {tail_factor(L, sigma, 18.0), eta <= L / 3.0};
}

double unconstrained_compat_lower(double L, double sigma, double eta) {
  require_positive(L, "L");
  require_positive(sigma, "sigma");
  require_nonneg(eta, "eta");
  const double u = tail_factor(L, sigma, 2.0);
  return u + std::sqrt(eta * u);
}

double dichotomy_crossover(double L, double sigma) {
  require_positive(L, "L");
  require_positive(sigma, "sigma");
  const double c = tail_factor(L, sigma, 18.0);
  const double u = tail_factor(L, sigma, 2.0);
  return (c - u) * (c - u) / u;
}

double propagation_ratio(double L, double sigma) {
  require_positive(L, "L");
  require_positive(sigma, "sigma");
  return 4.0 * L * L / (sigma * sigma) * tail_factor(L, sigma, 18.0);
}

NonasymptoticBound nonasymptotic_bound(double L, double sigma, std::size_t d, std::size_t n, std::size_t T,
                                       double delta) {
  if (n < 1 || T < 1 || d < 1) throw InvalidInput("nonasymptotic bound: d, n, T must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("nonasymptotic bound: delta must lie in (0, 1]");
  NonasymptoticBound out;
  out.rho = propagation_ratio(L, sigma);
  out.diverges = out.rho >= 1.0;
  double sum = 0.0, power = 1.0;
  for (std::size_t i = 1; i <= T; ++i) {
    power *= out.rho;
    sum += power;
  }
  const double rate = std::pow(static_cast<double>(d) * std::log(2.0 * static_cast<double>(T) / delta) /
                                   static_cast<double>(n),
                               0.25);
  out.value = 2.0 * tail_factor(L, sigma, 2.0) + rate * sum;
  return out;
}

SampleSizeRequirement sample_size_requirement(std::size_t d, std::size_t T, double eps, double L, double sigma) {
  if (T < 2) throw InvalidInput("sample size requirement: T must be >= 2");
  if (d < 1) throw InvalidInput("sample size requirement: d must be >= 1");
  require_positive(eps, "eps");
  SampleSizeRequirement out;
  out.n_raw = static_cast<double>(d) * std::log(static_cast<double>(T)) / std::pow(eps, 4.0);
  out.n_required = static_cast<std::size_t>(std::ceil(out.n_raw));
  out.rho = propagation_ratio(L, sigma);
  out.bound_defined = out.rho < 1.0;
  out.bound = out.bound_defined ? 2.0 * tail_factor(L, sigma, 2.0) + eps / (1.0 - out.rho) : kNaN;
  return out;
}

DkwBound dkw_uniform_bound(std::size_t m, double delta) {
  if (m < 1) throw InvalidInput("dkw bound: m must be >= 1");
  if (!(delta > 0.0 && delta <= 1.0)) throw InvalidInput("dkw bound: delta must lie in (0, 1]");
  const double dm = static_cast<double>(m);
  return {4.0 * std::sqrt(std::log(dm + 1.0) / dm) + std::sqrt(2.0 / dm * std::log(2.0 / delta)),
          4.0 * std::sqrt(2.0 / dm * std::log(4.0 * dm / delta))};
}

GeneralizationBound generalization_bound_dualdro(std::size_t d, std::size_t n, double R, double delta) {
  if (d < 1 || n <= d) throw InvalidInput("generalization bound: need n > d >= 1");
  require_positive(R, "R");
  require_positive(delta, "delta");
  const double dd = static_cast<double>(d), dn = static_cast<double>(n);
  GeneralizationBound out;
  out.log_argument = R / delta * std::sqrt(dn * dn * dn / dd);
  out.log_argument_ok = out.log_argument > 1.0;
  out.value = out.log_argument_ok ? 64.0 * std::sqrt(dd / dn * std::log(out.log_argument)) : kNaN;
  return out;
}

double propagated_unconstrained_bound(double L, double sigma, double lambda, double eta, std::size_t T) {
  require_positive(L, "L");
  require_positive(sigma, "sigma");
  require_nonneg(lambda, "lambda");
  require_nonneg(eta, "eta");
  const double u = tail_factor(L, sigma, 2.0);
  const double lead = 2.0 * lambda * u;
  return lead * lead * std::pow(eta, std::ldexp(1.0, -static_cast<int>(std::min<std::size_t>(T, 1000)))) + u;
}

}  // namespace droda
