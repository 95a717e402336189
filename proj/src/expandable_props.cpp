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

#include "droda/expandable_props.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>

#include <Eigen/Eigenvalues>

#include "droda/dual_dro.hpp"
#include "droda/errors.hpp"
#include "droda/format.hpp"

namespace droda {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Eigen::Map<const Vector> as_vector(std::span<const double> x) {
  return {x.data(), static_cast<Eigen::Index>(x.size())};
}

void count_block(const Sampler& sampler, std::size_t n, std::uint64_t seed, std::size_t block,
                 const kernels::Classifier& classify, std::uint64_t* hist, unsigned bins) {
  Rng rng = make_rng(seed, block);
  std::vector<double> x(sampler.dim);
  const std::size_t begin = block * kBlockSize;
  const std::size_t end = std::min(n, begin + kBlockSize);
  for (std::size_t i = begin; i < end; ++i) {
    sampler.draw(rng, x);
    ++hist[std::min(classify(x), bins - 1)];
  }
}

std::vector<std::uint64_t> count(const Sampler& sampler, std::size_t n, std::uint64_t seed,
                                 const kernels::Classifier& classify, unsigned bins, Exec exec) {
  if (n == 0) throw InvalidInput("Monte Carlo size must be >= 1");
  if (sampler.dim == 0 || !sampler.draw) throw InvalidInput("sampler is empty");
  return exec == Exec::parallel ? kernels::count_omp(sampler, n, seed, classify, bins)
                                : kernels::count_serial(sampler, n, seed, classify, bins);
}

MassEstimate mass_from_count(std::uint64_t hits, std::size_t n, std::uint64_t seed) {
  const double p = static_cast<double>(hits) / static_cast<double>(n);
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

// Ratio P(N)/P(A) with delta-method error from joint membership counts.
// Bits: 1 = in A, 2 = in N.
RatioEstimate ratio_from_hist(const std::vector<std::uint64_t>& h, std::size_t n, std::uint64_t seed) {
  const std::uint64_t in_a = h[1] + h[3];
  const std::uint64_t in_n = h[2] + h[3];
  RatioEstimate out;
  out.base = mass_from_count(in_a, n, seed);
  out.neighborhood = mass_from_count(in_n, n, seed);
  if (in_a == 0 || out.base.estimate < 10.0 * out.base.std_error) {
    throw UnreliableEstimate("region mass estimate " + format_double(out.base.estimate) +
                             " is below 10 standard errors");
  }
  const double dn = static_cast<double>(n);
  const double pa = out.base.estimate, pn = out.neighborhood.estimate;
  const double pan = static_cast<double>(h[3]) / dn;
  out.ratio = pn / pa;
  const double r = out.ratio;
  const double second = pn - 2.0 * r * pan + r * r * pa;  // E[(1_N - r 1_A)^2]
  out.std_error = std::sqrt(std::max(0.0, second) / dn) / pa;
  return out;
}

}  // namespace

namespace kernels {

std::vector<std::uint64_t> count_serial(const Sampler& sampler, std::size_t n, std::uint64_t seed,
                                        const Classifier& classify, unsigned bins) {
  std::vector<std::uint64_t> hist(bins, 0);
  for (std::size_t b = 0; b < block_count(n); ++b) count_block(sampler, n, seed, b, classify, hist.data(), bins);
  return hist;
}

std::vector<std::uint64_t> count_omp(const Sampler& sampler, std::size_t n, std::uint64_t seed,
                                     const Classifier& classify, unsigned bins) {
  const auto blocks = static_cast<std::ptrdiff_t>(block_count(n));
  std::vector<std::uint64_t> per_block(static_cast<std::size_t>(blocks) * bins, 0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    count_block(sampler, n, seed, static_cast<std::size_t>(b), classify,
                per_block.data() + static_cast<std::size_t>(b) * bins, bins);
  }
  std::vector<std::uint64_t> hist(bins, 0);
  for (std::ptrdiff_t b = 0; b < blocks; ++b)
    for (unsigned k = 0; k < bins; ++k) hist[k] += per_block[static_cast<std::size_t>(b) * bins + k];
  return hist;
}

}  // namespace kernels

Sampler uniform_box(Vector lo, Vector hi) {
  if (lo.size() < 1 || lo.size() != hi.size() || !(hi.array() >= lo.array()).all())
    throw InvalidInput("uniform_box: need lo <= hi of equal dimension");
  const std::size_t d = static_cast<std::size_t>(lo.size());
  return {d, [lo = std::move(lo), hi = std::move(hi)](Rng& rng, std::span<double> out) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            for (std::size_t k = 0; k < out.size(); ++k) {
              const auto j = static_cast<Eigen::Index>(k);
              out[k] = lo(j) + (hi(j) - lo(j)) * u(rng);
            }
          }};
}

Sampler isotropic_gaussian(Vector mean, double sigma) {
  if (mean.size() < 1 || !(sigma > 0.0)) throw InvalidInput("isotropic_gaussian: bad parameters");
  const std::size_t d = static_cast<std::size_t>(mean.size());
  return {d, [mean = std::move(mean), sigma](Rng& rng, std::span<double> out) {
            std::normal_distribution<double> normal(0.0, 1.0);
            for (std::size_t k = 0; k < out.size(); ++k)
              out[k] = mean(static_cast<Eigen::Index>(k)) + sigma * normal(rng);
          }};
}

Sampler discrete_points(std::vector<Vector> points, std::vector<double> weights) {
  if (points.empty() || points.size() != weights.size())
    throw InvalidInput("discrete_points: need one weight per point");
  for (const Vector& p : points)
    if (p.size() != points[0].size() || p.size() < 1) throw InvalidInput("discrete_points: dimension mismatch");
  for (double w : weights)
    if (!(w >= 0.0) || !std::isfinite(w)) throw InvalidInput("discrete_points: bad weight");
  if (std::accumulate(weights.begin(), weights.end(), 0.0) <= 0.0)
    throw InvalidInput("discrete_points: weights sum to zero");
  const std::size_t d = static_cast<std::size_t>(points[0].size());
  return {d, [points = std::move(points), weights = std::move(weights)](Rng& rng, std::span<double> out) {
            std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
            const Vector& p = points[pick(rng)];
            for (std::size_t k = 0; k < out.size(); ++k) out[k] = p(static_cast<Eigen::Index>(k));
          }};
}

RegionSpec RegionSpec::half_space(Vector normal, double offset) {
  RegionSpec r{HalfSpace{std::move(normal), offset}};
  r.validate();
  return r;
}

RegionSpec RegionSpec::ball(Vector center, double radius) {
  RegionSpec r{Ball{std::move(center), radius}};
  r.validate();
  return r;
}

RegionSpec RegionSpec::full_space(std::size_t dim) {
  Vector n = Vector::Zero(static_cast<Eigen::Index>(dim));
  if (dim > 0) n(0) = 1.0;
  return half_space(std::move(n), kInf);
}

void RegionSpec::validate() const {
  if (const auto* h = std::get_if<HalfSpace>(&shape)) {
    if (h->normal.size() < 1 || !h->normal.allFinite() || h->normal.norm() == 0.0)
      throw InvalidInput("half-space normal must be finite and non-zero");
    if (std::isnan(h->offset) || h->offset == -kInf) throw InvalidInput("half-space offset must be > -inf");
  } else {
    const auto& b = std::get<Ball>(shape);
    if (b.center.size() < 1 || !b.center.allFinite()) throw InvalidInput("ball center must be finite");
    if (!(b.radius >= 0.0) || !std::isfinite(b.radius)) throw InvalidInput("ball radius must be finite and >= 0");
  }
}

std::size_t RegionSpec::dim() const {
  if (const auto* h = std::get_if<HalfSpace>(&shape)) return static_cast<std::size_t>(h->normal.size());
  return static_cast<std::size_t>(std::get<Ball>(shape).center.size());
}

bool RegionSpec::contains(std::span<const double> x) const {
  if (x.size() != dim()) throw InvalidInput("region membership: dimension mismatch");
  const auto v = as_vector(x);
  if (const auto* h = std::get_if<HalfSpace>(&shape)) return h->normal.dot(v) <= h->offset;
  const auto& b = std::get<Ball>(shape);
  return (v - b.center).norm() <= b.radius;
}

RegionSpec RegionSpec::neighborhood(double r) const {
  if (!(r >= 0.0) || !std::isfinite(r)) throw InvalidInput("neighborhood radius must be finite and >= 0");
  if (const auto* h = std::get_if<HalfSpace>(&shape)) return half_space(h->normal, h->offset + r * h->normal.norm());
  const auto& b = std::get<Ball>(shape);
  return ball(b.center, b.radius + r);
}

bool RegionSpec::segment_neighborhood_contains(std::span<const double> x, const Vector& delta) const {
  if (x.size() != dim() || static_cast<std::size_t>(delta.size()) != dim())
    throw InvalidInput("segment neighborhood: dimension mismatch");
  const auto v = as_vector(x);
  if (const auto* h = std::get_if<HalfSpace>(&shape))
    return h->normal.dot(v) - std::abs(h->normal.dot(delta)) <= h->offset;
  const auto& b = std::get<Ball>(shape);
  const double dd = delta.squaredNorm();
  const Vector rel = v - b.center;
  const double a = dd > 0.0 ? std::clamp(rel.dot(delta) / dd, -1.0, 1.0) : 0.0;
  return (rel - a * delta).norm() <= b.radius;
}

void ExpansionWindow::validate() const {
  if (!(0.0 < a_lo && a_lo <= a_hi && a_hi < 0.5)) throw InvalidInput("mass window needs 0 < a_lo <= a_hi < 1/2");
}

MassEstimate estimate_mass(const Sampler& sampler, const RegionSpec& region, std::size_t n_mc,
                           std::uint64_t seed, Exec exec) {
  region.validate();
  if (region.dim() != sampler.dim) throw InvalidInput("estimate_mass: dimension mismatch");
  const auto h = count(sampler, n_mc, seed, [&](std::span<const double> x) { return region.contains(x) ? 1u : 0u; },
                       2, exec);
  return mass_from_count(h[1], n_mc, seed);
}

RatioEstimate estimate_expansion_ratio(const Sampler& sampler, const RegionSpec& region, double r,
                                       std::size_t n_mc, std::uint64_t seed, Exec exec) {
  region.validate();
  if (region.dim() != sampler.dim) throw InvalidInput("estimate_expansion_ratio: dimension mismatch");
  const RegionSpec grown = region.neighborhood(r);
  const auto h = count(
      sampler, n_mc, seed,
      [&](std::span<const double> x) { return (region.contains(x) ? 1u : 0u) | (grown.contains(x) ? 2u : 0u); }, 4,
      exec);
  return ratio_from_hist(h, n_mc, seed);
}

ExpansionConstants fit_expansion_constants(const Sampler& sampler, std::span<const RegionSpec> regions,
                                           std::span<const double> r_grid, std::size_t n_mc,
                                           std::uint64_t seed, const ExpansionWindow& window, Exec exec) {
  window.validate();
  if (regions.empty()) throw InvalidInput("fit_expansion_constants: no regions");
  std::vector<double> rs;
  for (double r : r_grid) {
    if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("fit_expansion_constants: r values must be positive");
    rs.push_back(r);
  }
  if (rs.empty()) throw InvalidInput("fit_expansion_constants: empty r grid");
  std::sort(rs.begin(), rs.end());
  rs.erase(std::unique(rs.begin(), rs.end()), rs.end());
  rs.resize((rs.size() + 1) / 2);

  ExpansionConstants out;
  out.r_used = rs;
  out.C1 = -kInf;
  out.C2 = kInf;
  for (std::size_t a = 0; a < regions.size(); ++a) {
    for (std::size_t k = 0; k < rs.size(); ++k) {
      // Common random numbers per region keep ratios nested across r.
      const RatioEstimate e = estimate_expansion_ratio(sampler, regions[a], rs[k], n_mc, derive_seed(seed, a), exec);
      if (e.base.estimate < window.a_lo || e.base.estimate > window.a_hi)
        throw InvalidInput("region " + std::to_string(a) + " has mass " + format_double(e.base.estimate) +
                           " outside the window");
      const double c = (e.ratio - 1.0) / rs[k];
      out.C1 = std::max(out.C1, c);
      out.C2 = std::min(out.C2, c);
    }
  }
  return out;
}

SmoothnessEstimate estimate_directional_smoothness(const Sampler& plus, const Sampler& minus,
                                                   const RegionSpec& region, const Vector& delta,
                                                   std::size_t n_mc, std::uint64_t seed, Exec exec) {
  region.validate();
  const double r = delta.norm();
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidInput("smoothness: delta must be finite and non-zero");
  if (plus.dim != region.dim() || minus.dim != region.dim())
    throw InvalidInput("smoothness: dimension mismatch");

  auto one_class = [&](const Sampler& s, std::uint64_t stream) {
    const auto h = count(
        s, n_mc, derive_seed(seed, stream),
        [&](std::span<const double> x) {
          return (region.contains(x) ? 1u : 0u) | (region.segment_neighborhood_contains(x, delta) ? 2u : 0u);
        },
        4, exec);
    return ratio_from_hist(h, n_mc, derive_seed(seed, stream));
  };
  const RatioEstimate p = one_class(plus, 0);
  const RatioEstimate m = one_class(minus, 1);

  SmoothnessEstimate out;
  out.ratio_plus = (p.ratio - 1.0) / r;
  out.ratio_minus = (m.ratio - 1.0) / r;
  out.se_plus = p.std_error / r;
  out.se_minus = m.std_error / r;
  const double a = out.ratio_plus, b = out.ratio_minus, s = a + b;
  if (s > 0.0) {
    out.epsilon = std::abs(a - b) / s;
    out.epsilon_se = 2.0 * std::sqrt(b * b * out.se_plus * out.se_plus + a * a * out.se_minus * out.se_minus) / (s * s);
  }
  return out;
}

double estimate_separation(const PointCloud& cloud, std::size_t restarts, std::uint64_t seed, Exec exec) {
  if (cloud.empty()) throw InvalidInput("estimate_separation: empty cloud");
  DualParams params;
  params.form = DualForm::penalty;
  params.gamma = kInf;
  Vector mean = Vector::Zero(static_cast<Eigen::Index>(cloud.dim()));
  for (std::size_t i = 0; i < cloud.size(); ++i) mean += cloud.label(i) * cloud.row(i).transpose();
  std::vector<Vector> warm;
  if (mean.norm() > 0.0) warm.push_back(mean / mean.norm());
  return minimize_over_sphere(cloud, params, restarts, seed, exec, warm).risk;
}

EigenReport jacobian_eig_bounds_check(const AffineMap& map, double eps) {
  const Matrix& A = map.A;
  if (A.rows() < 1 || A.rows() != A.cols()) throw InvalidInput("jacobian check: matrix must be square");
  if (!A.allFinite() || (map.b.size() > 0 && !map.b.allFinite()))
    throw InvalidInput("jacobian check: non-finite entries");
  if (map.b.size() > 0 && map.b.size() != A.rows()) throw InvalidInput("jacobian check: offset dimension mismatch");
  if (!(eps >= 0.0)) throw InvalidInput("jacobian check: eps must be >= 0");

  EigenReport rep;
  if (A == A.transpose()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < A.rows(); ++k) rep.eigenvalues.emplace_back(es.eigenvalues()(k), 0.0);
  } else {
    Eigen::EigenSolver<Matrix> es(A, false);
    for (Eigen::Index k = 0; k < A.rows(); ++k) rep.eigenvalues.push_back(es.eigenvalues()(k));
  }
  for (const auto& z : rep.eigenvalues)
    if (z.imag() != 0.0) rep.complex_spectrum = true;
  rep.within = true;
  for (const auto& z : rep.eigenvalues) {
    const double v = rep.complex_spectrum ? std::abs(z) : z.real();
    rep.values.push_back(v);
    if (v < 1.0 - 2.0 * eps || v > 1.0 + 2.0 * eps) rep.within = false;
  }
  return rep;
}

CompatibilityBound compatibility_bound_expandable(double C1, double R, double eps, double eta, double alpha) {
  for (double v : {C1, R, eps, eta, alpha})
    if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidInput("compatibility bound: inputs must be finite and >= 0");
  CompatibilityBound out;
  out.value = (1.0 + C1 * (4.0 * R * eps + 2.0 * eta)) * alpha;
  out.precondition_violated = R > 0.0 ? eps > eta / (14.0 * R) : false;
  return out;
}

void write_estimates_csv(std::ostream& out, std::span<const EstimateRow> rows) {
  out << "quantity,estimate,std_error,n_mc,seed\n";
  for (const EstimateRow& r : rows)
    out << r.quantity << ',' << format_double(r.estimate) << ',' << format_double(r.std_error) << ',' << r.n_mc
        << ',' << r.seed << '\n';
}

}  // namespace droda
