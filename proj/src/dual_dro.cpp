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

#include "droda/dual_dro.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "droda/errors.hpp"

namespace droda {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_unit(const LinearClassifier& h, std::size_t dim) {
  if (h.dim() != dim) throw InvalidInput("classifier dimension does not match the cloud");
}

double class_term(const std::vector<double>& margins, std::size_t total, double gamma) {
  if (margins.empty()) return 0.0;
  return static_cast<double>(margins.size()) / static_cast<double>(total) *
         classwise_sup_breakpoints(margins, gamma).value;
}

// Upper end of the gamma bracket: past it every positive breakpoint has
// negative candidate value and the adversary is inert.
double gamma_ceiling(const ClassMargins& m) {
  double min_pos = kInf;
  for (const auto* v : {&m.positive, &m.negative})
    for (double p : *v)
      if (p > 0.0) {
        min_pos = std::min(min_pos, p);
        break;  // sorted: first positive is the smallest
      }
  if (!std::isfinite(min_pos)) return 1.0;
  const double m_max = static_cast<double>(std::max(m.positive.size(), m.negative.size()));
  return 2.0 * m_max / min_pos;
}

Vector random_unit(Rng& rng, std::size_t dim) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(static_cast<Eigen::Index>(dim));
  do {
    for (Eigen::Index j = 0; j < v.size(); ++j) v(j) = normal(rng);
  } while (v.norm() == 0.0);
  return v / v.norm();
}

// Orthonormal basis of the tangent space at theta, one column per direction.
Matrix tangent_basis(const Vector& theta) {
  const Eigen::Index d = theta.size();
  const Matrix column = theta;
  Eigen::HouseholderQR<Matrix> qr(column);
  Matrix q = qr.householderQ() * Matrix::Identity(d, d);
  return q.rightCols(d - 1);
}

struct LocalResult {
  Vector theta;
  double value;
};

LocalResult local_search(const SphereObjective& f, Vector theta, const SphereSearchOptions& o,
                         std::uint64_t stream) {
  Rng rng = make_rng(o.seed, stream);
  std::normal_distribution<double> normal(0.0, 1.0);
  double value = f(theta);
  std::size_t evals = 1;
  double step = o.initial_step;
  const Eigen::Index d = theta.size();
  while (step >= o.min_step && evals < o.max_evaluations) {
    Matrix dirs(d, d - 1 + static_cast<Eigen::Index>(o.random_directions));
    dirs.leftCols(d - 1) = tangent_basis(theta);
    for (std::size_t k = 0; k < o.random_directions; ++k) {
      Vector g(d);
      for (Eigen::Index j = 0; j < d; ++j) g(j) = normal(rng);
      g -= g.dot(theta) * theta;
      const double gn = g.norm();
      dirs.col(d - 1 + static_cast<Eigen::Index>(k)) =
          gn > 0.0 ? Vector(g / gn) : Vector(dirs.col(0));
    }
    Vector best_theta = theta;
    double best = value;
    const double c = std::cos(step), s = std::sin(step);
    for (Eigen::Index k = 0; k < dirs.cols(); ++k) {
      for (double sign : {1.0, -1.0}) {
        Vector cand = c * theta + sign * s * dirs.col(k);
        cand /= cand.norm();
        const double v = f(cand);
        ++evals;
        if (v < best) {
          best = v;
          best_theta = std::move(cand);
        }
      }
    }
    if (best < value) {
      theta = std::move(best_theta);
      value = best;
    } else {
      step *= 0.5;
    }
  }
  return {std::move(theta), value};
}

}  // namespace

void DualParams::validate() const {
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be >= 0");
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidInput("eta must be finite and >= 0");
}

BreakpointSup classwise_sup_breakpoints(std::span<const double> p, double gamma) {
  if (p.empty()) throw InvalidInput("classwise_sup_breakpoints: empty margin list");
  if (!(gamma >= 0.0)) throw InvalidInput("classwise_sup_breakpoints: gamma must be >= 0");
  const std::size_t m = p.size();
  const double inv_m = 1.0 / static_cast<double>(m);
  std::size_t below = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (i > 0 && p[i] < p[i - 1]) throw InvalidInput("classwise_sup_breakpoints: margins not sorted");
    if (p[i] < 0.0) ++below;
  }
  BreakpointSup best{static_cast<double>(below) * inv_m, 0.0};
  for (std::size_t i = below; i < m; ++i) {
    double cand;
    if (std::isinf(gamma)) {
      if (p[i] != 0.0) break;
      cand = static_cast<double>(i + 1) * inv_m;
    } else {
      cand = static_cast<double>(i + 1) * inv_m - gamma * p[i];
    }
    if (cand > best.value) best = {cand, p[i]};
  }
  return best;
}

ClassMargins class_margins(const PointCloud& cloud, const LinearClassifier& h) {
  check_unit(h, cloud.dim());
  const Vector proj = cloud.features() * h.theta();
  ClassMargins out;
  out.total = cloud.size();
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const double p = cloud.label(i) * proj(static_cast<Eigen::Index>(i));
    (cloud.label(i) > 0 ? out.positive : out.negative).push_back(p);
  }
  std::sort(out.positive.begin(), out.positive.end());
  std::sort(out.negative.begin(), out.negative.end());
  return out;
}

double dual_risk_from_margins(const ClassMargins& m, double gamma) {
  if (m.total == 0) throw InvalidInput("dual risk of an empty cloud");
  return class_term(m.positive, m.total, gamma) + class_term(m.negative, m.total, gamma);
}

double empirical_dual_risk(const PointCloud& cloud, const LinearClassifier& h, double gamma) {
  return dual_risk_from_margins(class_margins(cloud, h), gamma);
}

double empirical_zero_one_error(const PointCloud& cloud, const LinearClassifier& h) {
  check_unit(h, cloud.dim());
  if (cloud.empty()) throw InvalidInput("zero-one error of an empty cloud");
  const Vector proj = cloud.features() * h.theta();
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < cloud.size(); ++i)
    if (cloud.label(i) * proj(static_cast<Eigen::Index>(i)) <= 0.0) ++wrong;
  return static_cast<double>(wrong) / static_cast<double>(cloud.size());
}

double population_dual_risk_gaussian(const GaussianModel& model, const LinearClassifier& h,
                                     double gamma) {
  model.validate();
  if (h.dim() != model.dim()) throw InvalidInput("classifier dimension does not match the model");
  if (!(gamma >= 0.0)) throw InvalidInput("gamma must be >= 0");
  const double a = h.theta().dot(model.mu);
  const double sigma = model.sigma;
  // F(t) = P(margin < t) for margin ~ N(a, sigma^2).
  auto F = [&](double t) { return qfunction((a - t) / sigma); };
  const double no_move = F(0.0);
  if (gamma == 0.0) return 1.0;
  const double peak = 1.0 / (std::sqrt(2.0 * std::numbers::pi) * sigma);
  if (gamma >= peak) return no_move;
  const double t_star = a + sigma * std::sqrt(2.0 * std::log(peak / gamma));
  if (t_star <= 0.0) return no_move;
  return std::max(no_move, F(t_star) - gamma * t_star);
}

RadiusFormRisk radius_form_risk(const ClassMargins& margins, double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw InvalidInput("eta must be finite and >= 0");
  auto objective = [&](double g) { return g * eta + dual_risk_from_margins(margins, g); };

  RadiusFormRisk best{objective(0.0), 0.0};
  auto consider = [&](double g, double v) {
    if (v < best.risk) best = {v, g};
  };

  const double hi = std::max(gamma_ceiling(margins), 10.0 * kGammaFloor);
  const double log_lo = std::log(kGammaFloor), log_hi = std::log(hi);
  std::vector<double> grid(kGammaGridPoints), vals(kGammaGridPoints);
  std::size_t arg = 0;
  for (std::size_t k = 0; k < kGammaGridPoints; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(kGammaGridPoints - 1);
    grid[k] = k + 1 == kGammaGridPoints ? hi : std::exp(log_lo + t * (log_hi - log_lo));
    vals[k] = objective(grid[k]);
    consider(grid[k], vals[k]);
    if (vals[k] < vals[arg]) arg = k;
  }

  // The objective is piecewise linear in gamma; golden-section on the bracket
  // around the best grid point.
  double a = arg == 0 ? 0.0 : grid[arg - 1];
  double b = arg + 1 == kGammaGridPoints ? hi : grid[arg + 1];
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
  double f1 = objective(x1), f2 = objective(x2);
  consider(x1, f1);
  consider(x2, f2);
  for (int it = 0; it < 200 && b - a > 1e-12 * (1.0 + b); ++it) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = objective(x1);
      consider(x1, f1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = objective(x2);
      consider(x2, f2);
    }
  }
  return best;
}

RadiusFormRisk radius_form_risk(const PointCloud& cloud, const LinearClassifier& h, double eta) {
  return radius_form_risk(class_margins(cloud, h), eta);
}

double dual_objective(const PointCloud& cloud, const LinearClassifier& h, const DualParams& params) {
  params.validate();
  if (params.form == DualForm::penalty) {
    // Adversary priced out: the dual risk is the 0-1 error, without the sort.
    if (std::isinf(params.gamma)) return empirical_zero_one_error(cloud, h);
    return empirical_dual_risk(cloud, h, params.gamma);
  }
  return radius_form_risk(cloud, h, params.eta).risk;
}

SphereResult minimize_on_sphere(const SphereObjective& objective, std::size_t dim,
                                const SphereSearchOptions& o) {
  if (dim == 0) throw InvalidInput("minimize_on_sphere: dimension must be >= 1");
  if (o.restarts == 0 && o.warm_starts.empty())
    throw InvalidInput("minimize_on_sphere: need at least one start");

  if (dim == 1) {
    const Vector plus = Vector::Ones(1), minus = -Vector::Ones(1);
    const double fp = objective(plus), fm = objective(minus);
    return fm < fp ? SphereResult{LinearClassifier(minus), fm} : SphereResult{LinearClassifier(plus), fp};
  }

  std::vector<Vector> starts;
  for (const Vector& w : o.warm_starts) {
    if (static_cast<std::size_t>(w.size()) != dim || !(w.norm() > 0.0))
      throw InvalidInput("minimize_on_sphere: bad warm start");
    starts.push_back(w / w.norm());
  }
  for (std::size_t r = 0; r < o.restarts; ++r) {
    Rng rng = make_rng(o.seed, r);
    starts.push_back(random_unit(rng, dim));
  }

  std::vector<LocalResult> results(starts.size());
  const auto count = static_cast<std::ptrdiff_t>(starts.size());
  if (o.exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < count; ++i)
      results[i] = local_search(objective, starts[i], o, 0x5eed0000ULL + static_cast<std::uint64_t>(i));
  } else {
    for (std::ptrdiff_t i = 0; i < count; ++i)
      results[i] = local_search(objective, starts[i], o, 0x5eed0000ULL + static_cast<std::uint64_t>(i));
  }

  std::size_t best = 0;
  for (std::size_t i = 1; i < results.size(); ++i)
    if (results[i].value < results[best].value) best = i;
  return {LinearClassifier::from_direction(results[best].theta), results[best].value};
}

SphereResult minimize_over_sphere(const PointCloud& cloud, const DualParams& params,
                                  std::size_t restarts, std::uint64_t seed, Exec exec,
                                  std::span<const Vector> warm_starts) {
  params.validate();
  if (cloud.empty()) throw InvalidInput("minimize_over_sphere: empty cloud");
  if (restarts == 0) throw InvalidInput("minimize_over_sphere: restarts must be >= 1");
  SphereSearchOptions o;
  o.restarts = restarts;
  o.seed = seed;
  o.exec = exec;
  o.warm_starts.assign(warm_starts.begin(), warm_starts.end());
  SphereObjective f = [&](const Vector& theta) {
    return dual_objective(cloud, LinearClassifier::from_direction(theta), params);
  };
  SphereResult r = minimize_on_sphere(f, cloud.dim(), o);
  // Re-evaluate on the normalized classifier so the reported risk is exact.
  r.risk = dual_objective(cloud, r.classifier, params);
  return r;
}

}  // namespace droda
