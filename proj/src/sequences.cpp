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

#include "droda/sequences.hpp"

#include <cmath>
#include <string>

#include "droda/errors.hpp"
#include "droda/format.hpp"

namespace droda {

namespace {

Vector random_unit(Rng& rng, Eigen::Index d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  do {
    for (Eigen::Index k = 0; k < d; ++k) v(k) = normal(rng);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

void rotate_plane(Eigen::Ref<Vector> v, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double x0 = v(0), x1 = v(1);
  v(0) = c * x0 - s * x1;
  v(1) = s * x0 + c * x1;
}

}  // namespace

std::string_view path_name(PathMode m) {
  switch (m) {
    case PathMode::straight: return "straight";
    case PathMode::random_walk: return "random-walk";
    case PathMode::orbit: return "orbit";
    case PathMode::rotating2d: return "rotating2d";
  }
  return "unknown";
}

PathMode parse_path(std::string_view name) {
  for (PathMode m : {PathMode::straight, PathMode::random_walk, PathMode::orbit, PathMode::rotating2d})
    if (path_name(m) == name) return m;
  throw ConfigError("unknown path mode '" + std::string(name) + "'");
}

PairDistance pair_distance(const GaussianModel& a, const GaussianModel& b) {
  const double minus = (a.mu - b.mu).norm();
  const double plus = (a.mu + b.mu).norm();
  return {minus, std::min(minus, plus) / 2.0, minus};
}

SequencePath make_path(std::vector<GaussianModel> models) {
  SequencePath path;
  path.models = std::move(models);
  for (std::size_t i = 0; i + 1 < path.models.size(); ++i)
    path.pairs.push_back(pair_distance(path.models[i], path.models[i + 1]));
  return path;
}

SequencePath generate_sequence_gaussian(const Vector& mu0, double sigma, double step_len, std::size_t T,
                                        PathMode mode, double L, std::uint64_t seed, double mean_budget) {
  if (mu0.size() < 1 || !mu0.allFinite()) throw ConfigError("mu0 must be a finite vector");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be > 0");
  if (!(step_len >= 0.0) || !std::isfinite(step_len)) throw ConfigError("step_len must be finite and >= 0");
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("L must be > 0");
  const double r0 = mu0.norm();
  if (r0 < L) throw ConfigError("||mu0|| = " + format_double(r0) + " is below L = " + format_double(L));
  const Eigen::Index d = mu0.size();

  Rng rng = make_rng(seed, 0x5e9);
  std::vector<GaussianModel> models{{mu0, sigma}};
  models.reserve(T + 1);
  switch (mode) {
    case PathMode::straight: {
      const Vector dir = random_unit(rng, d);
      for (std::size_t i = 1; i <= T; ++i) models.push_back({mu0 + static_cast<double>(i) * step_len * dir, sigma});
      break;
    }
    case PathMode::random_walk: {
      Vector mu = mu0;
      for (std::size_t i = 1; i <= T; ++i) {
        Vector v = random_unit(rng, d);
        if ((mu + step_len * v).norm() < L) {
          const Vector radial = mu / mu.norm();
          v -= 2.0 * v.dot(radial) * radial;
        }
        mu += step_len * v;
        models.push_back({mu, sigma});
      }
      break;
    }
    case PathMode::orbit: {
      if (d < 2) {
        if (step_len > 0.0) throw ConfigError("orbit path needs d >= 2");
        models.assign(T + 1, GaussianModel{mu0, sigma});
        break;
      }
      const Vector e1 = mu0 / r0;
      Vector u;
      do {
        u = random_unit(rng, d);
        u -= u.dot(e1) * e1;
      } while (u.norm() < 1e-6);
      u /= u.norm();
      const double angle = step_len / r0;
      for (std::size_t i = 1; i <= T; ++i) {
        const double a = angle * static_cast<double>(i);
        models.push_back({r0 * (std::cos(a) * e1 + std::sin(a) * u), sigma});
      }
      break;
    }
    case PathMode::rotating2d: {
      if (d < 2) throw ConfigError("rotating2d path needs d >= 2");
      models = generate_sequence_rotating2d(GaussianModel{mu0, sigma}, step_len / r0, T);
      break;
    }
  }

  SequencePath path = make_path(std::move(models));
  for (std::size_t i = 0; i < path.models.size(); ++i) {
    const double norm = path.models[i].mu.norm();
    if (norm < L * (1.0 - 1e-12))
      throw ConfigError("model " + std::to_string(i) + " has ||mu|| = " + format_double(norm) + " < L");
  }
  for (std::size_t i = 0; i < path.pairs.size(); ++i) {
    if (path.pairs[i].mean_distance > mean_budget * (1.0 + 1e-12) + 1e-12)
      throw ConfigError("step " + std::to_string(i) + " moves the mean by " +
                        format_double(path.pairs[i].mean_distance) + ", over the budget " + format_double(mean_budget));
  }
  return path;
}

std::vector<GaussianModel> generate_sequence_rotating2d(const GaussianModel& base, double angle_step, std::size_t T) {
  if (base.dim() < 2) throw InvalidInput("rotating2d needs d >= 2");
  if (!std::isfinite(angle_step)) throw InvalidInput("rotating2d: angle_step must be finite");
  std::vector<GaussianModel> out{base};
  for (std::size_t i = 1; i <= T; ++i) {
    GaussianModel m = base;
    rotate_plane(m.mu, angle_step * static_cast<double>(i));
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<PointCloud> generate_sequence_rotating2d(const PointCloud& base, double angle_step, std::size_t T) {
  if (base.dim() < 2) throw InvalidInput("rotating2d needs d >= 2");
  if (!std::isfinite(angle_step)) throw InvalidInput("rotating2d: angle_step must be finite");
  std::vector<PointCloud> out{base};
  for (std::size_t i = 1; i <= T; ++i) {
    Matrix f = base.features();
    const double a = angle_step * static_cast<double>(i);
    const double c = std::cos(a), s = std::sin(a);
    const Vector x0 = f.col(0), x1 = f.col(1);
    f.col(0) = c * x0 - s * x1;
    f.col(1) = s * x0 + c * x1;
    out.emplace_back(std::move(f), base.labels());
  }
  return out;
}

}  // namespace droda
