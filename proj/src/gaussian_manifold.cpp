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

#include "droda/gaussian_manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <utility>
#include <vector>

#include "droda/errors.hpp"
#include "droda/format.hpp"

namespace droda {

namespace {

void sample_block(const GaussianModel& model, std::size_t n, std::uint64_t seed, std::size_t block,
                  Matrix& features, std::vector<int>& labels) {
  Rng rng = make_rng(seed, block);
  std::normal_distribution<double> normal(0.0, 1.0);
  const std::size_t begin = block * kBlockSize;
  const std::size_t end = std::min(n, begin + kBlockSize);
  const auto d = static_cast<Eigen::Index>(model.dim());
  for (std::size_t i = begin; i < end; ++i) {
    const int y = (rng() >> 63) ? 1 : -1;
    labels[i] = y;
    const auto row = static_cast<Eigen::Index>(i);
    for (Eigen::Index k = 0; k < d; ++k) {
      features(row, k) = y * model.mu[k] + model.sigma * normal(rng);
    }
  }
}

Vector pseudolabel_block(const Matrix& features, const Vector& theta, std::size_t block) {
  const std::size_t n = static_cast<std::size_t>(features.rows());
  const std::size_t begin = block * kBlockSize;
  const std::size_t end = std::min(n, begin + kBlockSize);
  Vector sum = Vector::Zero(features.cols());
  for (std::size_t i = begin; i < end; ++i) {
    const auto row = features.row(static_cast<Eigen::Index>(i));
    if (row.dot(theta) >= 0.0) {
      sum += row.transpose();
    } else {
      sum -= row.transpose();
    }
  }
  return sum;
}

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& s, const char* key) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw InvalidInput(std::string("parse_model: bad number for ") + key + ": '" + s + "'");
  }
  return v;
}

}  // namespace

void GaussianModel::validate() const {
  if (mu.size() < 1) throw InvalidInput("GaussianModel: dimension must be at least 1");
  if (!mu.allFinite()) throw InvalidInput("GaussianModel: non-finite mean");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidInput("GaussianModel: sigma must be > 0");
}

LinearClassifier::LinearClassifier(Vector theta) : theta_(std::move(theta)) {
  if (theta_.size() < 1 || !theta_.allFinite() || std::abs(theta_.norm() - 1.0) > 1e-12) {
    throw InvalidInput("LinearClassifier: theta must be a finite unit vector");
  }
}

LinearClassifier LinearClassifier::from_direction(const Vector& direction) {
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw InvalidInput("LinearClassifier: direction must be finite and non-zero");
  }
  Vector unit = direction / norm;
  // One more pass removes the last ulp of drift for nearly-unit inputs.
  unit /= unit.norm();
  return LinearClassifier(std::move(unit));
}

namespace kernels {

PointCloud sample_serial(const GaussianModel& model, std::size_t n, std::uint64_t seed) {
  model.validate();
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(model.dim()));
  std::vector<int> labels(n);
  const std::size_t blocks = block_count(n);
  for (std::size_t b = 0; b < blocks; ++b) sample_block(model, n, seed, b, features, labels);
  return PointCloud(std::move(features), std::move(labels));
}

PointCloud sample_omp(const GaussianModel& model, std::size_t n, std::uint64_t seed) {
  model.validate();
  Matrix features(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(model.dim()));
  std::vector<int> labels(n);
  const auto blocks = static_cast<std::ptrdiff_t>(block_count(n));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    sample_block(model, n, seed, static_cast<std::size_t>(b), features, labels);
  }
  return PointCloud(std::move(features), std::move(labels));
}

Vector pseudolabel_sum_serial(const Matrix& features, const Vector& theta) {
  const std::size_t blocks = block_count(static_cast<std::size_t>(features.rows()));
  Vector total = Vector::Zero(features.cols());
  for (std::size_t b = 0; b < blocks; ++b) total += pseudolabel_block(features, theta, b);
  return total;
}

Vector pseudolabel_sum_omp(const Matrix& features, const Vector& theta) {
  const std::size_t blocks = block_count(static_cast<std::size_t>(features.rows()));
  std::vector<Vector> partial(blocks);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(blocks); ++b) {
    partial[static_cast<std::size_t>(b)] = pseudolabel_block(features, theta, static_cast<std::size_t>(b));
  }
  Vector total = Vector::Zero(features.cols());
  for (const Vector& p : partial) total += p;
  return total;
}

}  // namespace kernels

PointCloud sample(const GaussianModel& model, std::size_t n, std::uint64_t seed, Exec exec) {
  if (n == 0) throw InvalidInput("sample: n must be >= 1");
  return exec == Exec::parallel ? kernels::sample_omp(model, n, seed)
                                : kernels::sample_serial(model, n, seed);
}

double exact_error(const LinearClassifier& h, const GaussianModel& model) {
  if (h.dim() != model.dim()) throw InvalidInput("exact_error: dimension mismatch");
  return qfunction(h.theta().dot(model.mu) / model.sigma);
}

double robust_error_over_mean_ball(const LinearClassifier& h, const MeanBall& ball, double sigma) {
  if (h.dim() != static_cast<std::size_t>(ball.center.size())) {
    throw InvalidInput("robust_error_over_mean_ball: dimension mismatch");
  }
  if (!(ball.radius >= 0.0)) throw InvalidInput("robust_error_over_mean_ball: negative radius");
  if (!(sigma > 0.0)) throw InvalidInput("robust_error_over_mean_ball: sigma must be > 0");
  return qfunction((h.theta().dot(ball.center) - ball.radius) / sigma);
}

RobustSolution robust_linear_classifier(const MeanBall& ball, double sigma) {
  if (!(ball.radius >= 0.0)) throw InvalidInput("robust_linear_classifier: negative radius");
  if (!(sigma > 0.0)) throw InvalidInput("robust_linear_classifier: sigma must be > 0");
  const double center_norm = ball.center.norm();
  if (!(center_norm > 0.0)) {
    throw InvalidInput("robust_linear_classifier: zero center leaves the direction undefined");
  }
  RobustSolution solution{LinearClassifier::from_direction(ball.center), 0.5, false};
  if (ball.radius >= center_norm) {
    solution.degenerate = true;
    solution.certified_risk = 0.5;
  } else {
    solution.certified_risk = qfunction((center_norm - ball.radius) / sigma);
  }
  return solution;
}

Vector estimate_mean_pseudolabeled(const PointCloud& cloud, const LinearClassifier& h, Exec exec) {
  if (cloud.empty()) throw InvalidInput("estimate_mean_pseudolabeled: empty cloud");
  if (cloud.dim() != h.dim()) throw InvalidInput("estimate_mean_pseudolabeled: dimension mismatch");
  const Vector sum = exec == Exec::parallel
                         ? kernels::pseudolabel_sum_omp(cloud.features(), h.theta())
                         : kernels::pseudolabel_sum_serial(cloud.features(), h.theta());
  return sum / static_cast<double>(cloud.size());
}

Vector population_pseudolabel_mean(const GaussianModel& model, const LinearClassifier& h) {
  if (h.dim() != model.dim()) throw InvalidInput("population_pseudolabel_mean: dimension mismatch");
  const double z = h.theta().dot(model.mu) / model.sigma;
  const double flip = qfunction(z);
  const double fold = model.sigma * std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * z * z);
  return model.mu * (1.0 - 2.0 * flip) + h.theta() * fold;
}

LinearClassifier sign_alignment(const LinearClassifier& theta_new, const LinearClassifier& theta_prev) {
  if (theta_new.dim() != theta_prev.dim()) throw InvalidInput("sign_alignment: dimension mismatch");
  return theta_new.theta().dot(theta_prev.theta()) >= 0.0 ? theta_new : theta_new.negated();
}

std::string format_model(const GaussianModel& model, const ManifoldSpec& manifold) {
  std::ostringstream out;
  out << "mu = [";
  for (Eigen::Index k = 0; k < model.mu.size(); ++k) {
    if (k) out << ", ";
    out << format_double(model.mu[k]);
  }
  out << "]\nsigma = " << format_double(model.sigma) << "\nL = " << format_double(manifold.L) << '\n';
  return out.str();
}

std::pair<GaussianModel, ManifoldSpec> parse_model(std::string_view text) {
  // Split on newlines and on commas outside brackets.
  std::vector<std::string> entries;
  std::string current;
  int depth = 0;
  for (char c : text) {
    if (c == '[') ++depth;
    if (c == ']') --depth;
    if ((c == '\n' || (c == ',' && depth == 0))) {
      entries.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  entries.push_back(current);

  GaussianModel model;
  ManifoldSpec manifold;
  bool have_mu = false, have_sigma = false, have_l = false;
  for (const std::string& raw : entries) {
    const std::string entry = trim(raw);
    if (entry.empty() || entry.front() == '#') continue;
    const auto eq = entry.find('=');
    if (eq == std::string::npos) throw InvalidInput("parse_model: expected key = value, got '" + entry + "'");
    const std::string key = trim(std::string_view(entry).substr(0, eq));
    const std::string value = trim(std::string_view(entry).substr(eq + 1));
    if (key == "mu") {
      if (value.size() < 2 || value.front() != '[' || value.back() != ']') {
        throw InvalidInput("parse_model: mu must be a bracketed list");
      }
      std::vector<double> coords;
      std::stringstream ss(value.substr(1, value.size() - 2));
      std::string cell;
      while (std::getline(ss, cell, ',')) coords.push_back(parse_number(trim(cell), "mu"));
      model.mu = Eigen::Map<Vector>(coords.data(), static_cast<Eigen::Index>(coords.size()));
      have_mu = true;
    } else if (key == "sigma") {
      model.sigma = parse_number(value, "sigma");
      have_sigma = true;
    } else if (key == "L") {
      manifold.L = parse_number(value, "L");
      have_l = true;
    } else {
      throw InvalidInput("parse_model: unknown key '" + key + "'");
    }
  }
  if (!have_mu || !have_sigma || !have_l) throw InvalidInput("parse_model: mu, sigma and L are required");
  model.validate();
  if (!(manifold.L > 0.0)) throw InvalidInput("parse_model: L must be > 0");
  if (!manifold.contains(model)) throw InvalidInput("parse_model: ||mu|| is below L");
  return {std::move(model), manifold};
}

}  // namespace droda
