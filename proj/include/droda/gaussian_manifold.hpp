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

#ifndef DRODA_GAUSSIAN_MANIFOLD_HPP
#define DRODA_GAUSSIAN_MANIFOLD_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "droda/core_metrics.hpp"
#include "droda/parallel.hpp"

namespace droda {

// Symmetric two-component model: y = +-1 with probability 1/2 each and
// X | y ~ N(y * mu, sigma^2 I).
struct GaussianModel {
  Vector mu;
  double sigma = 1.0;

  std::size_t dim() const { return static_cast<std::size_t>(mu.size()); }
  void validate() const;
};

// The manifold of models with ||mu||_2 >= L.
struct ManifoldSpec {
  double L = 1.0;

  bool contains(const GaussianModel& model) const { return model.mu.norm() >= L; }
};

// Decision rule sign<theta, x> with ||theta||_2 = 1; ties go to +1.
class LinearClassifier {
 public:
  // Requires a unit vector (to 1e-12).
  explicit LinearClassifier(Vector theta);
  // Normalizes; throws InvalidInput on a zero or non-finite direction.
  static LinearClassifier from_direction(const Vector& direction);

  const Vector& theta() const { return theta_; }
  std::size_t dim() const { return static_cast<std::size_t>(theta_.size()); }
  LinearClassifier negated() const { return LinearClassifier(-theta_); }
  int predict(const Vector& x) const { return theta_.dot(x) >= 0.0 ? 1 : -1; }

 private:
  Vector theta_;
};

// Set of means within `radius` of `center`.
struct MeanBall {
  Vector center;
  double radius = 0.0;
};

// A restricted Wasserstein ball of radius eta around a model with mean mu0
// is contained in the mean ball of radius 2 * eta around mu0 (up to the label
// flip mu -> -mu).
inline constexpr double kMeanBallRadiusPerWasserstein = 2.0;

PointCloud sample(const GaussianModel& model, std::size_t n, std::uint64_t seed,
                  Exec exec = Exec::parallel);

// P(y <theta, X> <= 0) = Q(<theta, mu> / sigma).
double exact_error(const LinearClassifier& h, const GaussianModel& model);

// Worst-case exact error over all means in the ball.
double robust_error_over_mean_ball(const LinearClassifier& h, const MeanBall& ball, double sigma);

struct RobustSolution {
  LinearClassifier classifier;
  double certified_risk = 0.5;
  // Ball reaches the origin: the two components may have swapped and no
  // direction certifies anything below 1/2.
  bool degenerate = false;
};

RobustSolution robust_linear_classifier(const MeanBall& ball, double sigma);

// (1/n) sum sign<theta, x_i> x_i with the observed labels ignored.
Vector estimate_mean_pseudolabeled(const PointCloud& cloud, const LinearClassifier& h,
                                   Exec exec = Exec::parallel);

// E[sign<theta, X> X] under the model:
//   mu (1 - 2 Q(a/sigma)) + theta sigma sqrt(2/pi) exp(-a^2 / (2 sigma^2)),
// with a = <theta, mu>.
Vector population_pseudolabel_mean(const GaussianModel& model, const LinearClassifier& h);

// theta_new or -theta_new, whichever is not anti-aligned with theta_prev.
LinearClassifier sign_alignment(const LinearClassifier& theta_new, const LinearClassifier& theta_prev);

// Flat key-value text: "mu = [..]", "sigma = ..", "L = .." separated by
// newlines or commas.
std::string format_model(const GaussianModel& model, const ManifoldSpec& manifold);
std::pair<GaussianModel, ManifoldSpec> parse_model(std::string_view text);

namespace kernels {

PointCloud sample_serial(const GaussianModel& model, std::size_t n, std::uint64_t seed);
PointCloud sample_omp(const GaussianModel& model, std::size_t n, std::uint64_t seed);

Vector pseudolabel_sum_serial(const Matrix& features, const Vector& theta);
Vector pseudolabel_sum_omp(const Matrix& features, const Vector& theta);

}  // namespace kernels

}  // namespace droda

#endif  // DRODA_GAUSSIAN_MANIFOLD_HPP
