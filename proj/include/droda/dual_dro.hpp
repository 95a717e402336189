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

#ifndef DRODA_DUAL_DRO_HPP
#define DRODA_DUAL_DRO_HPP

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "droda/core_metrics.hpp"
#include "droda/gaussian_manifold.hpp"
#include "droda/parallel.hpp"

namespace droda {

// Dual of the Wasserstein DRO restricted to displacement adversaries, which
// shift every point of one class by a common vector at cost gamma * ||delta||
// per point. For a unit linear classifier the optimal shift is along -theta
// and the per-class adversary reduces to sup_{t >= 0} (#(p_i < t)/m - gamma t)
// over the class margins p_i = y <theta, x_i>.

enum class DualForm { penalty, radius };

struct DualParams {
  double gamma = 1.0;  // penalty form; +inf disables the adversary
  double eta = 0.0;    // radius form
  DualForm form = DualForm::penalty;

  void validate() const;
};

struct BreakpointSup {
  double value = 0.0;
  double t_star = 0.0;
};

// Exact supremum for sorted margins. The strict count makes the sup at a
// breakpoint a right limit; the limiting value is returned with t_star set to
// the breakpoint. gamma = +inf yields #(p_i <= 0)/m.
BreakpointSup classwise_sup_breakpoints(std::span<const double> sorted_margins, double gamma);

// Sorted margins y <theta, x> split by label.
struct ClassMargins {
  std::vector<double> positive;
  std::vector<double> negative;
  std::size_t total = 0;
};

ClassMargins class_margins(const PointCloud& cloud, const LinearClassifier& h);

double dual_risk_from_margins(const ClassMargins& margins, double gamma);

// Penalty-form restricted dual risk: sum over classes of (m_s/n) times the
// class supremum. A class absent from the cloud contributes 0.
double empirical_dual_risk(const PointCloud& cloud, const LinearClassifier& h, double gamma);

// #(y <theta, x> <= 0) / n.
double empirical_zero_one_error(const PointCloud& cloud, const LinearClassifier& h);

// Population counterpart under the symmetric Gaussian model, where every
// class margin is N(<theta, mu>, sigma^2).
double population_dual_risk_gaussian(const GaussianModel& model, const LinearClassifier& h,
                                     double gamma);

struct RadiusFormRisk {
  double risk = 0.0;
  double gamma_star = 0.0;
};

// Lower end of the gamma bracket and its grid density.
inline constexpr double kGammaFloor = 1e-6;
inline constexpr std::size_t kGammaGridPoints = 64;

// inf_{gamma >= 0} { gamma eta + empirical_dual_risk(gamma) } by a log grid on
// [kGammaFloor, 2 m / min positive margin] refined with golden-section search.
RadiusFormRisk radius_form_risk(const ClassMargins& margins, double eta);
RadiusFormRisk radius_form_risk(const PointCloud& cloud, const LinearClassifier& h, double eta);

struct SphereResult {
  LinearClassifier classifier;
  double risk;
};

using SphereObjective = std::function<double(const Vector&)>;

struct SphereSearchOptions {
  std::size_t restarts = 8;
  std::uint64_t seed = 0;
  Exec exec = Exec::parallel;
  double initial_step = 0.7853981633974483;  // pi/4
  double min_step = 1e-6;
  std::size_t random_directions = 2;  // extra tangent probes per iteration
  std::size_t max_evaluations = 20000;  // per start
  std::vector<Vector> warm_starts;
};

// Derivative-free multi-start pattern search on the unit sphere. Each start
// probes +-step along a tangent basis plus random tangent directions, moves to
// the best strict improvement, and halves the step otherwise, stopping once
// the step falls below min_step. Starts are
// independent; the lowest risk wins with ties going to the lower start index
// (warm starts first).
SphereResult minimize_on_sphere(const SphereObjective& objective, std::size_t dim,
                                const SphereSearchOptions& options);

SphereResult minimize_over_sphere(const PointCloud& cloud, const DualParams& params,
                                  std::size_t restarts, std::uint64_t seed,
                                  Exec exec = Exec::parallel,
                                  std::span<const Vector> warm_starts = {});

// Dual risk of one classifier under either form.
double dual_objective(const PointCloud& cloud, const LinearClassifier& h, const DualParams& params);

}  // namespace droda

#endif  // DRODA_DUAL_DRO_HPP
