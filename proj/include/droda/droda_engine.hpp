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

#ifndef DRODA_DRODA_ENGINE_HPP
#define DRODA_DRODA_ENGINE_HPP

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "droda/dual_dro.hpp"
#include "droda/gaussian_manifold.hpp"

namespace droda {

enum class Mode { population, empirical };

struct SequenceConfig {
  double eta = 0.0;            // per-step Wasserstein budget
  double lambda = 0.0;         // label-flip cost
  double radius_factor = 1.0;  // 1 or 2, multiplies lambda * previous risk
  double delta = 0.05;         // confidence for the finite-sample radius
  std::size_t n_per_domain = 1000;
  Mode mode = Mode::population;

  // Extra pseudo-label/re-estimate passes per step for the constrained
  // methods (Gaussian relabeling). 0 follows the plain loop.
  std::size_t relabel_rounds = 0;

  // Unconstrained method: dual form, penalty multiplier and optimizer starts.
  DualForm unconstrained_form = DualForm::radius;
  double gamma = 1.0;
  std::size_t restarts = 4;

  // Held-out sample size per step for a Monte Carlo error estimate; 0 skips.
  std::size_t holdout = 0;

  Exec exec = Exec::parallel;

  void validate() const;
};

struct DrodaState {
  std::size_t step = 0;
  LinearClassifier classifier;
  double certified_risk;
  double radius;
  Vector estimated_mean;
};

struct StepRecord {
  std::string method;
  std::uint64_t seed = 0;
  std::size_t step = 0;
  double certified_risk = 0.0;
  double true_error_next = 0.0;
  double radius = 0.0;
  double mean_err = 0.0;  // ||estimated mean - true mean of P_i||
  bool degenerate = false;
  double holdout_error = -1.0;  // < 0 when not measured
};

struct RunTrace {
  std::vector<StepRecord> records;
  std::vector<DrodaState> states;

  const StepRecord& last() const { return records.back(); }
};

inline constexpr const char* kTraceHeader =
    "method,seed,step,certified_risk,true_error_next,radius,mean_err,degenerate_flag";

void write_trace_csv(std::ostream& out, std::span<const StepRecord> records);

// factor * lambda * delta_prev + eta.
double radius_schedule_asymptotic(double delta_prev, const SequenceConfig& cfg);

// eta + sigma sqrt(d log(2/delta) / n) + sigma exp(-m^2 / (2 sigma^2)) (1 + delta_prev),
// with m the norm of the estimated mean standing in for the unknown true norm.
double radius_schedule_nonasymptotic(double delta_prev, double mu_hat_norm, double sigma,
                                     std::size_t dim, const SequenceConfig& cfg);

// Throws ConfigError naming the first pair with ||mu_i - mu_{i+1}|| > 2 eta,
// or models that disagree in dimension or sigma. Needs at least two models.
void validate_sequence(std::span<const GaussianModel> models, double eta);

// All runs take models P_0..P_T and return T records: step i trains on P_i
// (labeled at i = 0, pseudo-labeled by the previous classifier afterwards)
// and reports the exact error of its classifier on P_{i+1}.

// Infinite-sample loop on exact pseudo-label means with mean balls of radius
// 2 * eps_i. No randomness; the seed only labels the records and drives the
// optional holdout sample.
RunTrace droda_run_population(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                              std::uint64_t seed = 0);

// Sampled loop with the finite-sample radius; the mean ball has radius eps_i.
RunTrace droda_run_empirical(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                             std::uint64_t seed);

// Same loop with eps = 0 and no relabeling. Honors cfg.mode.
RunTrace self_training_baseline(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                                std::uint64_t seed);

// Per step, minimizes the empirical dual risk of the pseudo-labeled sample
// over the sphere (no manifold projection), warm-started at the previous
// classifier. Radius form uses the asymptotic schedule as its budget.
RunTrace unconstrained_droda(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                             std::uint64_t seed);

enum class Method { droda_population, droda_empirical, self_training, unconstrained_droda };

std::string_view method_name(Method m);
Method parse_method(std::string_view name);  // throws ConfigError

RunTrace run_method(Method m, std::span<const GaussianModel> models, const SequenceConfig& cfg,
                    std::uint64_t seed);

}  // namespace droda

#endif  // DRODA_DRODA_ENGINE_HPP
