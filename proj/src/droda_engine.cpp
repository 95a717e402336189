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

#include "droda/droda_engine.hpp"

#include <cmath>
#include <optional>
#include <ostream>

#include "droda/errors.hpp"
#include "droda/format.hpp"

namespace droda {

namespace {

// RNG stream offsets per step; every method draws P_i from the same stream so
// paired comparisons at one seed see the same samples.
constexpr std::uint64_t kSampleStream = 0x10000;
constexpr std::uint64_t kHoldoutStream = 0x20000;
constexpr std::uint64_t kOptimizerStream = 0x30000;

Vector labeled_mean(const PointCloud& cloud) {
  Vector sum = Vector::Zero(static_cast<Eigen::Index>(cloud.dim()));
  for (std::size_t i = 0; i < cloud.size(); ++i) sum += cloud.label(i) * cloud.row(i).transpose();
  return sum / static_cast<double>(cloud.size());
}

PointCloud draw_domain(const GaussianModel& model, const SequenceConfig& cfg, std::uint64_t seed,
                       std::size_t step) {
  return sample(model, cfg.n_per_domain, derive_seed(seed, kSampleStream + step), cfg.exec);
}

void finish_record(StepRecord& rec, const LinearClassifier& h, std::span<const GaussianModel> models,
                   std::size_t i, const SequenceConfig& cfg, std::uint64_t seed) {
  rec.true_error_next = exact_error(h, models[i + 1]);
  if (cfg.holdout > 0) {
    const PointCloud test =
        sample(models[i + 1], cfg.holdout, derive_seed(seed, kHoldoutStream + i), cfg.exec);
    rec.holdout_error = empirical_zero_one_error(test, h);
  }
}

enum class Radius { robust, zero };

RunTrace constrained_loop(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                          std::uint64_t seed, Mode mode, Radius radius_kind, std::string_view name) {
  cfg.validate();
  validate_sequence(models, cfg.eta);
  const std::size_t T = models.size() - 1;
  const double sigma = models[0].sigma;
  const std::size_t dim = models[0].dim();

  RunTrace trace;
  std::optional<LinearClassifier> prev;
  double prev_risk = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    const GaussianModel& P = models[i];
    std::optional<PointCloud> cloud;
    if (mode == Mode::empirical) cloud = draw_domain(P, cfg, seed, i);

    auto pseudo_mean = [&](const LinearClassifier& h) {
      return mode == Mode::population ? population_pseudolabel_mean(P, h)
                                      : estimate_mean_pseudolabeled(*cloud, h, cfg.exec);
    };

    Vector center;
    if (i == 0) {
      center = mode == Mode::population ? P.mu : labeled_mean(*cloud);
    } else {
      center = pseudo_mean(*prev);
      if (radius_kind == Radius::robust) {
        for (std::size_t r = 0; r < cfg.relabel_rounds; ++r) {
          center = pseudo_mean(sign_alignment(LinearClassifier::from_direction(center), *prev));
        }
      }
    }

    double eps = 0.0;
    double ball = 0.0;
    if (radius_kind == Radius::robust) {
      if (mode == Mode::population) {
        eps = radius_schedule_asymptotic(prev_risk, cfg);
        ball = kMeanBallRadiusPerWasserstein * eps;
      } else {
        eps = i == 0 ? cfg.eta
                     : radius_schedule_nonasymptotic(prev_risk, center.norm(), sigma, dim, cfg);
        ball = eps;
      }
    }

    RobustSolution sol = robust_linear_classifier(MeanBall{center, ball}, sigma);
    const LinearClassifier h = prev ? sign_alignment(sol.classifier, *prev) : sol.classifier;

    StepRecord rec;
    rec.method = std::string(name);
    rec.seed = seed;
    rec.step = i;
    rec.certified_risk = sol.certified_risk;
    rec.radius = eps;
    rec.mean_err = (center - P.mu).norm();
    rec.degenerate = sol.degenerate;
    finish_record(rec, h, models, i, cfg, seed);
    trace.records.push_back(rec);
    trace.states.push_back(DrodaState{i, h, sol.certified_risk, eps, center});

    prev = h;
    prev_risk = sol.certified_risk;
  }
  return trace;
}

}  // namespace

void SequenceConfig::validate() const {
  if (!(eta >= 0.0) || !std::isfinite(eta)) throw ConfigError("eta must be finite and >= 0");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ConfigError("lambda must be finite and >= 0");
  if (radius_factor != 1.0 && radius_factor != 2.0) throw ConfigError("radius_factor must be 1 or 2");
  if (!(delta > 0.0 && delta <= 1.0)) throw ConfigError("delta must lie in (0, 1]");
  if (n_per_domain < 1) throw ConfigError("n must be >= 1");
  if (!(gamma >= 0.0)) throw ConfigError("gamma must be >= 0");
  if (restarts < 1) throw ConfigError("restarts must be >= 1");
}

void write_trace_csv(std::ostream& out, std::span<const StepRecord> records) {
  out << kTraceHeader << '\n';
  for (const StepRecord& r : records) {
    out << r.method << ',' << r.seed << ',' << r.step << ',' << format_double(r.certified_risk) << ','
        << format_double(r.true_error_next) << ',' << format_double(r.radius) << ','
        << format_double(r.mean_err) << ',' << (r.degenerate ? 1 : 0) << '\n';
  }
}

double radius_schedule_asymptotic(double delta_prev, const SequenceConfig& cfg) {
  return cfg.radius_factor * cfg.lambda * delta_prev + cfg.eta;
}

double radius_schedule_nonasymptotic(double delta_prev, double mu_hat_norm, double sigma,
                                     std::size_t dim, const SequenceConfig& cfg) {
  if (cfg.n_per_domain < 1) throw InvalidInput("radius_schedule_nonasymptotic: n must be >= 1");
  const double n = static_cast<double>(cfg.n_per_domain);
  const double sampling = sigma * std::sqrt(static_cast<double>(dim) * std::log(2.0 / cfg.delta) / n);
  const double tail = sigma * std::exp(-mu_hat_norm * mu_hat_norm / (2.0 * sigma * sigma));
  return cfg.eta + sampling + tail * (1.0 + delta_prev);
}

void validate_sequence(std::span<const GaussianModel> models, double eta) {
  if (models.size() < 2) throw ConfigError("a sequence needs at least two models");
  for (const GaussianModel& m : models) {
    try {
      m.validate();
    } catch (const InvalidInput& e) {
      throw ConfigError(e.what());
    }
    if (m.dim() != models[0].dim()) throw ConfigError("models disagree in dimension");
    if (m.sigma != models[0].sigma) throw ConfigError("models disagree in sigma");
  }
  const double budget = 2.0 * eta;
  for (std::size_t i = 0; i + 1 < models.size(); ++i) {
    const double step = (models[i].mu - models[i + 1].mu).norm();
    if (step > budget * (1.0 + 1e-12) + 1e-12) {
      throw ConfigError("models " + std::to_string(i) + " and " + std::to_string(i + 1) +
                        " are " + format_double(step) + " apart in mean, over the budget " +
                        format_double(budget));
    }
  }
}

RunTrace droda_run_population(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                              std::uint64_t seed) {
  return constrained_loop(models, cfg, seed, Mode::population, Radius::robust,
                          method_name(Method::droda_population));
}

RunTrace droda_run_empirical(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                             std::uint64_t seed) {
  return constrained_loop(models, cfg, seed, Mode::empirical, Radius::robust,
                          method_name(Method::droda_empirical));
}

RunTrace self_training_baseline(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                                std::uint64_t seed) {
  return constrained_loop(models, cfg, seed, cfg.mode, Radius::zero,
                          method_name(Method::self_training));
}

RunTrace unconstrained_droda(std::span<const GaussianModel> models, const SequenceConfig& cfg,
                             std::uint64_t seed) {
  cfg.validate();
  validate_sequence(models, cfg.eta);
  const std::size_t T = models.size() - 1;

  RunTrace trace;
  std::optional<LinearClassifier> prev;
  double prev_risk = 0.0;
  for (std::size_t i = 0; i < T; ++i) {
    PointCloud cloud = draw_domain(models[i], cfg, seed, i);
    if (prev) {
      const Vector proj = cloud.features() * prev->theta();
      std::vector<int> labels(cloud.size());
      for (std::size_t k = 0; k < labels.size(); ++k)
        labels[k] = proj(static_cast<Eigen::Index>(k)) >= 0.0 ? 1 : -1;
      cloud = cloud.relabeled(std::move(labels));
    }
    const Vector mean = labeled_mean(cloud);

    const double eps = i == 0 ? cfg.eta : radius_schedule_asymptotic(prev_risk, cfg);
    DualParams params;
    params.form = cfg.unconstrained_form;
    params.eta = eps;
    params.gamma = cfg.gamma;

    std::vector<Vector> warm;
    if (prev) {
      warm.push_back(prev->theta());
    } else if (mean.norm() > 0.0) {
      warm.push_back(mean / mean.norm());
    }
    const SphereResult best = minimize_over_sphere(
        cloud, params, cfg.restarts, derive_seed(seed, kOptimizerStream + i), cfg.exec, warm);

    StepRecord rec;
    rec.method = std::string(method_name(Method::unconstrained_droda));
    rec.seed = seed;
    rec.step = i;
    rec.certified_risk = best.risk;
    rec.radius = params.form == DualForm::radius ? eps : 0.0;
    rec.mean_err = (mean - models[i].mu).norm();
    finish_record(rec, best.classifier, models, i, cfg, seed);
    trace.records.push_back(rec);
    trace.states.push_back(DrodaState{i, best.classifier, best.risk, rec.radius, mean});

    prev = best.classifier;
    prev_risk = best.risk;
  }
  return trace;
}

std::string_view method_name(Method m) {
  switch (m) {
    case Method::droda_population: return "droda-population";
    case Method::droda_empirical: return "droda-empirical";
    case Method::self_training: return "self-training";
    case Method::unconstrained_droda: return "unconstrained-droda";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (Method m : {Method::droda_population, Method::droda_empirical, Method::self_training,
                   Method::unconstrained_droda}) {
    if (method_name(m) == name) return m;
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

RunTrace run_method(Method m, std::span<const GaussianModel> models, const SequenceConfig& cfg,
                    std::uint64_t seed) {
  switch (m) {
    case Method::droda_population: return droda_run_population(models, cfg, seed);
    case Method::droda_empirical: return droda_run_empirical(models, cfg, seed);
    case Method::self_training: return self_training_baseline(models, cfg, seed);
    case Method::unconstrained_droda: return unconstrained_droda(models, cfg, seed);
  }
  throw ConfigError("unknown method");
}

}  // namespace droda
