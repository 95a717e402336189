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

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "droda/bounds.hpp"
#include "droda/core_metrics.hpp"
#include "droda/dual_dro.hpp"
#include "droda/experiment.hpp"
#include "droda/expandable_props.hpp"
#include "droda/format.hpp"
#include "droda/gaussian_manifold.hpp"
#include "support.hpp"

using namespace droda;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Args {
  std::string cli;
  std::string config;
  fs::path work = "acceptance_work";
};

ExperimentResult run_checked(const std::string& json) {
  ExperimentConfig cfg = parse_config(json);
  cfg.validate();
  return run_experiment(cfg);
}

// Final record per (method, seed), and per-step errors.
std::map<std::pair<std::string, std::uint64_t>, std::vector<StepRecord>> by_run(const ExperimentResult& r) {
  std::map<std::pair<std::string, std::uint64_t>, std::vector<StepRecord>> out;
  for (const StepRecord& s : r.records) out[{s.method, s.seed}].push_back(s);
  return out;
}

const char* kEnvelopeConfig = R"({
  "L": 6, "sigma": 1, "d": 2, "T": 50, "step_len": 2, "path": "random-walk", "seed": 0, "replicates": 20,
  "methods": ["droda-population"], "eta": 2, "lambda": 1
})";

Outcome criterion_1(const Args&) {
  const auto t0 = Clock::now();
  const ExperimentResult r = run_checked(kEnvelopeConfig);
  const double elapsed = seconds_since(t0);
  const double bound = gaussian_compat_bound(6.0, 1.0, 2.0).value;
  std::size_t violations = 0;
  double worst = 0.0;
  for (const StepRecord& s : r.records) {
    worst = std::max(worst, s.true_error_next);
    if (s.true_error_next > bound) ++violations;
  }
  const bool ok = r.ok() && r.records.size() == 20 * 50 && violations == 0 && elapsed < 5.0;
  return {ok, "max true error " + format_double(worst) + " vs " + format_double(bound) + ", " +
                  std::to_string(violations) + " violations, " + format_double(elapsed) + " s"};
}

Outcome criterion_2(const Args&) {
  const ExperimentResult r = run_checked(kEnvelopeConfig);
  std::size_t bad = 0;
  double slack = INFINITY;
  for (const StepRecord& s : r.records) {
    slack = std::min(slack, s.certified_risk - s.true_error_next);
    if (s.certified_risk < s.true_error_next - 1e-12) ++bad;
  }
  return {r.ok() && !r.records.empty() && bad == 0,
          std::to_string(bad) + " of " + std::to_string(r.records.size()) + " steps uncertified, min slack " +
              format_double(slack)};
}

Outcome criterion_3(const Args&) {
  const auto t0 = Clock::now();
  const double L = 11.0;
  const std::string json = R"({"L": 11, "sigma": 1, "d": 3, "T": 16, "n": 1027, "eps": 0.3, "step_len": )" +
                           format_double(L / 3.0) + R"(, "eta": )" + format_double(L / 3.0) +
                           R"(, "lambda": 1, "path": "random-walk", "seed": 0, "replicates": 10,
                               "methods": ["droda-empirical"], "mode": "empirical"})";
  const ExperimentResult r = run_checked(json);
  const double elapsed = seconds_since(t0);
  const SampleSizeRequirement req = sample_size_requirement(3, 16, 0.3, L, 1.0);
  std::size_t under_bound = 0, under_005 = 0, runs = 0;
  double worst = 0.0;
  for (const auto& [key, steps] : by_run(r)) {
    ++runs;
    const double e = steps.back().true_error_next;
    worst = std::max(worst, e);
    if (e <= req.bound) ++under_bound;
    if (e <= 0.05) ++under_005;
  }
  const bool ok = r.ok() && runs == 10 && req.n_required == 1027 && under_bound == 10 && under_005 >= 9 && elapsed < 30.0;
  return {ok, "bound " + format_double(req.bound) + ", under bound " + std::to_string(under_bound) + "/10, <= 0.05 " +
                  std::to_string(under_005) + "/10, worst " + format_double(worst) + ", " + format_double(elapsed) + " s"};
}

Outcome criterion_4(const Args&) {
  const ExperimentResult r = run_checked(R"({
    "L": 3, "sigma": 1, "d": 2, "T": 30, "step_len": 2, "path": "orbit", "seed": 0, "replicates": 10,
    "n": 50, "eta": 1, "lambda": 1, "mode": "empirical",
    "methods": ["droda-empirical", "self-training", "unconstrained-droda"]})");
  auto runs = by_run(r);
  std::size_t beats_st = 0, beats_uc = 0, both = 0;
  std::vector<std::vector<double>> st_curves;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const double dr = runs[{"droda-empirical", seed}].back().true_error_next;
    const double st = runs[{"self-training", seed}].back().true_error_next;
    const double uc = runs[{"unconstrained-droda", seed}].back().true_error_next;
    if (dr < st) ++beats_st;
    if (dr < uc) ++beats_uc;
    if (dr < st && dr < uc) ++both;
    std::vector<double> curve;
    for (const StepRecord& s : runs[{"self-training", seed}]) curve.push_back(s.true_error_next);
    st_curves.push_back(curve);
  }
  std::vector<double> median;
  for (std::size_t i = 0; i < 30; ++i) {
    std::vector<double> col;
    for (const auto& c : st_curves) col.push_back(c.at(i));
    std::sort(col.begin(), col.end());
    median.push_back(0.5 * (col[4] + col[5]));
  }
  bool nondecreasing = true;
  for (std::size_t i = 20; i + 1 < 30; ++i)
    if (median[i + 1] < median[i]) nondecreasing = false;
  const bool ok = r.ok() && both >= 8 && nondecreasing;
  return {ok, "droda below self-training in " + std::to_string(beats_st) + "/10, below unconstrained in " +
                  std::to_string(beats_uc) + "/10, both in " + std::to_string(both) +
                  "/10; self-training median over last 10 steps " + (nondecreasing ? "nondecreasing" : "not monotone") +
                  " (" + format_double(median[20]) + " to " + format_double(median[29]) + ")"};
}

Outcome criterion_5(const Args&) {
  const auto t0 = Clock::now();
  Rng rng = make_rng(5, 0);
  std::uniform_int_distribution<std::size_t> size(1, 200);
  std::uniform_real_distribution<double> margin(-1.0, 1.0), gamma(0.0, 5.0);
  double worst_grid = 0.0, worst_enum = 0.0;
  double grid_time = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> m(size(rng));
    for (double& v : m) v = margin(rng);
    std::sort(m.begin(), m.end());
    const double g = gamma(rng);
    const double got = classwise_sup_breakpoints(m, g).value;
    worst_enum = std::max(worst_enum, std::abs(got - testing::enumerate_sup(m, g)));
    const auto tg = Clock::now();
    const double step = 1e-4 * std::max(m.back() - m.front(), 1e-3);
    worst_grid = std::max(worst_grid, std::abs(got - testing::grid_sup(m, g, step)));
    grid_time += seconds_since(tg);
  }
  const double elapsed = seconds_since(t0) - grid_time;
  const bool ok = worst_grid <= 1e-3 && worst_enum <= 1e-12 && elapsed < 1.0;
  return {ok, "grid deviation " + format_double(worst_grid) + ", enumeration deviation " + format_double(worst_enum) +
                  ", solver time " + format_double(elapsed) + " s"};
}

Outcome criterion_6(const Args&) {
  Rng rng = make_rng(6, 0);
  std::uniform_int_distribution<std::size_t> size(1, 7), dim(1, 3);
  const double lambdas[] = {0.0, 0.5, 2.0};
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const std::size_t n = size(rng), d = dim(rng);
    const PointCloud a = testing::random_cloud(rng, n, d), b = testing::random_cloud(rng, n, d);
    const double lambda = lambdas[k % 3];
    const double got = empirical_wasserstein(a, b, MetricParams{2.0, 1.0, lambda}).distance;
    worst = std::max(worst, std::abs(got - testing::brute_force_ot(a, b, lambda)));
  }
  return {worst <= 1e-9, "worst deviation " + format_double(worst) + " over 50 pairs"};
}

Outcome criterion_7(const Args&) {
  // Independent Monte Carlo: X = y mu + sigma Z with its own generator.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = 100000;
  std::size_t checks = 0, misses = 0;
  double worst_z = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Eigen::Vector2d mu(2.0 * normal(rng), 2.0 * normal(rng));
    Eigen::Vector2d theta(normal(rng), normal(rng));
    theta.normalize();
    const double sigma = 0.5 + 1.5 * unit(rng);
    const GaussianModel model{mu, sigma};
    const Vector closed = population_pseudolabel_mean(model, LinearClassifier(theta));
    Eigen::Vector2d sum = Eigen::Vector2d::Zero(), sq = Eigen::Vector2d::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const double y = unit(rng) < 0.5 ? 1.0 : -1.0;
      const Eigen::Vector2d x = y * mu + sigma * Eigen::Vector2d(normal(rng), normal(rng));
      const Eigen::Vector2d v = (theta.dot(x) >= 0.0 ? 1.0 : -1.0) * x;
      sum += v;
      sq += v.cwiseProduct(v);
    }
    const Eigen::Vector2d mean = sum / static_cast<double>(n);
    for (int c = 0; c < 2; ++c) {
      const double var = sq(c) / static_cast<double>(n) - mean(c) * mean(c);
      const double se = std::sqrt(var / static_cast<double>(n));
      const double z = std::abs(closed(c) - mean(c)) / se;
      worst_z = std::max(worst_z, z);
      ++checks;
      if (z > 3.0) ++misses;
    }
  }
  return {misses == 0, std::to_string(misses) + " of " + std::to_string(checks) +
                            " coordinates beyond 3 standard errors, worst " + format_double(worst_z) + " SE"};
}

Outcome criterion_8(const Args&) {
  const double lambda = 0.75, beta = 1.0 / (3.0 * lambda), alpha = 0.01, eta = 0.2, u0 = 0.02;
  const double cor = corollary_bound_linear(alpha, lambda, eta);
  double worst = 0.0;
  bool below = true;
  for (std::size_t T : {1u, 5u, 50u}) {
    const double it = compose_bound(BoundSpec::affine(beta, alpha), lambda, eta, T, u0);
    const double closed = compose_bound_affine_closed(beta, alpha, lambda, eta, T, u0);
    worst = std::max(worst, std::abs(it - closed));
    if (it > cor) below = false;
  }
  return {worst <= 1e-12 && below, "closed-form deviation " + format_double(worst) + ", corollary " + format_double(cor) +
                                        (below ? " dominates" : " violated")};
}

Outcome criterion_9(const Args&) {
  const RatioEstimate e = estimate_expansion_ratio(uniform_box(Vector::Zero(2), Vector::Ones(2)),
                                                   RegionSpec::half_space(Eigen::Vector2d(1.0, 0.0), 0.5), 0.1,
                                                   1000000, 9);
  return {std::abs(e.ratio - 1.2) <= 0.02,
          "ratio " + format_double(e.ratio) + " (se " + format_double(e.std_error) + ")"};
}

int shell(const std::string& cmd) {
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome criterion_10(const Args& args) {
  if (args.cli.empty() || args.config.empty()) return {false, "needs --cli and --config"};
  const fs::path a = args.work / "run_a", b = args.work / "run_b";
  fs::remove_all(a);
  fs::remove_all(b);
  fs::create_directories(args.work);
  const std::string base = "\"" + args.cli + "\" simulate \"" + args.config + "\" --out-dir ";
  const int ca = shell(base + "\"" + a.string() + "\" > \"" + (args.work / "run_a.log").string() + "\" 2>&1");
  const int cb = shell(base + "\"" + b.string() + "\" > \"" + (args.work / "run_b.log").string() + "\" 2>&1");
  std::size_t same = 0, files = 0;
  for (const char* name : {"trace.csv", "summary.csv", "bounds.csv", "paths.csv", "failures.csv"}) {
    ++files;
    if (fs::exists(a / name) && slurp(a / name) == slurp(b / name) && !slurp(a / name).empty()) ++same;
  }
  const int cc = shell("\"" + args.cli + "\" check > \"" + (args.work / "check.csv").string() + "\" 2>&1");
  const bool ok = ca == 0 && cb == 0 && same == files && cc == 0;
  return {ok, "simulate exits " + std::to_string(ca) + "/" + std::to_string(cb) + ", " + std::to_string(same) + "/" +
                  std::to_string(files) + " files identical, check exits " + std::to_string(cc)};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  Args args;
  int only = 0;
  app.add_option("--only", only, "Run a single criterion (1-10)");
  app.add_option("--cli", args.cli, "Path to the droda binary");
  app.add_option("--config", args.config, "Reference config for the determinism check");
  app.add_option("--work", args.work, "Scratch directory");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome(const Args&)>> criteria{
      criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
      criterion_6, criterion_7, criterion_8, criterion_9, criterion_10};
  if (only < 0 || only > static_cast<int>(criteria.size())) {
    std::cerr << "--only must lie in 1.." << criteria.size() << '\n';
    return 2;
  }
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k + 1) != only) continue;
    Outcome o;
    try {
      o = criteria[k](args);
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    std::cout << "criterion " << k + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " (" << o.detail << ")\n";
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
