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

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "droda/core_metrics.hpp"
#include "droda/errors.hpp"
#include "droda/experiment.hpp"
#include "droda/format.hpp"
#include "droda/selfcheck.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kRunFailure = 3;

droda::ExperimentConfig load(const std::string& file, const std::optional<std::uint64_t>& seed,
                             const std::optional<std::string>& out_dir) {
  droda::ExperimentConfig cfg = droda::load_config(file);
  if (seed) cfg.seed = *seed;
  if (out_dir) cfg.out_dir = *out_dir;
  cfg.validate();
  return cfg;
}

droda::PointCloud read_cloud(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw droda::ConfigError("cannot read " + file);
  try {
    return droda::read_cloud_csv(in);
  } catch (const droda::InvalidInput& e) {
    throw droda::ConfigError(file + ": " + e.what());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Manifold-constrained DRO for gradual domain adaptation"};
  app.require_subcommand(1);

  std::string config_file;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;

  auto* simulate = app.add_subcommand("simulate", "Run all (method, seed) pairs and write CSV outputs");
  simulate->add_option("config", config_file, "JSON config")->required();
  simulate->add_option("--seed", seed, "Override the config seed");
  simulate->add_option("--out-dir", out_dir, "Output directory");

  auto* bounds = app.add_subcommand("bounds", "Print the bounds table for a config");
  bounds->add_option("config", config_file, "JSON config")->required();

  auto* sweep = app.add_subcommand("sweep", "Repeat the experiment over sweep_values");
  sweep->add_option("config", config_file, "JSON config")->required();
  sweep->add_option("--seed", seed, "Override the config seed");
  sweep->add_option("--out-dir", out_dir, "Output directory");

  std::string cloud_a, cloud_b;
  double p = 2.0, q = 1.0, lambda = 0.0;
  auto* ot = app.add_subcommand("ot", "Exact Wasserstein distance between two labeled clouds");
  ot->add_option("a", cloud_a, "First cloud CSV")->required();
  ot->add_option("b", cloud_b, "Second cloud CSV")->required();
  ot->add_option("--p", p, "Ground norm order");
  ot->add_option("--q", q, "Cost exponent");
  ot->add_option("--lambda", lambda, "Label flip cost");

  auto* check = app.add_subcommand("check", "Run the built-in oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*simulate) {
      const droda::ExperimentConfig cfg = load(config_file, seed, out_dir);
      const droda::ExperimentResult result = droda::run_experiment(cfg);
      droda::write_experiment(cfg, result);
      for (const auto& f : result.failures) std::cerr << "run failed: " << f.method << " seed " << f.seed << ": " << f.message << '\n';
      return result.ok() ? 0 : kRunFailure;
    }
    if (*bounds) {
      const droda::ExperimentConfig cfg = load(config_file, std::nullopt, std::nullopt);
      droda::write_bounds_csv(std::cout, droda::config_bounds(cfg));
      return 0;
    }
    if (*sweep) {
      const droda::ExperimentConfig cfg = load(config_file, seed, out_dir);
      return droda::run_sweep(cfg) ? 0 : kRunFailure;
    }
    if (*ot) {
      droda::MetricParams m{p, q, lambda};
      try {
        m.validate();
      } catch (const droda::InvalidInput& e) {
        throw droda::ConfigError(e.what());
      }
      const droda::PointCloud a = read_cloud(cloud_a), b = read_cloud(cloud_b);
      const droda::WassersteinResult r = droda::empirical_wasserstein(a, b, m);
      std::cout << "distance," << droda::format_double(r.distance) << "\nsource,target,mass\n";
      for (const auto& match : r.plan.matches)
        std::cout << match.source << ',' << match.target << ',' << droda::format_double(match.mass) << '\n';
      return 0;
    }
    if (*check) {
      const droda::SelfCheckReport report = droda::selfcheck();
      droda::write_report(std::cout, report);
      return report.all_passed() ? 0 : kRunFailure;
    }
  } catch (const droda::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRunFailure;
  }
  return 0;
}
