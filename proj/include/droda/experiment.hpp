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

#ifndef DRODA_EXPERIMENT_HPP
#define DRODA_EXPERIMENT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "droda/droda_engine.hpp"
#include "droda/sequences.hpp"

namespace droda {

// Flat JSON object; every key is optional except L, and unknown keys are
// rejected. See README for the key list.
struct ExperimentConfig {
  double L = 1.0;
  double sigma = 1.0;
  std::size_t d = 2;
  std::size_t T = 10;
  double step_len = 0.0;
  PathMode path = PathMode::random_walk;
  std::uint64_t seed = 0;
  std::size_t replicates = 1;  // seeds seed, seed + 1, ...
  std::vector<Method> methods{Method::droda_population};
  std::optional<Vector> mu0;  // default L e_0
  SequenceConfig run;
  double eps = 0.3;                 // sample-size target in the bounds table
  std::optional<double> R;          // data radius for the dual generalization bound
  std::string sweep_param;          // "n" or "step_len"
  std::vector<double> sweep_values;
  std::filesystem::path out_dir = ".";

  void validate() const;  // throws ConfigError
  Vector initial_mean() const;
  std::vector<std::uint64_t> seeds() const;
};

ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& file);

struct BoundRow {
  std::string name;
  std::string inputs;
  double value = 0.0;
  std::string flags;
};

inline constexpr const char* kBoundsHeader = "name,inputs,value,flags";
inline constexpr const char* kSummaryHeader =
    "method,seed,steps,final_certified_risk,final_true_error,max_true_error,final_holdout_error";

std::vector<BoundRow> config_bounds(const ExperimentConfig& cfg);
void write_bounds_csv(std::ostream& out, std::span<const BoundRow> rows);

struct RunFailure {
  std::string method;
  std::uint64_t seed = 0;
  std::string message;
};

struct ExperimentResult {
  std::vector<StepRecord> records;  // sorted by (method, seed, step)
  std::vector<std::pair<std::uint64_t, SequencePath>> paths;
  std::vector<RunFailure> failures;

  bool ok() const { return failures.empty(); }
};

// Runs every (method, seed) pair, concurrently when exec is parallel.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Writes trace.csv, summary.csv, bounds.csv, paths.csv and failures.csv
// into cfg.out_dir.
void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result);

void write_summary_csv(std::ostream& out, std::span<const StepRecord> records);
void write_paths_csv(std::ostream& out, std::span<const std::pair<std::uint64_t, SequencePath>> paths);

// One experiment per sweep value; writes sweep.csv. Returns false if any run
// failed.
bool run_sweep(const ExperimentConfig& cfg);

}  // namespace droda

#endif  // DRODA_EXPERIMENT_HPP
