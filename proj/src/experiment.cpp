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

#include "droda/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "droda/bounds.hpp"
#include "droda/errors.hpp"
#include "droda/format.hpp"

namespace droda {

namespace {

using json = nlohmann::json;

double as_double(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  return v.get<double>();
}

std::size_t as_count(const json& v, const std::string& key) {
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("'" + key + "' must be a non-negative integer");
  return v.get<std::size_t>();
}

std::string as_string(const json& v, const std::string& key) {
  if (!v.is_string()) throw ConfigError("'" + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<double> as_doubles(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError("'" + key + "' must be an array of numbers");
  std::vector<double> out;
  for (const json& e : v) out.push_back(as_double(e, key));
  return out;
}

using Setter = std::function<void(const json&, ExperimentConfig&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = {
      {"L", [](const json& v, ExperimentConfig& c) { c.L = as_double(v, "L"); }},
      {"sigma", [](const json& v, ExperimentConfig& c) { c.sigma = as_double(v, "sigma"); }},
      {"d", [](const json& v, ExperimentConfig& c) { c.d = as_count(v, "d"); }},
      {"T", [](const json& v, ExperimentConfig& c) { c.T = as_count(v, "T"); }},
      {"step_len", [](const json& v, ExperimentConfig& c) { c.step_len = as_double(v, "step_len"); }},
      {"path", [](const json& v, ExperimentConfig& c) { c.path = parse_path(as_string(v, "path")); }},
      {"seed", [](const json& v, ExperimentConfig& c) { c.seed = as_count(v, "seed"); }},
      {"replicates", [](const json& v, ExperimentConfig& c) { c.replicates = as_count(v, "replicates"); }},
      {"methods",
       [](const json& v, ExperimentConfig& c) {
         if (!v.is_array()) throw ConfigError("'methods' must be an array of names");
         c.methods.clear();
         for (const json& e : v) c.methods.push_back(parse_method(as_string(e, "methods")));
       }},
      {"mu0",
       [](const json& v, ExperimentConfig& c) {
         const auto xs = as_doubles(v, "mu0");
         c.mu0 = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(xs.size()));
       }},
      {"eta", [](const json& v, ExperimentConfig& c) { c.run.eta = as_double(v, "eta"); }},
      {"lambda", [](const json& v, ExperimentConfig& c) { c.run.lambda = as_double(v, "lambda"); }},
      {"radius_factor", [](const json& v, ExperimentConfig& c) { c.run.radius_factor = as_double(v, "radius_factor"); }},
      {"delta", [](const json& v, ExperimentConfig& c) { c.run.delta = as_double(v, "delta"); }},
      {"n", [](const json& v, ExperimentConfig& c) { c.run.n_per_domain = as_count(v, "n"); }},
      {"mode",
       [](const json& v, ExperimentConfig& c) {
         const std::string m = as_string(v, "mode");
         if (m == "population") {
           c.run.mode = Mode::population;
         } else if (m == "empirical") {
           c.run.mode = Mode::empirical;
         } else {
           throw ConfigError("'mode' must be population or empirical");
         }
       }},
      {"relabel_rounds", [](const json& v, ExperimentConfig& c) { c.run.relabel_rounds = as_count(v, "relabel_rounds"); }},
      {"unconstrained_form",
       [](const json& v, ExperimentConfig& c) {
         const std::string f = as_string(v, "unconstrained_form");
         if (f == "radius") {
           c.run.unconstrained_form = DualForm::radius;
         } else if (f == "penalty") {
           c.run.unconstrained_form = DualForm::penalty;
         } else {
           throw ConfigError("'unconstrained_form' must be radius or penalty");
         }
       }},
      {"gamma", [](const json& v, ExperimentConfig& c) { c.run.gamma = as_double(v, "gamma"); }},
      {"restarts", [](const json& v, ExperimentConfig& c) { c.run.restarts = as_count(v, "restarts"); }},
      {"holdout", [](const json& v, ExperimentConfig& c) { c.run.holdout = as_count(v, "holdout"); }},
      {"eps", [](const json& v, ExperimentConfig& c) { c.eps = as_double(v, "eps"); }},
      {"R", [](const json& v, ExperimentConfig& c) { c.R = as_double(v, "R"); }},
      {"sweep_param", [](const json& v, ExperimentConfig& c) { c.sweep_param = as_string(v, "sweep_param"); }},
      {"sweep_values", [](const json& v, ExperimentConfig& c) { c.sweep_values = as_doubles(v, "sweep_values"); }},
      {"out_dir", [](const json& v, ExperimentConfig& c) { c.out_dir = as_string(v, "out_dir"); }},
  };
  return table;
}

std::string kv(std::initializer_list<std::pair<const char*, double>> items) {
  std::string out;
  for (const auto& [k, v] : items) {
    if (!out.empty()) out += ';';
    out += k;
    out += '=';
    out += format_double(v);
  }
  return out;
}

struct RunJob {
  Method method;
  std::uint64_t seed;
  const SequencePath* path;
};

void open_or_throw(std::ofstream& f, const std::filesystem::path& p) {
  f.open(p, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write " + p.string());
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(L > 0.0) || !std::isfinite(L)) throw ConfigError("L must be finite and > 0");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ConfigError("sigma must be finite and > 0");
  if (d < 1) throw ConfigError("d must be >= 1");
  if (T < 1) throw ConfigError("T must be >= 1");
  if (!(step_len >= 0.0) || !std::isfinite(step_len)) throw ConfigError("step_len must be finite and >= 0");
  if (replicates < 1) throw ConfigError("replicates must be >= 1");
  if (methods.empty()) throw ConfigError("methods must not be empty");
  if (mu0) {
    if (static_cast<std::size_t>(mu0->size()) != d) throw ConfigError("mu0 must have d entries");
    if (!mu0->allFinite()) throw ConfigError("mu0 must be finite");
    if (mu0->norm() < L) throw ConfigError("||mu0|| must be >= L");
  }
  run.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be finite and > 0");
  if (R && (!(*R > 0.0) || !std::isfinite(*R))) throw ConfigError("R must be finite and > 0");
  if (!sweep_values.empty() || !sweep_param.empty()) {
    if (sweep_param != "n" && sweep_param != "step_len") throw ConfigError("sweep_param must be n or step_len");
    for (double v : sweep_values) {
      if (!std::isfinite(v) || v < 0.0) throw ConfigError("sweep values must be finite and >= 0");
      if (sweep_param == "n" && (v < 1.0 || v != std::floor(v))) throw ConfigError("n sweep values must be integers >= 1");
    }
  }
}

Vector ExperimentConfig::initial_mean() const {
  if (mu0) return *mu0;
  Vector m = Vector::Zero(static_cast<Eigen::Index>(d));
  m(0) = L;
  return m;
}

std::vector<std::uint64_t> ExperimentConfig::seeds() const {
  std::vector<std::uint64_t> out;
  for (std::size_t r = 0; r < replicates; ++r) out.push_back(seed + r);
  return out;
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  if (!doc.contains("L")) throw ConfigError("config must set L");
  ExperimentConfig cfg;
  const auto& table = setters();
  for (const auto& [key, value] : doc.items()) {
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown config key '" + key + "'");
    try {
      it->second(value, cfg);
    } catch (const json::exception& e) {
      throw ConfigError("bad value for '" + key + "': " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ConfigError("cannot read config " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::vector<BoundRow> config_bounds(const ExperimentConfig& cfg) {
  const double L = cfg.L, s = cfg.sigma, eta = cfg.run.eta, lambda = cfg.run.lambda;
  const auto T = static_cast<double>(cfg.T);
  const auto n = cfg.run.n_per_domain;
  std::vector<BoundRow> rows;

  const GaussianCompat c = gaussian_compat_bound(L, s, eta);
  const std::string range_flag = c.in_range ? "" : "out-of-range";
  rows.push_back({"constrained_compat", kv({{"L", L}, {"sigma", s}, {"eta", eta}}), c.value, range_flag});
  rows.push_back({"composed_constrained", kv({{"L", L}, {"sigma", s}, {"eta", eta}, {"lambda", lambda}, {"T", T}}),
                  compose_bound(BoundSpec::constant(c.value), lambda, eta, cfg.T, 0.0), range_flag});
  rows.push_back({"unconstrained_compat_lower", kv({{"L", L}, {"sigma", s}, {"eta", eta}}),
                  unconstrained_compat_lower(L, s, eta), "hidden-constant-1"});
  rows.push_back({"dichotomy_crossover_eta", kv({{"L", L}, {"sigma", s}}), dichotomy_crossover(L, s), ""});
  rows.push_back({"propagated_unconstrained", kv({{"L", L}, {"sigma", s}, {"lambda", lambda}, {"eta", eta}, {"T", T}}),
                  propagated_unconstrained_bound(L, s, lambda, eta, cfg.T), "hidden-constant-1"});

  const NonasymptoticBound na = nonasymptotic_bound(L, s, cfg.d, n, cfg.T, cfg.run.delta);
  const auto dd = static_cast<double>(cfg.d), dn = static_cast<double>(n);
  rows.push_back({"nonasymptotic",
                  kv({{"L", L}, {"sigma", s}, {"d", dd}, {"n", dn}, {"T", T}, {"delta", cfg.run.delta}}), na.value,
                  na.diverges ? "diverges" : ""});
  if (cfg.T >= 2) {
    const SampleSizeRequirement req = sample_size_requirement(cfg.d, cfg.T, cfg.eps, L, s);
    rows.push_back({"sample_size_n_required", kv({{"d", dd}, {"T", T}, {"eps", cfg.eps}}),
                    static_cast<double>(req.n_required), n >= req.n_required ? "" : "n-below-requirement"});
    rows.push_back({"sample_size_bound", kv({{"L", L}, {"sigma", s}, {"eps", cfg.eps}}), req.bound,
                    req.bound_defined ? "" : "undefined"});
  }
  const std::size_t m = std::max<std::size_t>(1, n / 2);
  const DkwBound dkw = dkw_uniform_bound(m, cfg.run.delta);
  rows.push_back({"dkw_two_term", kv({{"m", static_cast<double>(m)}, {"delta", cfg.run.delta}}), dkw.two_term, ""});
  rows.push_back({"dkw_majorant", kv({{"m", static_cast<double>(m)}, {"delta", cfg.run.delta}}), dkw.majorant, ""});
  if (cfg.R && n > cfg.d) {
    const GeneralizationBound g = generalization_bound_dualdro(cfg.d, n, *cfg.R, cfg.run.delta);
    std::string flags = !g.log_argument_ok ? "log-argument-le-1" : (g.value >= 1.0 ? "vacuous" : "");
    rows.push_back({"generalization_dualdro", kv({{"d", dd}, {"n", dn}, {"R", *cfg.R}, {"delta", cfg.run.delta}}),
                    g.value, flags});
  }
  return rows;
}

void write_bounds_csv(std::ostream& out, std::span<const BoundRow> rows) {
  out << kBoundsHeader << '\n';
  for (const BoundRow& r : rows) out << r.name << ',' << r.inputs << ',' << format_double(r.value) << ',' << r.flags << '\n';
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  ExperimentResult result;
  const double budget = 2.0 * cfg.run.eta;
  for (std::uint64_t s : cfg.seeds()) {
    result.paths.emplace_back(s, generate_sequence_gaussian(cfg.initial_mean(), cfg.sigma, cfg.step_len, cfg.T,
                                                            cfg.path, cfg.L, s, budget));
  }

  std::vector<RunJob> jobs;
  for (Method m : cfg.methods)
    for (const auto& [s, path] : result.paths) jobs.push_back({m, s, &path});
  std::sort(jobs.begin(), jobs.end(), [](const RunJob& a, const RunJob& b) {
    const auto na = method_name(a.method), nb = method_name(b.method);
    return na != nb ? na < nb : a.seed < b.seed;
  });
  jobs.erase(std::unique(jobs.begin(), jobs.end(),
                         [](const RunJob& a, const RunJob& b) { return a.method == b.method && a.seed == b.seed; }),
             jobs.end());

  std::vector<RunTrace> traces(jobs.size());
  std::vector<std::string> errors(jobs.size());
  SequenceConfig inner = cfg.run;
  const bool parallel = cfg.run.exec == Exec::parallel;
  if (parallel) inner.exec = Exec::serial;
  const auto count = static_cast<std::ptrdiff_t>(jobs.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::ptrdiff_t j = 0; j < count; ++j) {
    try {
      traces[j] = run_method(jobs[j].method, jobs[j].path->models, inner, jobs[j].seed);
    } catch (const std::exception& e) {
      errors[j] = e.what();
      if (errors[j].empty()) errors[j] = "run failed";
    }
  }

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    if (!errors[j].empty()) {
      result.failures.push_back({std::string(method_name(jobs[j].method)), jobs[j].seed, errors[j]});
      continue;
    }
    result.records.insert(result.records.end(), traces[j].records.begin(), traces[j].records.end());
  }
  return result;
}

void write_summary_csv(std::ostream& out, std::span<const StepRecord> records) {
  out << kSummaryHeader << '\n';
  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t j = i;
    double max_err = records[i].true_error_next;
    while (j + 1 < records.size() && records[j + 1].method == records[i].method && records[j + 1].seed == records[i].seed) {
      ++j;
      max_err = std::max(max_err, records[j].true_error_next);
    }
    const StepRecord& last = records[j];
    const double holdout = last.holdout_error < 0.0 ? std::nan("") : last.holdout_error;
    out << last.method << ',' << last.seed << ',' << (j - i + 1) << ',' << format_double(last.certified_risk) << ','
        << format_double(last.true_error_next) << ',' << format_double(max_err) << ',' << format_double(holdout) << '\n';
    i = j + 1;
  }
}

void write_paths_csv(std::ostream& out, std::span<const std::pair<std::uint64_t, SequencePath>> paths) {
  out << "seed,pair,mu_norm_next,mean_distance,wasserstein_lower,wasserstein_upper\n";
  for (const auto& [seed, path] : paths) {
    for (std::size_t i = 0; i < path.pairs.size(); ++i) {
      const PairDistance& p = path.pairs[i];
      out << seed << ',' << i << ',' << format_double(path.models[i + 1].mu.norm()) << ','
          << format_double(p.mean_distance) << ',' << format_double(p.wasserstein_lower) << ','
          << format_double(p.wasserstein_upper) << '\n';
    }
  }
}

void write_experiment(const ExperimentConfig& cfg, const ExperimentResult& result) {
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream f;
  open_or_throw(f, cfg.out_dir / "trace.csv");
  write_trace_csv(f, result.records);
  f.close();
  open_or_throw(f, cfg.out_dir / "summary.csv");
  write_summary_csv(f, result.records);
  f.close();
  open_or_throw(f, cfg.out_dir / "bounds.csv");
  write_bounds_csv(f, config_bounds(cfg));
  f.close();
  open_or_throw(f, cfg.out_dir / "paths.csv");
  write_paths_csv(f, result.paths);
  f.close();
  open_or_throw(f, cfg.out_dir / "failures.csv");
  f << "method,seed,message\n";
  for (const RunFailure& r : result.failures) {
    std::string msg = r.message;
    std::replace(msg.begin(), msg.end(), ',', ';');
    std::replace(msg.begin(), msg.end(), '\n', ' ');
    f << r.method << ',' << r.seed << ',' << msg << '\n';
  }
}

bool run_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.sweep_values.empty()) throw ConfigError("sweep needs sweep_param and sweep_values");
  std::filesystem::create_directories(cfg.out_dir);
  std::ofstream f;
  open_or_throw(f, cfg.out_dir / "sweep.csv");
  f << "param,value,method,seed,final_true_error,max_true_error,final_certified_risk\n";
  bool ok = true;
  for (double v : cfg.sweep_values) {
    ExperimentConfig point = cfg;
    if (cfg.sweep_param == "n") {
      point.run.n_per_domain = static_cast<std::size_t>(v);
    } else {
      point.step_len = v;
    }
    const ExperimentResult r = run_experiment(point);
    ok = ok && r.ok();
    std::size_t i = 0;
    while (i < r.records.size()) {
      std::size_t j = i;
      double max_err = r.records[i].true_error_next;
      while (j + 1 < r.records.size() && r.records[j + 1].method == r.records[i].method &&
             r.records[j + 1].seed == r.records[i].seed) {
        ++j;
        max_err = std::max(max_err, r.records[j].true_error_next);
      }
      const StepRecord& last = r.records[j];
      f << cfg.sweep_param << ',' << format_double(v) << ',' << last.method << ',' << last.seed << ','
        << format_double(last.true_error_next) << ',' << format_double(max_err) << ','
        << format_double(last.certified_risk) << '\n';
      i = j + 1;
    }
  }
  return ok;
}

}  // namespace droda
