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

#include "droda/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include "droda/bounds.hpp"
#include "droda/core_metrics.hpp"
#include "droda/droda_engine.hpp"
#include "droda/dual_dro.hpp"
#include "droda/expandable_props.hpp"
#include "droda/format.hpp"
#include "droda/gaussian_manifold.hpp"

namespace droda {

namespace oracles {

double qfunction_integral(double x) {
  if (x < 0.0) return 1.0 - qfunction_integral(-x);
  static const double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                  0.9061798459386640};
  static const double weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                    0.4786286704993665, 0.2369268850561891};
  const int panels = 800;
  const double upper = 40.0, h = upper / panels;
  double sum = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    for (int k = 0; k < 5; ++k) {
      const double s = mid + 0.5 * h * nodes[k];
      sum += weights[k] * std::exp(-x * s - 0.5 * s * s);
    }
  }
  sum *= 0.5 * h;
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi) * sum;
}

std::vector<double> symmetric_eigenvalues_charpoly(const std::vector<std::vector<double>>& a) {
  const std::size_t n = a.size();
  using Mat = std::vector<std::vector<double>>;
  auto mul = [&](const Mat& x, const Mat& y) {
    Mat z(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) z[i][j] += x[i][k] * y[k][j];
    return z;
  };
  // Faddeev-LeVerrier: coefficients c[k] of t^k, c[n] = 1.
  std::vector<double> c(n + 1, 0.0);
  c[n] = 1.0;
  Mat M(n, std::vector<double>(n, 0.0));
  for (std::size_t k = 1; k <= n; ++k) {
    Mat AM = mul(a, M);
    for (std::size_t i = 0; i < n; ++i) AM[i][i] += c[n - k + 1];
    M = AM;
    const Mat AMk = mul(a, M);
    double tr = 0.0;
    for (std::size_t i = 0; i < n; ++i) tr += AMk[i][i];
    c[n - k] = -tr / static_cast<double>(k);
  }
  auto p = [&](double t) {
    double v = 0.0;
    for (std::size_t k = n + 1; k-- > 0;) v = v * t + c[k];
    return v;
  };
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < n; ++i) {
    double r = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) r += std::abs(a[i][j]);
    lo = std::min(lo, a[i][i] - r);
    hi = std::max(hi, a[i][i] + r);
  }
  lo -= 1e-9;
  hi += 1e-9;
  std::vector<double> roots;
  const int grid = 400000;
  double prev_t = lo, prev_v = p(lo);
  for (int g = 1; g <= grid; ++g) {
    const double t = lo + (hi - lo) * g / grid;
    const double v = p(t);
    if (v == 0.0) {
      roots.push_back(t);
    } else if ((prev_v < 0.0) != (v < 0.0) && prev_v != 0.0) {
      double x0 = prev_t, x1 = t, f0 = prev_v;
      for (int it = 0; it < 200; ++it) {
        const double xm = 0.5 * (x0 + x1), fm = p(xm);
        if ((fm < 0.0) == (f0 < 0.0)) {
          x0 = xm;
          f0 = fm;
        } else {
          x1 = xm;
        }
      }
      roots.push_back(0.5 * (x0 + x1));
    }
    prev_t = t;
    prev_v = v;
  }
  return roots;
}

}  // namespace oracles

namespace {

CheckResult make(std::string suite, double deviation, double tolerance, std::string detail = {}) {
  return {std::move(suite), deviation <= tolerance, deviation, tolerance, std::move(detail)};
}

PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t d) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) f(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = normal(rng);
    y[i] = (rng() & 1) ? 1 : -1;
  }
  return {std::move(f), std::move(y)};
}

CheckResult check_qfunction(const std::function<double(double)>& q) {
  double worst = 0.0;
  for (double x : {-3.0, -1.0, 0.0, 0.5, 1.0, 2.0, 4.0, 6.0}) {
    const double ref = oracles::qfunction_integral(x);
    worst = std::max(worst, std::abs(q(x) - ref) / ref);
  }
  return make("qfunction", worst, 1e-10, "relative error vs Gauss-Legendre integral");
}

CheckResult check_ot() {
  Rng rng = make_rng(101, 0);
  std::uniform_int_distribution<int> size(1, 6);
  double worst = 0.0;
  const double lambdas[3] = {0.0, 0.5, 2.0};
  for (int rep = 0; rep < 30; ++rep) {
    const std::size_t n = static_cast<std::size_t>(size(rng));
    const PointCloud a = random_cloud(rng, n, 2), b = random_cloud(rng, n, 2);
    MetricParams m{2.0, 1.0, lambdas[rep % 3]};
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double best = 1e300;
    do {
      double total = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double dx = a.features()(i, 0) - b.features()(perm[i], 0);
        const double dy = a.features()(i, 1) - b.features()(perm[i], 1);
        total += std::sqrt(dx * dx + dy * dy) + (a.label(i) != b.label(perm[i]) ? m.lambda : 0.0);
      }
      best = std::min(best, total / static_cast<double>(n));
    } while (std::next_permutation(perm.begin(), perm.end()));
    worst = std::max(worst, std::abs(empirical_wasserstein(a, b, m).distance - best));
  }
  return make("ot-permutation", worst, 1e-9, "30 pairs with n <= 6");
}

CheckResult check_breakpoints() {
  Rng rng = make_rng(102, 0);
  std::uniform_int_distribution<int> size(1, 60);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double worst_grid = 0.0, worst_enum = 0.0;
  for (int rep = 0; rep < 40; ++rep) {
    const int m = size(rng);
    std::vector<double> p(static_cast<std::size_t>(m));
    for (double& v : p) v = 2.0 * unit(rng) - 1.0;
    std::sort(p.begin(), p.end());
    const double gamma = 5.0 * unit(rng);
    const double value = classwise_sup_breakpoints(p, gamma).value;

    double enum_best = 0.0;
    for (double v : p) enum_best += v < 0.0 ? 1.0 : 0.0;
    enum_best /= m;
    for (double t : p) {
      if (t < 0.0) continue;
      double c = 0.0;
      for (double v : p) c += v <= t ? 1.0 : 0.0;
      enum_best = std::max(enum_best, c / m - gamma * t);
    }
    worst_enum = std::max(worst_enum, std::abs(value - enum_best));

    const double range = std::max(p.back() - p.front(), 0.1);
    const double step = 1e-4 * range;
    double grid_best = -1e300;
    for (double t = 0.0; t <= p.back() + step; t += step) {
      double c = 0.0;
      for (double v : p) c += v < t ? 1.0 : 0.0;
      grid_best = std::max(grid_best, c / m - gamma * t);
    }
    worst_grid = std::max(worst_grid, std::abs(value - grid_best));
  }
  CheckResult r = make("breakpoint-sup", worst_grid, 1e-3, "fine t grid; enumeration dev " + format_double(worst_enum));
  r.passed = r.passed && worst_enum <= 1e-12;
  return r;
}

CheckResult check_population_dual() {
  GaussianModel model{Vector::Constant(1, 2.0), 1.0};
  const LinearClassifier h(Vector::Ones(1));
  const double value = population_dual_risk_gaussian(model, h, 0.2);
  double best = -1e300;
  for (int k = 0; k <= 2000000; ++k) {
    const double t = 1e-5 * k;
    best = std::max(best, 0.5 * std::erfc(-(t - 2.0) / std::sqrt(2.0)) - 0.2 * t);
  }
  return make("population-dual-grid", std::abs(value - best), 1e-6, "mu=2 sigma=1 gamma=0.2");
}

CheckResult check_pseudolabel_mean() {
  Rng rng = make_rng(103, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const std::size_t n = 100000;
  double worst = 0.0;  // in standard errors
  for (int rep = 0; rep < 5; ++rep) {
    Vector mu(3), dir(3);
    for (int k = 0; k < 3; ++k) {
      mu(k) = 2.0 * normal(rng);
      dir(k) = normal(rng);
    }
    const GaussianModel model{mu, 0.5 + 1.5 * unit(rng)};
    const LinearClassifier h = LinearClassifier::from_direction(dir);
    const PointCloud cloud = sample(model, n, 1000 + static_cast<std::uint64_t>(rep));
    const Vector closed = population_pseudolabel_mean(model, h);
    const Vector proj = cloud.features() * h.theta();
    for (Eigen::Index k = 0; k < 3; ++k) {
      double s = 0.0, s2 = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        const double v = (proj(static_cast<Eigen::Index>(i)) >= 0.0 ? 1.0 : -1.0) *
                         cloud.features()(static_cast<Eigen::Index>(i), k);
        s += v;
        s2 += v * v;
      }
      const double mean = s / n;
      const double se = std::sqrt((s2 / n - mean * mean) / n);
      worst = std::max(worst, std::abs(mean - closed(k)) / se);
    }
  }
  return make("pseudolabel-mean-mc", worst, 3.0, "max deviation in standard errors");
}

CheckResult check_angular_grid() {
  Rng rng = make_rng(104, 0);
  const PointCloud base = random_cloud(rng, 60, 2);
  Matrix f = base.features();
  for (std::size_t i = 0; i < base.size(); ++i) f.row(static_cast<Eigen::Index>(i)) += base.label(i) * Eigen::RowVector2d(1.0, 0.5);
  const PointCloud cloud(f, base.labels());
  DualParams params;
  params.gamma = 1.0;
  const SphereResult opt = minimize_over_sphere(cloud, params, 8, 7, Exec::serial);
  double grid = 1e300;
  for (int k = 0; k < 10000; ++k) {
    const double a = 2.0 * std::numbers::pi * k / 10000.0;
    Vector t(2);
    t << std::cos(a), std::sin(a);
    grid = std::min(grid, empirical_dual_risk(cloud, LinearClassifier::from_direction(t), 1.0));
  }
  return make("angular-grid", std::max(0.0, opt.risk - grid), 1e-3, "optimizer minus 1e4-point grid minimum");
}

CheckResult check_hand_iteration() {
  const double expected[5] = {0.3, 0.7, 1.5, 3.1, 6.3};
  double worst = 0.0;
  for (std::size_t T = 1; T <= 5; ++T)
    worst = std::max(worst, std::abs(compose_bound(BoundSpec::affine(1.0, 0.0), 1.0, 0.1, T, 0.1) - expected[T - 1]));
  const double lambda = 1.0, beta = 1.0 / (3.0 * lambda), alpha = 0.05, eta = 0.2;
  for (std::size_t T : {1, 5, 50}) {
    const double iter = compose_bound(BoundSpec::affine(beta, alpha), lambda, eta, T, 0.0);
    const double closed = (1.0 - std::pow(2.0 * lambda * beta, static_cast<double>(T))) / (1.0 - 2.0 * lambda * beta) *
                          (beta * eta + alpha);
    worst = std::max(worst, std::abs(iter - closed));
  }
  return make("compose-iteration", worst, 1e-12, "hand iteration and geometric closed form");
}

CheckResult check_expansion() {
  const Sampler s = uniform_box(Vector::Zero(2), Vector::Ones(2));
  const RatioEstimate e =
      estimate_expansion_ratio(s, RegionSpec::half_space(Eigen::Vector2d(1.0, 0.0), 0.5), 0.1, 200000, 105);
  const MassEstimate tail =
      estimate_mass(isotropic_gaussian(Vector::Zero(1), 1.0), RegionSpec::half_space(-Vector::Ones(1), -1.0), 200000, 106);
  const double mass_sigmas = std::abs(tail.estimate - qfunction(1.0)) / tail.std_error;
  CheckResult r = make("expansion-mc", std::abs(e.ratio - 1.2), 0.02,
                       "uniform half-space ratio; normal tail dev " + format_double(mass_sigmas) + " SE");
  r.passed = r.passed && mass_sigmas <= 3.0;
  return r;
}

CheckResult check_eigen() {
  Rng rng = make_rng(107, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  double worst = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    Matrix S(3, 3);
    for (int i = 0; i < 3; ++i)
      for (int j = i; j < 3; ++j) S(i, j) = S(j, i) = normal(rng);
    const Matrix A = Matrix::Identity(3, 3) + 0.01 * S;
    std::vector<std::vector<double>> raw(3, std::vector<double>(3));
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) raw[i][j] = A(i, j);
    std::vector<double> ref = oracles::symmetric_eigenvalues_charpoly(raw);
    std::vector<double> got = jacobian_eig_bounds_check(AffineMap{A, Vector::Zero(3)}, 0.1).values;
    std::sort(ref.begin(), ref.end());
    std::sort(got.begin(), got.end());
    if (ref.size() != got.size()) return make("eigen-charpoly", 1.0, 1e-8, "root count mismatch");
    for (std::size_t k = 0; k < ref.size(); ++k) worst = std::max(worst, std::abs(ref[k] - got[k]));
  }
  return make("eigen-charpoly", worst, 1e-8, "I + 0.01 S on 5 matrices");
}

CheckResult check_two_step() {
  const double sigma = 1.0, eta = 1.0, lambda = 1.0;
  std::vector<GaussianModel> models{{Eigen::Vector2d(4.0, 0.0), sigma},
                                    {Eigen::Vector2d(4.0, 1.0), sigma},
                                    {Eigen::Vector2d(3.5, 2.0), sigma}};
  SequenceConfig cfg;
  cfg.eta = eta;
  cfg.lambda = lambda;
  const RunTrace trace = droda_run_population(models, cfg);

  auto Q = [](double x) { return oracles::qfunction_integral(x); };
  const double d0 = Q(4.0 - 2.0 * eta);
  const double e0 = Q(4.0);
  const double a = 4.0;  // <theta_0, mu_1> with theta_0 = e_0
  const double flip = Q(a);
  const double fold = std::sqrt(2.0 / std::numbers::pi) * std::exp(-0.5 * a * a);
  const double c0 = 4.0 * (1.0 - 2.0 * flip) + fold, c1 = 1.0 * (1.0 - 2.0 * flip);
  const double cn = std::hypot(c0, c1);
  const double eps1 = lambda * d0 + eta;
  const double d1 = Q(cn - 2.0 * eps1);
  const double e1 = Q((c0 * 3.5 + c1 * 2.0) / cn);
  double worst = 0.0;
  if (trace.records.size() != 2) return make("droda-two-step", 1.0, 1e-12, "wrong record count");
  worst = std::max({std::abs(trace.records[0].certified_risk - d0), std::abs(trace.records[0].true_error_next - e0),
                    std::abs(trace.records[1].certified_risk - d1), std::abs(trace.records[1].true_error_next - e1),
                    std::abs(trace.records[1].radius - eps1)});
  return make("droda-two-step", worst, 1e-12, "population loop vs hand unfolding");
}

CheckResult check_formulas() {
  double worst = 0.0;
  SequenceConfig cfg;
  cfg.eta = 0.5;
  cfg.n_per_domain = 1000;
  cfg.delta = 0.05;
  worst = std::max(worst, std::abs(radius_schedule_nonasymptotic(0.01, 3.0, 1.0, 2, cfg) -
                                   (0.5 + std::sqrt(2.0 * std::log(40.0) / 1000.0) + std::exp(-4.5) * 1.01)));
  worst = std::max(worst, std::abs(unconstrained_compat_lower(3.0, 1.0, 0.5) -
                                   (std::exp(-4.5) + std::sqrt(0.5 * std::exp(-4.5)))));
  const DkwBound dkw = dkw_uniform_bound(100, 0.1);
  worst = std::max(worst, std::abs(dkw.two_term - (4.0 * std::sqrt(std::log(101.0) / 100.0) +
                                                   std::sqrt(0.02 * std::log(20.0)))));
  const GeneralizationBound g = generalization_bound_dualdro(2, 10000, 10.0, 0.05);
  worst = std::max(worst, std::abs(g.value - 64.0 * std::sqrt(2e-4 * std::log(200.0 * std::sqrt(5e11)))));
  const double n_req = static_cast<double>(sample_size_requirement(3, 16, 0.3, 11.0, 1.0).n_required);
  worst = std::max(worst, std::abs(n_req - 1027.0));
  return make("closed-forms", worst, 1e-12, "bound and radius formulas vs direct evaluation");
}

}  // namespace

bool SelfCheckReport::all_passed() const {
  return std::all_of(results.begin(), results.end(), [](const CheckResult& r) { return r.passed; });
}

SelfCheckReport selfcheck(const SelfCheckOptions& options) {
  const std::function<double(double)> q = options.qfunction ? options.qfunction : [](double x) { return qfunction(x); };
  SelfCheckReport report;
  report.results.push_back(check_qfunction(q));
  report.results.push_back(check_ot());
  report.results.push_back(check_breakpoints());
  report.results.push_back(check_population_dual());
  report.results.push_back(check_pseudolabel_mean());
  report.results.push_back(check_angular_grid());
  report.results.push_back(check_hand_iteration());
  report.results.push_back(check_expansion());
  report.results.push_back(check_eigen());
  report.results.push_back(check_two_step());
  report.results.push_back(check_formulas());
  return report;
}

void write_report(std::ostream& out, const SelfCheckReport& report) {
  out << "suite,status,deviation,tolerance,detail\n";
  for (const CheckResult& r : report.results) {
    out << r.suite << ',' << (r.passed ? "pass" : "FAIL") << ',' << format_double(r.deviation) << ','
        << format_double(r.tolerance) << ',' << r.detail << '\n';
  }
}

}  // namespace droda
