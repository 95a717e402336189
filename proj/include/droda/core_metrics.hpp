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

#ifndef DRODA_CORE_METRICS_HPP
#define DRODA_CORE_METRICS_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace droda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

struct LabeledPoint {
  Vector x;
  int y = 1;  // -1 or +1
};

// Equal-weight empirical measure over labeled points. Features are stored one
// point per row.
class PointCloud {
 public:
  PointCloud() = default;
  PointCloud(Matrix features, std::vector<int> labels);
  explicit PointCloud(const std::vector<LabeledPoint>& points);

  std::size_t size() const { return labels_.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features_.cols()); }
  bool empty() const { return labels_.empty(); }

  const Matrix& features() const { return features_; }
  const std::vector<int>& labels() const { return labels_; }
  int label(std::size_t i) const { return labels_[i]; }
  auto row(std::size_t i) const { return features_.row(static_cast<Eigen::Index>(i)); }
  LabeledPoint point(std::size_t i) const;

  // Same features, new labels.
  PointCloud relabeled(std::vector<int> labels) const;

  bool operator==(const PointCloud& other) const;

 private:
  Matrix features_;
  std::vector<int> labels_;
};

// Weighted Wasserstein ground metric ||x - x'||_p^q + lambda * [y != y'].
struct MetricParams {
  double p = 2.0;
  double q = 1.0;
  double lambda = 0.0;

  void validate() const;
};

struct Match {
  std::size_t source = 0;
  std::size_t target = 0;
  double mass = 0.0;
};

struct TransportPlan {
  std::vector<Match> matches;
  double total_cost = 0.0;
};

struct WassersteinResult {
  double distance = 0.0;
  TransportPlan plan;
};

// Largest expanded assignment size accepted by empirical_wasserstein. Clouds
// of unequal size are expanded to lcm(|A|, |B|) unit-mass slots per side.
inline constexpr std::size_t kMaxTransportSize = 500;

double ground_cost(const LabeledPoint& a, const LabeledPoint& b, const MetricParams& m);

// Exact discrete optimal transport between two equal-weight clouds under
// ground_cost. Equal sizes solve a min-cost assignment; unequal sizes split
// each point into lcm/n copies first.
WassersteinResult empirical_wasserstein(const PointCloud& a, const PointCloud& b,
                                        const MetricParams& m);

// Upper tail of the standard normal, P(N(0,1) > x).
double qfunction(double x);

// Standard normal density.
double normal_pdf(double x);

// CSV with header x0,...,x{d-1},y and labels in {-1, 1}.
PointCloud read_cloud_csv(std::istream& in);
void write_cloud_csv(std::ostream& out, const PointCloud& cloud);

}  // namespace droda

#endif  // DRODA_CORE_METRICS_HPP
