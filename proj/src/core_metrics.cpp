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

#include "droda/core_metrics.hpp"

#include <cmath>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>

#include "droda/assignment.hpp"
#include "droda/errors.hpp"
#include "droda/format.hpp"

namespace droda {

namespace {

void check_label(int y) {
  if (y != -1 && y != 1) throw InvalidInput("label must be -1 or +1, got " + std::to_string(y));
}

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_double(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw InvalidInput("cloud csv line " + std::to_string(line_no) + ": bad number '" + s + "'");
  }
  return value;
}

}  // namespace

PointCloud::PointCloud(Matrix features, std::vector<int> labels)
    : features_(std::move(features)), labels_(std::move(labels)) {
  if (static_cast<std::size_t>(features_.rows()) != labels_.size()) {
    throw InvalidInput("PointCloud: feature rows and label count differ");
  }
  if (!labels_.empty() && features_.cols() < 1) {
    throw InvalidInput("PointCloud: dimension must be at least 1");
  }
  if (!features_.allFinite()) throw InvalidInput("PointCloud: non-finite feature");
  for (int y : labels_) check_label(y);
}

PointCloud::PointCloud(const std::vector<LabeledPoint>& points) {
  if (points.empty()) return;
  const auto d = points.front().x.size();
  features_.resize(static_cast<Eigen::Index>(points.size()), d);
  labels_.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].x.size() != d) throw InvalidInput("PointCloud: points differ in dimension");
    features_.row(static_cast<Eigen::Index>(i)) = points[i].x.transpose();
    check_label(points[i].y);
    labels_.push_back(points[i].y);
  }
  if (d < 1) throw InvalidInput("PointCloud: dimension must be at least 1");
  if (!features_.allFinite()) throw InvalidInput("PointCloud: non-finite feature");
}

LabeledPoint PointCloud::point(std::size_t i) const {
  return LabeledPoint{features_.row(static_cast<Eigen::Index>(i)).transpose(), labels_[i]};
}

PointCloud PointCloud::relabeled(std::vector<int> labels) const {
  return PointCloud(features_, std::move(labels));
}

bool PointCloud::operator==(const PointCloud& other) const {
  return labels_ == other.labels_ && features_.rows() == other.features_.rows() &&
         features_.cols() == other.features_.cols() && features_ == other.features_;
}

void MetricParams::validate() const {
  if (!(p >= 1.0) || !(q >= 1.0)) throw InvalidInput("MetricParams: p and q must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
    throw InvalidInput("MetricParams: lambda must be finite and >= 0");
  }
}

double ground_cost(const LabeledPoint& a, const LabeledPoint& b, const MetricParams& m) {
  if (a.x.size() != b.x.size()) throw InvalidInput("ground_cost: dimension mismatch");
  double norm = 0.0;
  if (std::isinf(m.p)) {
    norm = (a.x - b.x).cwiseAbs().maxCoeff();
  } else if (m.p == 2.0) {
    norm = (a.x - b.x).norm();
  } else {
    norm = std::pow((a.x - b.x).cwiseAbs().array().pow(m.p).sum(), 1.0 / m.p);
  }
  const double transport = (m.q == 1.0) ? norm : std::pow(norm, m.q);
  return transport + (a.y != b.y ? m.lambda : 0.0);
}

WassersteinResult empirical_wasserstein(const PointCloud& a, const PointCloud& b,
                                        const MetricParams& m) {
  m.validate();
  if (a.empty() || b.empty()) throw InvalidInput("empirical_wasserstein: empty cloud");
  if (a.dim() != b.dim()) throw InvalidInput("empirical_wasserstein: dimension mismatch");

  const std::size_t na = a.size();
  const std::size_t nb = b.size();
  const std::size_t slots = std::lcm(na, nb);
  if (slots > kMaxTransportSize) {
    throw InvalidInput("empirical_wasserstein: lcm of cloud sizes " + std::to_string(slots) +
                       " exceeds cap " + std::to_string(kMaxTransportSize));
  }
  const std::size_t copies_a = slots / na;
  const std::size_t copies_b = slots / nb;

  Matrix pair_cost(static_cast<Eigen::Index>(na), static_cast<Eigen::Index>(nb));
  for (std::size_t i = 0; i < na; ++i) {
    const LabeledPoint pa = a.point(i);
    for (std::size_t j = 0; j < nb; ++j) {
      pair_cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          ground_cost(pa, b.point(j), m);
    }
  }

  Matrix slot_cost(static_cast<Eigen::Index>(slots), static_cast<Eigen::Index>(slots));
  for (std::size_t s = 0; s < slots; ++s) {
    for (std::size_t t = 0; t < slots; ++t) {
      slot_cost(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) =
          pair_cost(static_cast<Eigen::Index>(s / copies_a), static_cast<Eigen::Index>(t / copies_b));
    }
  }
  const Assignment assignment = solve_assignment(slot_cost);

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> counts;
  for (std::size_t s = 0; s < slots; ++s) {
    ++counts[{s / copies_a, assignment.row_to_col[s] / copies_b}];
  }

  WassersteinResult result;
  const double slot_mass = 1.0 / static_cast<double>(slots);
  for (const auto& [key, count] : counts) {
    result.plan.matches.push_back(Match{key.first, key.second, static_cast<double>(count) * slot_mass});
  }
  // Sum matched costs in (source, target) order so the value does not depend
  // on the solver's internal slot order.
  double total = 0.0;
  for (const Match& match : result.plan.matches) {
    total += match.mass * pair_cost(static_cast<Eigen::Index>(match.source),
                                    static_cast<Eigen::Index>(match.target));
  }
  result.plan.total_cost = total;
  result.distance = total;
  return result;
}

double qfunction(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

double normal_pdf(double x) {
  constexpr double kInvSqrt2Pi = 0.39894228040143267794;
  return kInvSqrt2Pi * std::exp(-0.5 * x * x);
}

PointCloud read_cloud_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) break;
  }
  const auto header = split_csv_line(trim(line));
  if (header.size() < 2 || header.back() != "y") {
    throw InvalidInput("cloud csv: header must be x0,...,x{d-1},y");
  }
  const std::size_t d = header.size() - 1;
  for (std::size_t k = 0; k < d; ++k) {
    if (header[k] != "x" + std::to_string(k)) {
      throw InvalidInput("cloud csv: expected column x" + std::to_string(k) + ", got '" +
                         header[k] + "'");
    }
  }

  std::vector<LabeledPoint> points;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto cells = split_csv_line(body);
    if (cells.size() != d + 1) {
      throw InvalidInput("cloud csv line " + std::to_string(line_no) + ": expected " +
                         std::to_string(d + 1) + " columns");
    }
    LabeledPoint pt{Vector(static_cast<Eigen::Index>(d)), 1};
    for (std::size_t k = 0; k < d; ++k) pt.x[static_cast<Eigen::Index>(k)] = parse_double(cells[k], line_no);
    const double y = parse_double(cells[d], line_no);
    if (y != 1.0 && y != -1.0) {
      throw InvalidInput("cloud csv line " + std::to_string(line_no) + ": label must be -1 or 1");
    }
    pt.y = static_cast<int>(y);
    points.push_back(std::move(pt));
  }
  if (points.empty()) throw InvalidInput("cloud csv: no points");
  return PointCloud(points);
}

void write_cloud_csv(std::ostream& out, const PointCloud& cloud) {
  for (std::size_t k = 0; k < cloud.dim(); ++k) out << 'x' << k << ',';
  out << "y\n";
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    for (std::size_t k = 0; k < cloud.dim(); ++k) {
      out << format_double(cloud.features()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k))) << ',';
    }
    out << cloud.label(i) << '\n';
  }
}

}  // namespace droda
