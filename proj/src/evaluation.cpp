// Copyright 2026 The vruref Authors
//
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

#include "vruref/evaluation.hpp"

#include <Eigen/Eigenvalues>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vruref
{

std::int64_t TruthIndex::key(double timestamp)
{
  return std::llround(timestamp * 1e6);
}

void TruthIndex::add(double timestamp, std::size_t index, PointLabel label)
{
  auto & labels = scans_[key(timestamp)];
  if (labels.size() <= index) {
    labels.resize(index + 1);
  }
  labels[index] = label;
}

bool TruthIndex::has_scan(double timestamp) const
{
  return scans_.contains(key(timestamp));
}

PointLabel TruthIndex::at(double timestamp, std::size_t index) const
{
  const auto it = scans_.find(key(timestamp));
  if (it == scans_.end()) {
    throw UsageError("truth labels: no scan at t = " + std::to_string(timestamp));
  }
  if (index >= it->second.size() || !it->second[index]) {
    throw UsageError(
      "truth labels: no label for point " + std::to_string(index) + " at t = " +
      std::to_string(timestamp));
  }
  return *it->second[index];
}

ScanCounts count_scan(const LabeledScan & scan, const TruthIndex & truth)
{
  ScanCounts c;
  for (const auto & a : scan.assigned) {
    if (truth.at(scan.timestamp, a.index) == PointLabel::Vru) {
      ++c.tp;
    } else {
      ++c.fp;
    }
  }
  for (const auto & r : scan.rejected) {
    if (truth.at(scan.timestamp, r.index) == PointLabel::Vru) {
      ++c.fn;
    }
  }
  return c;
}

namespace
{

double ratio_or_one(std::uint64_t num, std::uint64_t den)
{
  return den == 0 ? 1.0 : static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

AssignmentScore score_assignment(
  std::span<const LabeledScan> scans, const TruthIndex & truth, Averaging averaging)
{
  AssignmentScore s;
  double precision_sum = 0.0;
  double recall_sum = 0.0;
  for (const auto & scan : scans) {
    const ScanCounts c = count_scan(scan, truth);
    s.tp += c.tp;
    s.fp += c.fp;
    s.fn += c.fn;
    ++s.scans;
    if (c.tp + c.fp > 0) {
      precision_sum += ratio_or_one(c.tp, c.tp + c.fp);
      ++s.precision_scans;
    }
    if (c.tp + c.fn > 0) {
      recall_sum += ratio_or_one(c.tp, c.tp + c.fn);
      ++s.recall_scans;
    }
  }
  if (averaging == Averaging::Micro) {
    s.precision = ratio_or_one(s.tp, s.tp + s.fp);
    s.recall = ratio_or_one(s.tp, s.tp + s.fn);
  } else {
    s.precision =
      s.precision_scans == 0 ? 1.0 : precision_sum / static_cast<double>(s.precision_scans);
    s.recall = s.recall_scans == 0 ? 1.0 : recall_sum / static_cast<double>(s.recall_scans);
  }
  return s;
}

double r4_compensate(double amplitude_db, double range, double ref_range)
{
  if (!(range > 0.0) || !(ref_range > 0.0)) {
    throw UsageError("r4_compensate: range and reference range must be positive");
  }
  return amplitude_db + 40.0 * std::log10(range / ref_range);
}

double chi2_quantile_2dof(double level)
{
  if (!(level > 0.0 && level < 1.0)) {
    throw UsageError("chi2 quantile: level must lie in (0, 1)");
  }
  // The 2-dof chi-square CDF is 1 - exp(-q / 2).
  return -2.0 * std::log1p(-level);
}

bool ConfidenceEllipse::contains(const Point2 & p) const
{
  const Point2 d = p - center;
  return d.dot(covariance.ldlt().solve(d)) <= quantile;
}

ConfidenceEllipse confidence_ellipse(std::span<const Point2> points, double level)
{
  if (points.size() < 3) {
    throw UsageError("confidence_ellipse: need at least 3 points");
  }
  ConfidenceEllipse e;
  e.quantile = chi2_quantile_2dof(level);
  Point2 sum = Point2::Zero();
  for (const auto & p : points) {
    sum += p;
  }
  e.center = sum / static_cast<double>(points.size());
  for (const auto & p : points) {
    const Point2 d = p - e.center;
    e.covariance += d * d.transpose();
  }
  e.covariance /= static_cast<double>(points.size() - 1);

  Eigen::SelfAdjointEigenSolver<Matrix2> eig(e.covariance);
  const double small = eig.eigenvalues()(0);
  const double large = eig.eigenvalues()(1);
  if (!(large > 0.0) || small <= 1e-12 * large) {
    throw UsageError("confidence_ellipse: degenerate covariance");
  }
  e.major = 2.0 * std::sqrt(large * e.quantile);
  e.minor = 2.0 * std::sqrt(small * e.quantile);
  const Point2 axis = eig.eigenvectors().col(1);
  e.orientation = fold_axis_angle(std::atan2(axis.y(), axis.x()));
  return e;
}

double mean(std::span<const double> values)
{
  if (values.empty()) {
    throw UsageError("mean: empty sample");
  }
  return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
}

double sample_std(std::span<const double> values)
{
  if (values.size() < 2) {
    if (values.empty()) {
      throw UsageError("sample_std: empty sample");
    }
    return 0.0;
  }
  const double m = mean(values);
  double ss = 0.0;
  for (double v : values) {
    ss += (v - m) * (v - m);
  }
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

CycleStats cycle_stats(const LabeledScan & scan)
{
  if (scan.assigned.empty()) {
    throw UsageError("cycle_stats: scan has no assigned detections");
  }
  CycleStats s;
  s.timestamp = scan.timestamp;
  s.count = scan.assigned.size();

  std::vector<double> power;
  std::vector<double> doppler;
  std::vector<Point2> points;
  double range_sum = 0.0;
  for (const auto & a : scan.assigned) {
    power.push_back(r4_compensate(a.detection.amplitude, a.detection.range));
    doppler.push_back(a.detection.radial_velocity);
    points.push_back(a.global);
    range_sum += a.detection.range;
  }
  s.mean_range = range_sum / static_cast<double>(s.count);
  s.mean_comp_power = mean(power);
  s.doppler_std = sample_std(doppler);
  const double rel = s.mean_range / kWeightedCountRange;
  s.weighted_count = static_cast<double>(s.count) * rel * rel;
  if (points.size() >= 3) {
    try {
      const ConfidenceEllipse e = confidence_ellipse(points);
      s.conf_major = e.major;
      s.conf_minor = e.minor;
    } catch (const UsageError &) {
      // collinear or coincident points: axes stay absent
    }
  }
  return s;
}

std::vector<CycleStats> cycle_stats_series(std::span<const LabeledScan> scans)
{
  std::vector<std::optional<CycleStats>> slots(scans.size());
  const auto n = static_cast<std::ptrdiff_t>(scans.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    if (!scans[i].assigned.empty()) {
      slots[i] = cycle_stats(scans[i]);
    }
  }
  std::vector<CycleStats> out;
  for (auto & s : slots) {
    if (s) {
      out.push_back(*s);
    }
  }
  return out;
}

namespace serial
{

std::vector<CycleStats> cycle_stats_series(std::span<const LabeledScan> scans)
{
  std::vector<CycleStats> out;
  for (const auto & scan : scans) {
    if (!scan.assigned.empty()) {
      out.push_back(cycle_stats(scan));
    }
  }
  return out;
}

}  // namespace serial

TTestResult welch_t_test(std::span<const double> a, std::span<const double> b)
{
  if (a.size() < 2 || b.size() < 2) {
    throw UsageError("welch_t_test: each sample needs at least two values");
  }
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double va = sample_std(a) * sample_std(a);
  const double vb = sample_std(b) * sample_std(b);
  if (!(va > 0.0) || !(vb > 0.0)) {
    throw UsageError("welch_t_test: degenerate (zero) variance");
  }
  const double sa = va / na;
  const double sb = vb / nb;
  TTestResult r;
  r.t = (mean(a) - mean(b)) / std::sqrt(sa + sb);
  r.dof = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
  const boost::math::students_t dist(r.dof);
  r.p_two_sided = std::min(1.0, 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(r.t))));
  return r;
}

Histogram histogram(std::span<const double> values, double bin_width, double lower, double upper)
{
  if (!(bin_width > 0.0)) {
    throw UsageError("histogram: bin width must be positive");
  }
  if (!(upper > lower)) {
    throw UsageError("histogram: upper bound must exceed lower bound");
  }
  Histogram h;
  h.lower = lower;
  h.bin_width = bin_width;
  const auto bins = static_cast<std::size_t>(std::ceil((upper - lower) / bin_width - 1e-9));
  h.counts.assign(bins, 0);
  for (double v : values) {
    if (v < lower) {
      ++h.below;
    } else if (v >= upper) {
      ++h.above;
    } else {
      auto i = static_cast<std::size_t>(std::floor((v - lower) / bin_width));
      ++h.counts[std::min(i, bins - 1)];
    }
  }
  return h;
}

}  // namespace vruref
