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

#ifndef VRUREF__EVALUATION_HPP_
#define VRUREF__EVALUATION_HPP_

#include "vruref/annotation.hpp"
#include "vruref/core.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace vruref
{

enum class PointLabel { Vru, Clutter };

/// Ground-truth point labels keyed by (scan timestamp, point index).
/// Timestamps are matched at microsecond resolution.
class TruthIndex
{
public:
  void add(double timestamp, std::size_t index, PointLabel label);
  bool has_scan(double timestamp) const;
  /// Throws UsageError when the scan or the point is unknown.
  PointLabel at(double timestamp, std::size_t index) const;
  std::size_t scan_count() const { return scans_.size(); }

  static std::int64_t key(double timestamp);

private:
  std::unordered_map<std::int64_t, std::vector<std::optional<PointLabel>>> scans_;
};

enum class Averaging { Micro, Macro };

struct ScanCounts
{
  std::uint64_t tp{0};
  std::uint64_t fp{0};
  std::uint64_t fn{0};
};

/// Undefined ratios (zero denominators) are reported as 1: nothing was
/// wrongly assigned or missed.
struct AssignmentScore
{
  std::uint64_t tp{0};
  std::uint64_t fp{0};
  std::uint64_t fn{0};
  double precision{1.0};
  double recall{1.0};
  std::size_t scans{0};
  std::size_t precision_scans{0};  // scans contributing to the macro precision
  std::size_t recall_scans{0};
};

ScanCounts count_scan(const LabeledScan & scan, const TruthIndex & truth);

/// Micro pools counts over all scans; macro averages per-scan ratios and
/// skips scans whose ratio is undefined.
AssignmentScore score_assignment(
  std::span<const LabeledScan> scans, const TruthIndex & truth, Averaging averaging);

/// Free-space path-loss compensation of a dB amplitude: + 40 log10(range / ref_range).
double r4_compensate(double amplitude_db, double range, double ref_range = 1.0);

/// Chi-square quantile with two degrees of freedom.
double chi2_quantile_2dof(double level);

struct ConfidenceEllipse
{
  Point2 center{0.0, 0.0};
  Matrix2 covariance{Matrix2::Zero()};  // sample covariance (n - 1)
  double major{0.0};                    // full axis lengths
  double minor{0.0};
  double orientation{0.0};              // major axis, folded into (-pi/2, pi/2]
  double quantile{0.0};

  bool contains(const Point2 & p) const;
};

/// Needs >= 3 points with non-degenerate covariance, else UsageError.
ConfidenceEllipse confidence_ellipse(std::span<const Point2> points, double level = 0.95);

/// Reference range for the distance-weighted detection count.
constexpr double kWeightedCountRange = 10.0;

struct CycleStats
{
  double timestamp{0.0};
  std::size_t count{0};
  double mean_range{0.0};
  double mean_comp_power{0.0};
  double doppler_std{0.0};
  std::optional<double> conf_major;  // absent with < 3 points or degenerate spread
  std::optional<double> conf_minor;
  double weighted_count{0.0};
};

/// Statistics over a scan's assigned detections. Throws UsageError when empty.
CycleStats cycle_stats(const LabeledScan & scan);

/// Per-cycle stats in scan order, skipping scans without assigned detections.
std::vector<CycleStats> cycle_stats_series(std::span<const LabeledScan> scans);

namespace serial
{
std::vector<CycleStats> cycle_stats_series(std::span<const LabeledScan> scans);
}  // namespace serial

double mean(std::span<const double> values);
/// Sample standard deviation, 0 for a single value.
double sample_std(std::span<const double> values);

struct TTestResult
{
  double t{0.0};
  double dof{0.0};
  double p_two_sided{1.0};
};

/// Welch's unequal-variance t-test. Each sample needs >= 2 values and a
/// nonzero variance, else UsageError.
TTestResult welch_t_test(std::span<const double> a, std::span<const double> b);

struct Histogram
{
  double lower{0.0};
  double bin_width{1.0};
  std::vector<std::uint64_t> counts;
  std::uint64_t below{0};
  std::uint64_t above{0};

  double bin_lower(std::size_t i) const { return lower + static_cast<double>(i) * bin_width; }
};

/// Left-closed, right-open bins covering [lower, upper).
Histogram histogram(std::span<const double> values, double bin_width, double lower, double upper);

}  // namespace vruref

#endif  // VRUREF__EVALUATION_HPP_
