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

#ifndef VRUREF__TRAJECTORY_HPP_
#define VRUREF__TRAJECTORY_HPP_

#include "vruref/core.hpp"
#include "vruref/spline.hpp"

#include <limits>
#include <optional>
#include <span>
#include <vector>

namespace vruref
{

enum class GnssQuality { FixRtk, FixFloat, Degraded };

struct GnssSample
{
  double timestamp{0.0};
  double x{0.0};
  double y{0.0};
  GnssQuality quality{GnssQuality::FixRtk};
};

struct ImuSample
{
  double timestamp{0.0};
  double yaw_rate{0.0};       // rad/s
  double accel_forward{0.0};  // m/s^2
  double yaw{std::numeric_limits<double>::quiet_NaN()};  // NaN when the device does not report it
};

struct TrajectoryState
{
  double timestamp{0.0};
  Pose pose{};
  double speed{0.0};
  double yaw_rate{0.0};
};

/// Default smoothing length. At 18 Hz GNSS this spans 0.5 s, at 90 Hz IMU 0.1 s.
constexpr int kDefaultSmoothingWindow = 9;

/// Speed below which the VRU counts as standing still.
constexpr double kStandstillSpeed = 0.05;

enum class EdgeMode
{
  Symmetric,  // shrink to the largest centered window that fits
  Truncate,   // average whatever part of the nominal window exists
};

/// Centered moving average; output length equals input length.
std::vector<double> moving_average(
  std::span<const double> values, int window = kDefaultSmoothingWindow,
  EdgeMode edges = EdgeMode::Symmetric);

std::vector<GnssSample> smooth(
  std::span<const GnssSample> samples, int window = kDefaultSmoothingWindow);

/// Smooths yaw rate and acceleration. The optional yaw channel is left as is.
std::vector<ImuSample> smooth(
  std::span<const ImuSample> samples, int window = kDefaultSmoothingWindow);

/// Smooths position, speed and yaw rate of a state stream.
std::vector<TrajectoryState> smooth(
  std::span<const TrajectoryState> states, int window = kDefaultSmoothingWindow);

/// Queryable reference trajectory: natural cubic splines through smoothed
/// positions, plus an optional yaw-rate channel from the IMU.
class Trajectory
{
public:
  Trajectory(
    std::vector<double> times, std::span<const Point2> positions,
    std::span<const ImuSample> yaw_rate_source = {},
    double standstill_speed = kStandstillSpeed);

  /// Throws OutOfRangeError when t lies outside [start_time(), end_time()].
  TrajectoryState state_at(double t) const;

  /// Yaw of the most recent instant at or before t where the VRU was moving.
  double last_moving_yaw(double t) const;

  double start_time() const { return times_.front(); }
  double end_time() const { return times_.back(); }
  bool covers(double t) const;
  std::size_t knot_count() const { return times_.size(); }

private:
  std::vector<double> times_;
  NaturalCubicSpline x_;
  NaturalCubicSpline y_;
  std::vector<double> rate_times_;
  std::vector<double> rates_;
  std::vector<double> held_yaw_;
  double standstill_speed_;
};

/// Pure GNSS reference: smooth fixes, spline them, take yaw rate from the IMU if given.
Trajectory build_gnss_trajectory(
  std::span<const GnssSample> gnss, std::span<const ImuSample> imu = {},
  int window = kDefaultSmoothingWindow);

/// Reference from a fused state stream (see fuse_gnss_imu).
Trajectory build_fused_trajectory(
  std::span<const TrajectoryState> fused, std::span<const ImuSample> imu = {},
  int window = kDefaultSmoothingWindow);

/// Reference directly from known states, no smoothing (used for simulator truth).
Trajectory build_state_trajectory(std::span<const TrajectoryState> states);

struct FusionParams
{
  double innovation_gate{0.5};        // m
  double consistency_gate{0.15};      // m, displacement mismatch over consistency_span
  double consistency_span{0.5};       // s
  double position_gain{0.3};
  double speed_gain{0.2};
  double heading_gain{0.1};
  double standstill_speed{kStandstillSpeed};
  double standstill_yaw_rate{0.05};   // rad/s
  double max_coast{5.0};              // s without accepted fix before a forced reset
};

/// Loosely coupled GNSS+IMU fusion. IMU yaw rate and acceleration are dead
/// reckoned; GNSS fixes correct position, speed and heading when they pass the
/// innovation and displacement-consistency gates. Emits one state per IMU
/// sample inside the overlap of both streams.
std::vector<TrajectoryState> fuse_gnss_imu(
  std::span<const GnssSample> gnss, std::span<const ImuSample> imu,
  const FusionParams & params = {});

}  // namespace vruref

#endif  // VRUREF__TRAJECTORY_HPP_
