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

#ifndef VRUREF__EOT_HPP_
#define VRUREF__EOT_HPP_

#include "vruref/core.hpp"

#include <Eigen/Core>

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace vruref::eot
{

using Vector5 = Eigen::Matrix<double, 5, 1>;
using Matrix5 = Eigen::Matrix<double, 5, 5>;

// Kinematic state layout.
enum Index : int { kX = 0, kY = 1, kSpeed = 2, kHeading = 3, kYawRate = 4 };

/// Raised when the extent matrix stops being symmetric positive definite.
class ConsistencyError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

/// Random-matrix track: kinematic state with covariance, SPD extent matrix
/// and its degrees of freedom.
struct RmmTrack
{
  double timestamp{0.0};
  Vector5 state{Vector5::Zero()};
  Matrix5 covariance{Matrix5::Identity()};
  Matrix2 extent{Matrix2::Identity()};
  double dof{10.0};
};

struct ProcessNoise
{
  double accel_sigma{1.0};      // m/s^2, drives speed
  double yaw_accel_sigma{1.0};  // rad/s^2, drives yaw rate
  double dof_floor{5.0};
  double dof_retention{0.99};   // fraction of dof above the floor kept per second
};

struct MeasurementNoise
{
  Matrix2 sensor{Matrix2::Identity() * 0.01};  // m^2 per detection
  double extent_scale{0.25};                   // detection spread = scale * extent + sensor
  double doppler_sigma{0.2};                   // m/s per detection
  double doppler_model_sigma{0.1};             // m/s, rigid-body model error of the scan mean
  double doppler_max_heading_sigma{0.2};       // rad; above this the update is skipped
};

struct ScanMeasurement
{
  double timestamp{0.0};
  std::vector<Point2> points;              // global frame
  std::vector<double> radial_velocities;   // same order as points
  Point2 sensor_position{0.0, 0.0};        // global frame
};

struct ExtentEstimate
{
  double length{0.0};
  double width{0.0};
  double orientation{0.0};  // (-pi/2, pi/2]
};

/// Noise-free constant-turn propagation. Straight-line series below |yaw rate| 1e-6.
Vector5 constant_turn(const Vector5 & state, double dt);
Matrix5 constant_turn_jacobian(const Vector5 & state, double dt);

RmmTrack predict(const RmmTrack & track, double dt, const ProcessNoise & noise = {});

/// Random-matrix measurement update with the scan mean and scatter, plus an
/// optional scalar update of speed, heading and yaw rate from the mean Doppler.
/// Throws UsageError for an empty scan.
RmmTrack update(
  const RmmTrack & track, const ScanMeasurement & scan, bool use_doppler,
  const MeasurementNoise & noise = {});

/// Doppler predicted for the track centroid as seen from `sensor_position`.
double predicted_radial_velocity(const Vector5 & state, const Point2 & sensor_position);

/// Principal axes of scale * extent: length = 2 sqrt(l1), width = 2 sqrt(l2).
ExtentEstimate extract_extent(const RmmTrack & track, double scale = 1.0);
ExtentEstimate extract_extent(const Matrix2 & extent, double scale = 1.0);
Matrix2 reconstruct_extent(const ExtentEstimate & estimate);

bool is_spd(const Matrix2 & m);
Matrix2 sqrtm_spd(const Matrix2 & m);

struct TrackerParams
{
  ProcessNoise process{};
  MeasurementNoise measurement{};
  bool use_doppler{false};
  double initial_dof{10.0};
  double initial_speed_sigma{3.0};    // m/s
  double initial_heading_sigma{0.5};  // rad
  double initial_yaw_rate_sigma{0.5}; // rad/s
  double extent_floor{0.04};          // m^2, per axis
};

struct TrackEstimate
{
  double timestamp{0.0};
  double x{0.0};
  double y{0.0};
  double speed{0.0};
  double heading{0.0};
  double yaw_rate{0.0};
  ExtentEstimate extent{};
};

/// Single-target tracker. The first scan seeds position and extent; the
/// second fixes the initial heading from the displacement of the scan means.
class RmmTracker
{
public:
  explicit RmmTracker(TrackerParams params = {});

  /// Returns an estimate for every scan after the first; empty scans are skipped.
  std::optional<TrackEstimate> process(const ScanMeasurement & scan);

  const std::optional<RmmTrack> & track() const { return track_; }

private:
  TrackerParams params_;
  std::optional<ScanMeasurement> first_;
  std::optional<RmmTrack> track_;
};

std::vector<TrackEstimate> run_tracker(
  std::span<const ScanMeasurement> scans, const TrackerParams & params = {});

struct TruthSample
{
  double timestamp{0.0};
  double x{0.0};
  double y{0.0};
  double yaw_rate{0.0};
  double orientation{0.0};
  double length{0.0};
  double width{0.0};
};

struct ErrorSample
{
  double timestamp{0.0};
  double centroid_error{0.0};
  double centroid_rmse{0.0};  // running over all samples so far
  double length_rmse{0.0};
  double width_rmse{0.0};
  double yaw_rate_abs_error{0.0};
  double orientation_abs_error_deg{0.0};  // modulo 180 degrees
};

/// Orientation difference of two undirected axes, in [0, pi/2].
double axis_angle_error(double estimate, double truth);

/// Throws UsageError unless both series have equal length and matching timestamps.
std::vector<ErrorSample> tracking_metrics(
  std::span<const TrackEstimate> estimates, std::span<const TruthSample> truth);

}  // namespace vruref::eot

#endif  // VRUREF__EOT_HPP_
