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

#ifndef VRUREF__CORE_HPP_
#define VRUREF__CORE_HPP_

#include <Eigen/Core>

#include <numbers>
#include <stdexcept>
#include <string>

namespace vruref
{

/// Raised when a caller violates an operation's precondition.
class UsageError : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a query lies outside the support of a time series.
class OutOfRangeError : public std::out_of_range
{
public:
  using std::out_of_range::out_of_range;
};

using Point2 = Eigen::Vector2d;
using Matrix2 = Eigen::Matrix2d;

constexpr double kPi = std::numbers::pi;

enum class FrameKind { Global, Ego, Sensor, Object };

struct Frame
{
  FrameKind kind{FrameKind::Global};
  int sensor_id{-1};  // only meaningful for FrameKind::Sensor

  static Frame global() { return {FrameKind::Global, -1}; }
  static Frame ego() { return {FrameKind::Ego, -1}; }
  static Frame sensor(int id) { return {FrameKind::Sensor, id}; }
  static Frame object() { return {FrameKind::Object, -1}; }

  bool operator==(const Frame &) const = default;
};

/// Planar pose. Yaw is counterclockwise from +x and kept in (-pi, pi].
struct Pose
{
  double x{0.0};
  double y{0.0};
  double yaw{0.0};
  Frame frame{};

  Point2 position() const { return {x, y}; }
};

struct RadarDetection
{
  double timestamp{0.0};
  double range{0.0};
  double azimuth{0.0};
  double radial_velocity{0.0};  // Doppler, positive when receding
  double amplitude{0.0};        // dB
  int sensor_id{0};
};

struct SensorMount
{
  int sensor_id{0};
  Pose pose_in_ego{0.0, 0.0, 0.0, Frame::ego()};
  double fov_azimuth{kPi / 2.0};  // half-angle
  double max_range{100.0};
};

/// Wraps an angle into (-pi, pi]. Throws UsageError for non-finite input.
double wrap_angle(double a);

/// Folds an angle into (-pi/2, pi/2], i.e. an undirected axis direction.
double fold_axis_angle(double a);

Matrix2 rotation(double yaw);

/// Sensor polar measurement to ego-frame Cartesian point.
Point2 polar_to_ego(const RadarDetection & det, const SensorMount & mount);

struct Polar
{
  double range;
  double azimuth;
};

/// Inverse of polar_to_ego.
Polar ego_to_polar(const Point2 & p, const SensorMount & mount);

Point2 ego_to_global(const Point2 & p, const Pose & ego_pose);
Point2 global_to_ego(const Point2 & p, const Pose & ego_pose);

/// Global position of a sensor for a given ego pose.
Point2 sensor_position_global(const SensorMount & mount, const Pose & ego_pose);

void validate(const Pose & pose);
void validate(const SensorMount & mount);

}  // namespace vruref

#endif  // VRUREF__CORE_HPP_
