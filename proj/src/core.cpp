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

#include "vruref/core.hpp"

#include <cmath>
#include <string>

namespace vruref
{

double wrap_angle(double a)
{
  if (!std::isfinite(a)) {
    throw UsageError("wrap_angle: non-finite angle");
  }
  double r = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  if (r <= -kPi) {
    r += 2.0 * kPi;
  }
  return r;
}

double fold_axis_angle(double a)
{
  double r = std::remainder(a, kPi);  // [-pi/2, pi/2]
  if (r <= -kPi / 2.0) {
    r += kPi;
  }
  return r;
}

Matrix2 rotation(double yaw)
{
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Matrix2 r;
  r << c, -s, s, c;
  return r;
}

Point2 polar_to_ego(const RadarDetection & det, const SensorMount & mount)
{
  if (det.sensor_id != mount.sensor_id) {
    throw UsageError(
      "polar_to_ego: detection sensor " + std::to_string(det.sensor_id) +
      " does not match mount " + std::to_string(mount.sensor_id));
  }
  const Point2 local{det.range * std::cos(det.azimuth), det.range * std::sin(det.azimuth)};
  return rotation(mount.pose_in_ego.yaw) * local + mount.pose_in_ego.position();
}

Polar ego_to_polar(const Point2 & p, const SensorMount & mount)
{
  const Point2 local =
    rotation(mount.pose_in_ego.yaw).transpose() * (p - mount.pose_in_ego.position());
  return {local.norm(), std::atan2(local.y(), local.x())};
}

Point2 ego_to_global(const Point2 & p, const Pose & ego_pose)
{
  return rotation(ego_pose.yaw) * p + ego_pose.position();
}

Point2 global_to_ego(const Point2 & p, const Pose & ego_pose)
{
  return rotation(ego_pose.yaw).transpose() * (p - ego_pose.position());
}

Point2 sensor_position_global(const SensorMount & mount, const Pose & ego_pose)
{
  return ego_to_global(mount.pose_in_ego.position(), ego_pose);
}

void validate(const Pose & pose)
{
  if (!std::isfinite(pose.x) || !std::isfinite(pose.y)) {
    throw UsageError("pose: non-finite position");
  }
  if (!std::isfinite(pose.yaw) || pose.yaw <= -kPi || pose.yaw > kPi) {
    throw UsageError("pose: yaw outside (-pi, pi]");
  }
}

void validate(const SensorMount & mount)
{
  validate(mount.pose_in_ego);
  if (!(mount.fov_azimuth > 0.0 && mount.fov_azimuth <= kPi)) {
    throw UsageError("sensor mount: fov_azimuth must lie in (0, pi]");
  }
  if (!(mount.max_range > 0.0)) {
    throw UsageError("sensor mount: max_range must be positive");
  }
}

}  // namespace vruref
