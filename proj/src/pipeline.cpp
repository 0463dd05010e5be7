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

#include "vruref/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <string>

namespace vruref
{

namespace
{

const SensorMount & find_mount(std::span<const SensorMount> mounts, int sensor_id)
{
  const auto it = std::find_if(
    mounts.begin(), mounts.end(), [&](const SensorMount & m) { return m.sensor_id == sensor_id; });
  if (it == mounts.end()) {
    throw UsageError("no mount for sensor_id " + std::to_string(sensor_id));
  }
  return *it;
}

}  // namespace

ReferenceMode parse_reference_mode(std::string_view text)
{
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (lower == "gnss_only") {
    return ReferenceMode::GnssOnly;
  }
  if (lower == "gnss_imu") {
    return ReferenceMode::GnssImu;
  }
  throw UsageError("mode must be gnss_only or gnss_imu, got '" + std::string(text) + "'");
}

std::string_view to_string(ReferenceMode mode)
{
  return mode == ReferenceMode::GnssOnly ? "gnss_only" : "gnss_imu";
}

Trajectory build_reference(
  std::span<const GnssSample> gnss, std::span<const ImuSample> imu, ReferenceMode mode)
{
  if (mode == ReferenceMode::GnssOnly) {
    return build_gnss_trajectory(gnss, imu);
  }
  const auto fused = fuse_gnss_imu(gnss, imu);
  return build_fused_trajectory(fused, imu);
}

AnnotationResult annotate_recording(
  std::span<const GnssSample> gnss, std::span<const ImuSample> imu,
  std::span<const RadarScan> scans, VruKind kind, std::span<const SensorMount> mounts,
  const Pose & ego_pose, ReferenceMode mode, const AnnotationParams & params)
{
  const Trajectory reference = build_reference(gnss, imu, mode);
  return annotate_scenario(scans, reference, kind, mounts, EgoTrajectory(ego_pose), params);
}

std::vector<eot::ScanMeasurement> measurements_from_labeled(
  std::span<const LabeledScan> scans, std::span<const SensorMount> mounts, const Pose & ego_pose)
{
  std::vector<eot::ScanMeasurement> out;
  out.reserve(scans.size());
  for (const auto & scan : scans) {
    if (scan.assigned.empty()) {
      continue;
    }
    eot::ScanMeasurement m;
    m.timestamp = scan.timestamp;
    m.sensor_position = sensor_position_global(find_mount(mounts, scan.sensor_id), ego_pose);
    for (const auto & a : scan.assigned) {
      m.points.push_back(a.global);
      m.radial_velocities.push_back(a.detection.radial_velocity);
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<eot::ScanMeasurement> measurements_from_truth(
  std::span<const RadarScan> scans, const TruthIndex & truth, std::span<const SensorMount> mounts,
  const Pose & ego_pose)
{
  std::vector<eot::ScanMeasurement> out;
  out.reserve(scans.size());
  for (const auto & scan : scans) {
    const SensorMount & mount = find_mount(mounts, scan.sensor_id);
    eot::ScanMeasurement m;
    m.timestamp = scan.timestamp;
    m.sensor_position = sensor_position_global(mount, ego_pose);
    for (std::size_t i = 0; i < scan.detections.size(); ++i) {
      if (truth.at(scan.timestamp, i) != PointLabel::Vru) {
        continue;
      }
      const auto & d = scan.detections[i];
      m.points.push_back(ego_to_global(polar_to_ego(d, mount), ego_pose));
      m.radial_velocities.push_back(d.radial_velocity);
    }
    if (!m.points.empty()) {
      out.push_back(std::move(m));
    }
  }
  return out;
}

std::vector<eot::TruthSample> truth_samples(
  std::span<const eot::TrackEstimate> estimates, const Trajectory & truth,
  const sim::TrueExtent & extent)
{
  std::vector<eot::TruthSample> out;
  out.reserve(estimates.size());
  for (const auto & e : estimates) {
    const TrajectoryState s = truth.state_at(e.timestamp);
    out.push_back(
      {e.timestamp, s.pose.x, s.pose.y, s.yaw_rate, fold_axis_angle(s.pose.yaw), extent.length,
       extent.width});
  }
  return out;
}

}  // namespace vruref
