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

#include "vruref/annotation.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

namespace vruref
{

std::string_view to_string(VruKind kind)
{
  return kind == VruKind::Pedestrian ? "pedestrian" : "cyclist";
}

VruKind parse_vru_kind(std::string_view text)
{
  if (text == "pedestrian") {
    return VruKind::Pedestrian;
  }
  if (text == "cyclist") {
    return VruKind::Cyclist;
  }
  throw UsageError("vru_kind: expected \"pedestrian\" or \"cyclist\", got \"" +
                   std::string(text) + "\"");
}

EgoTrajectory::EgoTrajectory(Pose static_pose) : poses_{{0.0, static_pose}} {}

EgoTrajectory::EgoTrajectory(std::vector<Stamped> poses) : poses_(std::move(poses))
{
  if (poses_.empty()) {
    throw UsageError("ego trajectory: no poses");
  }
  for (std::size_t i = 1; i < poses_.size(); ++i) {
    if (!(poses_[i].timestamp > poses_[i - 1].timestamp)) {
      throw UsageError("ego trajectory: timestamps must be strictly increasing");
    }
  }
}

Pose EgoTrajectory::pose_at(double t) const
{
  if (poses_.size() == 1 || t <= poses_.front().timestamp) {
    return poses_.front().pose;
  }
  if (t >= poses_.back().timestamp) {
    return poses_.back().pose;
  }
  auto it = std::upper_bound(
    poses_.begin(), poses_.end(), t,
    [](double value, const Stamped & s) { return value < s.timestamp; });
  const Stamped & b = *it;
  const Stamped & a = *(it - 1);
  const double w = (t - a.timestamp) / (b.timestamp - a.timestamp);
  Pose p = a.pose;
  p.x += w * (b.pose.x - a.pose.x);
  p.y += w * (b.pose.y - a.pose.y);
  p.yaw = wrap_angle(a.pose.yaw + w * wrap_angle(b.pose.yaw - a.pose.yaw));
  return p;
}

SelectionShape selection_shape(
  VruKind kind, const TrajectoryState & state, const Trajectory & trajectory)
{
  if (kind == VruKind::Pedestrian) {
    return pedestrian_ellipse(state);
  }
  return cyclist_rectangle(state, trajectory.last_moving_yaw(state.timestamp));
}

namespace
{

const SensorMount & find_mount(std::span<const SensorMount> mounts, int sensor_id)
{
  for (const auto & m : mounts) {
    if (m.sensor_id == sensor_id) {
      return m;
    }
  }
  throw UsageError("annotate: no mount for sensor " + std::to_string(sensor_id));
}

void check_mounts(std::span<const RadarScan> scans, std::span<const SensorMount> mounts)
{
  for (const auto & scan : scans) {
    find_mount(mounts, scan.sensor_id);
    for (const auto & d : scan.detections) {
      if (d.sensor_id != scan.sensor_id) {
        throw UsageError("annotate: detection sensor id differs from its scan");
      }
    }
  }
}

std::optional<LabeledScan> label_scan(
  const RadarScan & scan, const Trajectory & trajectory, VruKind kind,
  std::span<const SensorMount> mounts, const EgoTrajectory & ego, const AnnotationParams & params)
{
  if (!trajectory.covers(scan.timestamp)) {
    return std::nullopt;
  }
  const SensorMount & mount = find_mount(mounts, scan.sensor_id);
  const Pose ego_pose = ego.pose_at(scan.timestamp);

  LabeledScan out;
  out.timestamp = scan.timestamp;
  out.sensor_id = scan.sensor_id;
  out.track_id = params.track_id;
  out.vru_kind = kind;
  out.vru_state = trajectory.state_at(scan.timestamp);

  SelectionShape shape = selection_shape(kind, out.vru_state, trajectory);
  if (params.shape_scale != 1.0) {
    shape = scaled(shape, params.shape_scale);
  }
  const double orientation =
    std::visit([](const auto & s) { return s.orientation; }, shape);

  std::vector<Point2> inside;
  for (std::size_t i = 0; i < scan.detections.size(); ++i) {
    const RadarDetection & det = scan.detections[i];
    AnnotatedDetection a{i, det, ego_to_global(polar_to_ego(det, mount), ego_pose)};
    if (contains(shape, a.global)) {
      inside.push_back(a.global);
      out.assigned.push_back(a);
    } else {
      out.rejected.push_back(a);
    }
  }
  if (!inside.empty()) {
    out.bounding = fit_bounding_ellipse(inside, out.vru_state.pose.position(), orientation);
  }
  return out;
}

AnnotationResult collect(std::vector<std::optional<LabeledScan>> && slots)
{
  AnnotationResult result;
  for (auto & slot : slots) {
    if (slot) {
      result.scans.push_back(std::move(*slot));
    } else {
      ++result.skipped;
    }
  }
  std::stable_sort(
    result.scans.begin(), result.scans.end(),
    [](const LabeledScan & a, const LabeledScan & b) { return a.timestamp < b.timestamp; });
  return result;
}

}  // namespace

AnnotationResult annotate_scenario(
  std::span<const RadarScan> scans, const Trajectory & trajectory, VruKind kind,
  std::span<const SensorMount> mounts, const EgoTrajectory & ego, const AnnotationParams & params)
{
  check_mounts(scans, mounts);
  std::vector<std::optional<LabeledScan>> slots(scans.size());
  std::exception_ptr failure;
  const auto n = static_cast<std::ptrdiff_t>(scans.size());

#pragma omp parallel for schedule(dynamic, 16)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      slots[i] = label_scan(scans[i], trajectory, kind, mounts, ego, params);
    } catch (...) {
#pragma omp critical(vruref_annotate_failure)
      if (!failure) {
        failure = std::current_exception();
      }
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return collect(std::move(slots));
}

namespace serial
{

AnnotationResult annotate_scenario(
  std::span<const RadarScan> scans, const Trajectory & trajectory, VruKind kind,
  std::span<const SensorMount> mounts, const EgoTrajectory & ego, const AnnotationParams & params)
{
  check_mounts(scans, mounts);
  std::vector<std::optional<LabeledScan>> slots;
  slots.reserve(scans.size());
  for (const auto & scan : scans) {
    slots.push_back(label_scan(scan, trajectory, kind, mounts, ego, params));
  }
  return collect(std::move(slots));
}

}  // namespace serial

}  // namespace vruref
