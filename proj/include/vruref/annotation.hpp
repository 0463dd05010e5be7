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

#ifndef VRUREF__ANNOTATION_HPP_
#define VRUREF__ANNOTATION_HPP_

#include "vruref/core.hpp"
#include "vruref/selection.hpp"
#include "vruref/trajectory.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vruref
{

enum class VruKind { Pedestrian, Cyclist };

std::string_view to_string(VruKind kind);
/// Accepts "pedestrian" / "cyclist"; throws UsageError otherwise.
VruKind parse_vru_kind(std::string_view text);

struct RadarScan
{
  double timestamp{0.0};
  int sensor_id{0};
  std::vector<RadarDetection> detections;
};

struct AnnotatedDetection
{
  std::size_t index{0};  // position within the originating scan
  RadarDetection detection{};
  Point2 global{0.0, 0.0};
};

struct LabeledScan
{
  double timestamp{0.0};
  int sensor_id{0};
  int track_id{0};
  VruKind vru_kind{VruKind::Pedestrian};
  std::vector<AnnotatedDetection> assigned;
  std::vector<AnnotatedDetection> rejected;
  std::optional<OrientedEllipse> bounding;  // empty when nothing was assigned
  TrajectoryState vru_state{};
};

/// Piecewise-linear ego pose history. A single pose describes a parked vehicle.
class EgoTrajectory
{
public:
  struct Stamped
  {
    double timestamp;
    Pose pose;
  };

  explicit EgoTrajectory(Pose static_pose);
  explicit EgoTrajectory(std::vector<Stamped> poses);

  /// Clamped to the first/last pose outside the recorded span.
  Pose pose_at(double t) const;

private:
  std::vector<Stamped> poses_;
};

struct AnnotationParams
{
  int track_id{1};
  double shape_scale{1.0};  // multiplies the selection-shape extents
};

struct AnnotationResult
{
  std::vector<LabeledScan> scans;  // timestamp order
  std::size_t skipped{0};          // scans outside the trajectory support
};

SelectionShape selection_shape(
  VruKind kind, const TrajectoryState & state, const Trajectory & trajectory);

/// Assigns each scan's detections to the VRU track. Scans are processed in
/// parallel; output is in timestamp order and identical to serial::annotate_scenario.
AnnotationResult annotate_scenario(
  std::span<const RadarScan> scans, const Trajectory & trajectory, VruKind kind,
  std::span<const SensorMount> mounts, const EgoTrajectory & ego,
  const AnnotationParams & params = {});

namespace serial
{
AnnotationResult annotate_scenario(
  std::span<const RadarScan> scans, const Trajectory & trajectory, VruKind kind,
  std::span<const SensorMount> mounts, const EgoTrajectory & ego,
  const AnnotationParams & params = {});
}  // namespace serial

}  // namespace vruref

#endif  // VRUREF__ANNOTATION_HPP_
