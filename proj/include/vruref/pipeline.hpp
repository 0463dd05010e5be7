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

#ifndef VRUREF__PIPELINE_HPP_
#define VRUREF__PIPELINE_HPP_

#include "vruref/annotation.hpp"
#include "vruref/eot.hpp"
#include "vruref/evaluation.hpp"
#include "vruref/simulator.hpp"
#include "vruref/trajectory.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace vruref
{

/// Which device streams build the VRU reference trajectory.
enum class ReferenceMode { GnssOnly, GnssImu };

/// Accepts "gnss_only" / "gnss_imu" (case-insensitive); throws UsageError otherwise.
ReferenceMode parse_reference_mode(std::string_view text);
std::string_view to_string(ReferenceMode mode);

Trajectory build_reference(
  std::span<const GnssSample> gnss, std::span<const ImuSample> imu, ReferenceMode mode);

/// Reference trajectory plus annotation in one call.
AnnotationResult annotate_recording(
  std::span<const GnssSample> gnss, std::span<const ImuSample> imu,
  std::span<const RadarScan> scans, VruKind kind, std::span<const SensorMount> mounts,
  const Pose & ego_pose, ReferenceMode mode, const AnnotationParams & params = {});

/// Tracker input from the assigned detections of labeled scans.
std::vector<eot::ScanMeasurement> measurements_from_labeled(
  std::span<const LabeledScan> scans, std::span<const SensorMount> mounts, const Pose & ego_pose);

/// Tracker input from the detections the simulator marked as VRU.
std::vector<eot::ScanMeasurement> measurements_from_truth(
  std::span<const RadarScan> scans, const TruthIndex & truth, std::span<const SensorMount> mounts,
  const Pose & ego_pose);

/// Truth for tracking_metrics at the estimate timestamps.
std::vector<eot::TruthSample> truth_samples(
  std::span<const eot::TrackEstimate> estimates, const Trajectory & truth,
  const sim::TrueExtent & extent);

}  // namespace vruref

#endif  // VRUREF__PIPELINE_HPP_
