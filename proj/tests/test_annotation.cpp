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
#include "vruref/evaluation.hpp"
#include "vruref/pipeline.hpp"
#include "vruref/simulator.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <set>

namespace vruref
{
namespace
{

sim::Scenario short_scenario(int preset, std::uint64_t seed, double duration = 20.0)
{
  sim::ScenarioConfig cfg = sim::preset(preset, seed);
  cfg.duration = duration;
  return sim::simulate(cfg);
}

AnnotationResult annotate_with_truth(const sim::Scenario & s, const AnnotationParams & params = {})
{
  const Trajectory truth = build_state_trajectory(s.truth);
  return annotate_scenario(
    s.scans, truth, s.config.vru_kind, s.config.mounts, EgoTrajectory(s.config.ego_pose), params);
}

bool same_detection(const AnnotatedDetection & a, const AnnotatedDetection & b)
{
  return a.index == b.index && a.detection.range == b.detection.range &&
         a.detection.azimuth == b.detection.azimuth && a.global == b.global;
}

bool same_scan(const LabeledScan & a, const LabeledScan & b)
{
  if (
    a.timestamp != b.timestamp || a.sensor_id != b.sensor_id || a.assigned.size() != b.assigned.size() ||
    a.rejected.size() != b.rejected.size() || a.bounding.has_value() != b.bounding.has_value()) {
    return false;
  }
  for (std::size_t i = 0; i < a.assigned.size(); ++i) {
    if (!same_detection(a.assigned[i], b.assigned[i])) {
      return false;
    }
  }
  for (std::size_t i = 0; i < a.rejected.size(); ++i) {
    if (!same_detection(a.rejected[i], b.rejected[i])) {
      return false;
    }
  }
  if (a.bounding) {
    return a.bounding->ax_along == b.bounding->ax_along &&
           a.bounding->ax_across == b.bounding->ax_across && a.bounding->center == b.bounding->center;
  }
  return true;
}

TEST(Annotation, CompactObjectWithoutClutterHasFullRecall)
{
  sim::ScenarioConfig cfg = sim::preset(1, 2);
  cfg.duration = 20.0;
  cfg.clutter_rate = 0.0;
  cfg.scatter_sigma = {0.05, 0.05};
  cfg.range_resolution = 0.01;
  cfg.azimuth_resolution = 0.001;
  const auto s = sim::simulate(cfg);
  const auto result = annotate_with_truth(s);
  const auto score = score_assignment(result.scans, sim::truth_index(s.labels), Averaging::Micro);
  EXPECT_GT(score.tp, 1000u);
  EXPECT_EQ(score.fn, 0u);
  EXPECT_DOUBLE_EQ(score.recall, 1.0);
}

TEST(Annotation, NominalPedestrianScoresAboveThreshold)
{
  const auto s = short_scenario(1, 3);
  const auto result = annotate_recording(
    s.gnss, s.imu, s.scans, s.config.vru_kind, s.config.mounts, s.config.ego_pose,
    ReferenceMode::GnssImu);
  const auto score = score_assignment(result.scans, sim::truth_index(s.labels), Averaging::Macro);
  EXPECT_GE(score.precision, 0.98);
  EXPECT_GE(score.recall, 0.98);
}

TEST(Annotation, ShrunkShapeLowersRecallNotPrecision)
{
  const auto s = short_scenario(1, 4);
  const TruthIndex truth = sim::truth_index(s.labels);
  const auto full = score_assignment(annotate_with_truth(s).scans, truth, Averaging::Micro);
  AnnotationParams half;
  half.shape_scale = 0.5;
  const auto shrunk = score_assignment(annotate_with_truth(s, half).scans, truth, Averaging::Micro);
  EXPECT_LT(shrunk.recall, full.recall - 0.01);
  EXPECT_GE(shrunk.precision, full.precision);
}

TEST(Annotation, PartitionIsExhaustiveAndBoundingCoversAssigned)
{
  const auto s = short_scenario(2, 5);
  const auto result = annotate_with_truth(s);
  ASSERT_EQ(result.scans.size(), s.scans.size());
  for (std::size_t k = 0; k < result.scans.size(); ++k) {
    const LabeledScan & ls = result.scans[k];
    const auto scan = std::find_if(s.scans.begin(), s.scans.end(), [&](const RadarScan & r) {
      return r.timestamp == ls.timestamp && r.sensor_id == ls.sensor_id;
    });
    ASSERT_NE(scan, s.scans.end());
    std::set<std::size_t> seen;
    for (const auto & a : ls.assigned) {
      EXPECT_TRUE(seen.insert(a.index).second);
    }
    for (const auto & r : ls.rejected) {
      EXPECT_TRUE(seen.insert(r.index).second);
    }
    EXPECT_EQ(seen.size(), scan->detections.size());
    EXPECT_EQ(ls.bounding.has_value(), !ls.assigned.empty());
    for (const auto & a : ls.assigned) {
      EXPECT_LE(ls.bounding->normalized_radius_sq(a.global), 1.0 + 1e-9);
    }
    if (k > 0) {
      EXPECT_LE(result.scans[k - 1].timestamp, ls.timestamp);
    }
  }
}

TEST(Annotation, ParallelMatchesSerial)
{
  const auto s = short_scenario(2, 6);
  const Trajectory truth = build_state_trajectory(s.truth);
  const EgoTrajectory ego(s.config.ego_pose);
  const auto par = annotate_scenario(s.scans, truth, s.config.vru_kind, s.config.mounts, ego);
  const auto ser =
    serial::annotate_scenario(s.scans, truth, s.config.vru_kind, s.config.mounts, ego);
  ASSERT_EQ(par.scans.size(), ser.scans.size());
  EXPECT_EQ(par.skipped, ser.skipped);
  for (std::size_t i = 0; i < par.scans.size(); ++i) {
    EXPECT_TRUE(same_scan(par.scans[i], ser.scans[i])) << "scan " << i;
  }
}

TEST(Annotation, ScansOutsideSupportAreSkipped)
{
  const auto s = short_scenario(1, 7, 10.0);
  // Reference covering only the middle of the recording.
  std::vector<TrajectoryState> part;
  for (const auto & st : s.truth) {
    if (st.timestamp >= 3.0 && st.timestamp <= 6.0) {
      part.push_back(st);
    }
  }
  const Trajectory truth = build_state_trajectory(part);
  const auto result = annotate_scenario(
    s.scans, truth, s.config.vru_kind, s.config.mounts, EgoTrajectory(s.config.ego_pose));
  std::size_t outside = 0;
  for (const auto & scan : s.scans) {
    outside += truth.covers(scan.timestamp) ? 0 : 1;
  }
  EXPECT_GT(outside, 0u);
  EXPECT_EQ(result.skipped, outside);
  EXPECT_EQ(result.scans.size() + outside, s.scans.size());
  for (const auto & ls : result.scans) {
    EXPECT_TRUE(truth.covers(ls.timestamp));
  }
}

TEST(Annotation, MissingMountIsUsageError)
{
  const auto s = short_scenario(1, 8, 2.0);
  const Trajectory truth = build_state_trajectory(s.truth);
  std::vector<SensorMount> one{s.config.mounts.front()};
  EXPECT_THROW(
    annotate_scenario(s.scans, truth, s.config.vru_kind, one, EgoTrajectory(s.config.ego_pose)),
    UsageError);
}

TEST(Annotation, EmptyReferenceIsUsageError)
{
  EXPECT_THROW(build_gnss_trajectory({}), UsageError);
  EXPECT_THROW(build_state_trajectory({}), UsageError);
}

TEST(Annotation, SelectionShapeFollowsKind)
{
  const auto s = short_scenario(2, 9, 2.0);
  const Trajectory truth = build_state_trajectory(s.truth);
  const auto st = truth.state_at(1.0);
  EXPECT_TRUE(std::holds_alternative<OrientedRectangle>(selection_shape(VruKind::Cyclist, st, truth)));
  EXPECT_TRUE(
    std::holds_alternative<OrientedEllipse>(selection_shape(VruKind::Pedestrian, st, truth)));
}

TEST(VruKind, ParseAndPrint)
{
  EXPECT_EQ(parse_vru_kind("pedestrian"), VruKind::Pedestrian);
  EXPECT_EQ(parse_vru_kind("cyclist"), VruKind::Cyclist);
  EXPECT_EQ(to_string(VruKind::Cyclist), "cyclist");
  EXPECT_THROW(parse_vru_kind("horse"), UsageError);
}

TEST(EgoTrajectory, InterpolatesAndClamps)
{
  const EgoTrajectory ego({{0.0, Pose{0.0, 0.0, 0.0, Frame::global()}},
                           {2.0, Pose{2.0, 4.0, 1.0, Frame::global()}}});
  const Pose mid = ego.pose_at(1.0);
  EXPECT_NEAR(mid.x, 1.0, 1e-12);
  EXPECT_NEAR(mid.y, 2.0, 1e-12);
  EXPECT_NEAR(mid.yaw, 0.5, 1e-12);
  EXPECT_EQ(ego.pose_at(5.0).x, 2.0);
  EXPECT_EQ(ego.pose_at(-1.0).y, 0.0);
}

}  // namespace
}  // namespace vruref
