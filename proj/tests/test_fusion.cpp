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

#include "vruref/simulator.hpp"
#include "vruref/trajectory.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <vector>

namespace vruref
{
namespace
{

double rms(const std::vector<double> & v)
{
  double s = 0.0;
  for (double x : v) {
    s += x * x;
  }
  return std::sqrt(s / static_cast<double>(v.size()));
}

TEST(Fusion, CleanGnssTracksPureGnssReference)
{
  sim::ScenarioConfig cfg = sim::preset(1, 3);
  const sim::EightCourse course(cfg.course_half_width, cfg.speed, cfg.course_center);
  const auto gnss = sim::generate_gnss(course, cfg);
  const auto imu = sim::generate_imu(course, cfg);
  const auto fused = fuse_gnss_imu(gnss, imu);
  const Trajectory pure = build_gnss_trajectory(gnss, imu);
  ASSERT_GT(fused.size(), 1000u);

  std::vector<double> diff;
  for (const auto & s : fused) {
    if (pure.covers(s.timestamp)) {
      diff.push_back((s.pose.position() - pure.state_at(s.timestamp).pose.position()).norm());
    }
  }
  EXPECT_LT(rms(diff), 0.05);
}

TEST(Fusion, BiasedWindowIsBridgedByDeadReckoning)
{
  const sim::ScenarioConfig cfg = sim::preset(3, 4);
  ASSERT_TRUE(cfg.perturbation.has_value());
  const auto & pert = *cfg.perturbation;
  const sim::EightCourse course(cfg.course_half_width, cfg.speed, cfg.course_center);
  const auto gnss = sim::generate_gnss(course, cfg);
  const auto imu = sim::generate_imu(course, cfg);
  const auto fused = fuse_gnss_imu(gnss, imu);
  const Trajectory fused_traj = build_fused_trajectory(fused, imu);
  const Trajectory pure = build_gnss_trajectory(gnss, imu);

  double fused_max = 0.0;
  double pure_max = 0.0;
  for (double t = pert.start; t <= pert.start + pert.duration; t += 0.01) {
    const Point2 truth = course.state_at(t).pose.position();
    fused_max = std::max(fused_max, (fused_traj.state_at(t).pose.position() - truth).norm());
    pure_max = std::max(pure_max, (pure.state_at(t).pose.position() - truth).norm());
  }
  EXPECT_LT(fused_max, 0.5);
  EXPECT_NEAR(pure_max, pert.bias.norm(), 0.3);
}

TEST(Fusion, StandstillFreezesPosition)
{
  std::vector<GnssSample> gnss;
  std::vector<ImuSample> imu;
  for (int i = 0; i <= 90; ++i) {
    const double t = i / 18.0;
    // Centimetre jitter around a fixed point.
    gnss.push_back(GnssSample{t, 2.0 + 0.01 * std::sin(7.0 * i), -1.0 + 0.01 * std::cos(5.0 * i)});
  }
  for (int i = 0; i <= 450; ++i) {
    imu.push_back(ImuSample{i / 90.0, 0.0, 0.0});
  }
  const auto fused = fuse_gnss_imu(gnss, imu);
  ASSERT_FALSE(fused.empty());
  const Point2 first = fused.front().pose.position();
  for (const auto & s : fused) {
    EXPECT_EQ(s.pose.position(), first);
    EXPECT_EQ(s.speed, 0.0);
    EXPECT_FALSE(std::isnan(s.pose.yaw));
  }
}

TEST(Fusion, OutputIsContinuous)
{
  const sim::ScenarioConfig cfg = sim::preset(3, 5);
  const sim::EightCourse course(cfg.course_half_width, cfg.speed, cfg.course_center);
  const auto gnss = sim::generate_gnss(course, cfg);
  const auto imu = sim::generate_imu(course, cfg);
  const FusionParams params;
  const auto fused = fuse_gnss_imu(gnss, imu, params);
  const double v_max = 2.0 * cfg.speed;
  for (std::size_t i = 1; i < fused.size(); ++i) {
    const double dt = fused[i].timestamp - fused[i - 1].timestamp;
    const double step = (fused[i].pose.position() - fused[i - 1].pose.position()).norm();
    EXPECT_LE(step, v_max * dt + params.innovation_gate);
  }
}

TEST(Fusion, OneStatePerImuSampleInOverlap)
{
  std::vector<GnssSample> gnss;
  std::vector<ImuSample> imu;
  for (int i = 0; i <= 36; ++i) {
    gnss.push_back(GnssSample{1.0 + i / 18.0, 1.0 + i / 18.0, 0.0});
  }
  for (int i = 0; i <= 360; ++i) {
    imu.push_back(ImuSample{i / 90.0, 0.0, 0.0});
  }
  const auto fused = fuse_gnss_imu(gnss, imu);
  std::size_t expected = 0;
  for (const auto & s : imu) {
    expected += (s.timestamp >= 1.0 - 1e-12 && s.timestamp <= 3.0 + 1e-12) ? 1 : 0;
  }
  EXPECT_EQ(fused.size(), expected);
  for (const auto & s : fused) {
    EXPECT_GE(s.timestamp, 1.0 - 1e-12);
    EXPECT_LE(s.timestamp, 3.0 + 1e-12);
    EXPECT_GE(s.speed, 0.0);
  }
}

TEST(Fusion, DegradedFixesAreIgnored)
{
  std::vector<GnssSample> gnss;
  std::vector<ImuSample> imu;
  for (int i = 0; i <= 72; ++i) {
    const double t = i / 18.0;
    GnssSample g{t, t, 0.0};
    if (t > 2.0 && t < 3.0) {
      g.y = 1.5;
      g.quality = GnssQuality::Degraded;
    }
    gnss.push_back(g);
  }
  for (int i = 0; i <= 360; ++i) {
    imu.push_back(ImuSample{i / 90.0, 0.0, 0.0});
  }
  const auto fused = fuse_gnss_imu(gnss, imu);
  for (const auto & s : fused) {
    EXPECT_LT(std::abs(s.pose.y), 0.2) << "t=" << s.timestamp;
  }
}

TEST(Fusion, DisjointStreamsAreUsageError)
{
  const std::vector<GnssSample> gnss{{0.0, 0.0, 0.0}, {1.0, 1.0, 0.0}};
  const std::vector<ImuSample> imu{{2.0, 0.0, 0.0}, {3.0, 0.0, 0.0}};
  EXPECT_THROW(fuse_gnss_imu(gnss, imu), UsageError);
  EXPECT_THROW(fuse_gnss_imu({}, imu), UsageError);
}

}  // namespace
}  // namespace vruref
