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

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

namespace vruref
{
namespace
{

SensorMount mount_at(double x, double y, double yaw, int id = 0)
{
  SensorMount m;
  m.sensor_id = id;
  m.pose_in_ego = Pose{x, y, yaw, Frame::ego()};
  return m;
}

RadarDetection detection(double range, double azimuth, int id = 0)
{
  RadarDetection d;
  d.range = range;
  d.azimuth = azimuth;
  d.sensor_id = id;
  return d;
}

TEST(PolarToEgo, IdentityMount)
{
  const Point2 p = polar_to_ego(detection(5.0, 0.0), mount_at(0.0, 0.0, 0.0));
  EXPECT_NEAR(p.x(), 5.0, 1e-12);
  EXPECT_NEAR(p.y(), 0.0, 1e-12);
}

TEST(PolarToEgo, QuarterTurnMount)
{
  const Point2 p = polar_to_ego(detection(2.0, 0.0), mount_at(1.0, 0.0, kPi / 2.0));
  EXPECT_NEAR(p.x(), 1.0, 1e-12);
  EXPECT_NEAR(p.y(), 2.0, 1e-12);
}

TEST(PolarToEgo, SensorIdMismatchIsUsageError)
{
  EXPECT_THROW(polar_to_ego(detection(1.0, 0.0, 3), mount_at(0.0, 0.0, 0.0, 1)), UsageError);
}

TEST(PolarToEgo, RandomRoundTrip)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> pos(-5.0, 5.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::uniform_real_distribution<double> rng_range(0.1, 80.0);
  std::uniform_real_distribution<double> az(-kPi / 2.0 + 1e-3, kPi / 2.0 - 1e-3);
  for (int i = 0; i < 1000; ++i) {
    const SensorMount m = mount_at(pos(rng), pos(rng), ang(rng));
    const RadarDetection d = detection(rng_range(rng), az(rng));
    const Point2 p = polar_to_ego(d, m);
    // Independent oracle: rotate and translate by hand.
    const double c = std::cos(m.pose_in_ego.yaw);
    const double s = std::sin(m.pose_in_ego.yaw);
    const double lx = d.range * std::cos(d.azimuth);
    const double ly = d.range * std::sin(d.azimuth);
    EXPECT_NEAR(p.x(), m.pose_in_ego.x + c * lx - s * ly, 1e-9);
    EXPECT_NEAR(p.y(), m.pose_in_ego.y + s * lx + c * ly, 1e-9);

    const Polar back = ego_to_polar(p, m);
    EXPECT_NEAR(back.range, d.range, 1e-9);
    EXPECT_NEAR(back.azimuth, d.azimuth, 1e-9);
    const Point2 again = polar_to_ego(detection(back.range, back.azimuth), m);
    EXPECT_LT((again - p).norm(), 1e-9);
  }
}

TEST(EgoToGlobal, IdentityPose)
{
  const Pose ego{0.0, 0.0, 0.0, Frame::global()};
  const Point2 p = ego_to_global({3.0, -4.0}, ego);
  EXPECT_NEAR(p.x(), 3.0, 1e-12);
  EXPECT_NEAR(p.y(), -4.0, 1e-12);
}

TEST(EgoToGlobal, HalfTurn)
{
  const Pose ego{10.0, 0.0, kPi, Frame::global()};
  const Point2 p = ego_to_global({1.0, 0.0}, ego);
  EXPECT_NEAR(p.x(), 9.0, 1e-12);
  EXPECT_NEAR(p.y(), 0.0, 1e-12);
}

TEST(EgoToGlobal, RoundTripAndRigidity)
{
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(-50.0, 50.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Pose ego{pos(rng), pos(rng), ang(rng), Frame::global()};
    const Point2 a{pos(rng), pos(rng)};
    const Point2 b{pos(rng), pos(rng)};
    const Point2 ga = ego_to_global(a, ego);
    const Point2 gb = ego_to_global(b, ego);
    EXPECT_LT((global_to_ego(ga, ego) - a).norm(), 1e-9);
    EXPECT_NEAR((ga - gb).norm(), (a - b).norm(), 1e-9);
  }
}

TEST(PolarToEgo, PreservesDistances)
{
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> r(0.5, 60.0);
  std::uniform_real_distribution<double> az(-1.2, 1.2);
  const SensorMount m = mount_at(3.6, 0.7, 0.25);
  for (int i = 0; i < 500; ++i) {
    const RadarDetection d1 = detection(r(rng), az(rng));
    const RadarDetection d2 = detection(r(rng), az(rng));
    const Point2 local1{d1.range * std::cos(d1.azimuth), d1.range * std::sin(d1.azimuth)};
    const Point2 local2{d2.range * std::cos(d2.azimuth), d2.range * std::sin(d2.azimuth)};
    EXPECT_NEAR(
      (polar_to_ego(d1, m) - polar_to_ego(d2, m)).norm(), (local1 - local2).norm(), 1e-9);
  }
}

TEST(SensorPosition, ComposesMountAndEgo)
{
  const SensorMount m = mount_at(2.0, 1.0, 0.3);
  const Pose ego{5.0, -2.0, kPi / 2.0, Frame::global()};
  const Point2 p = sensor_position_global(m, ego);
  EXPECT_NEAR(p.x(), 5.0 - 1.0, 1e-12);
  EXPECT_NEAR(p.y(), -2.0 + 2.0, 1e-12);
}

TEST(WrapAngle, Examples)
{
  EXPECT_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(3.0 * kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(-kPi), kPi, 1e-12);
  EXPECT_NEAR(wrap_angle(kPi), kPi, 1e-12);
}

TEST(WrapAngle, NonFiniteIsUsageError)
{
  EXPECT_THROW(wrap_angle(std::numeric_limits<double>::quiet_NaN()), UsageError);
  EXPECT_THROW(wrap_angle(std::numeric_limits<double>::infinity()), UsageError);
}

TEST(WrapAngle, ModularAndIdempotent)
{
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> a(-1000.0, 1000.0);
  for (int i = 0; i < 10000; ++i) {
    const double x = a(rng);
    const double w = wrap_angle(x);
    EXPECT_GT(w, -kPi);
    EXPECT_LE(w, kPi);
    const double turns = (w - x) / (2.0 * kPi);
    EXPECT_NEAR(turns, std::round(turns), 1e-9);
    EXPECT_EQ(wrap_angle(w), w);
  }
}

TEST(FoldAxisAngle, Range)
{
  EXPECT_NEAR(fold_axis_angle(kPi), 0.0, 1e-12);
  EXPECT_NEAR(fold_axis_angle(-kPi / 2.0), kPi / 2.0, 1e-12);
  EXPECT_NEAR(fold_axis_angle(3.0 * kPi / 4.0), -kPi / 4.0, 1e-12);
}

TEST(Validate, RejectsBadPoseAndMount)
{
  EXPECT_THROW(validate(Pose{0.0, 0.0, 4.0, Frame::global()}), UsageError);
  EXPECT_THROW(
    validate(Pose{std::numeric_limits<double>::infinity(), 0.0, 0.0, Frame::global()}), UsageError);
  SensorMount m = mount_at(0.0, 0.0, 0.0);
  m.fov_azimuth = 0.0;
  EXPECT_THROW(validate(m), UsageError);
  m.fov_azimuth = 1.0;
  m.max_range = -1.0;
  EXPECT_THROW(validate(m), UsageError);
  m.max_range = 10.0;
  EXPECT_NO_THROW(validate(m));
}

}  // namespace
}  // namespace vruref
