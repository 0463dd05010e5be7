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

#include "vruref/spline.hpp"
#include "vruref/trajectory.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

namespace vruref
{
namespace
{

// Brute-force centered mean with an explicit half-width per index.
std::vector<double> oracle_average(const std::vector<double> & v, int window, bool symmetric)
{
  const int n = static_cast<int>(v.size());
  const int half = window / 2;
  std::vector<double> out(v.size());
  for (int i = 0; i < n; ++i) {
    int lo = i - half;
    int hi = i + half;
    if (symmetric) {
      const int h = std::min({half, i, n - 1 - i});
      lo = i - h;
      hi = i + h;
    }
    lo = std::max(lo, 0);
    hi = std::min(hi, n - 1);
    double sum = 0.0;
    for (int k = lo; k <= hi; ++k) {
      sum += v[static_cast<std::size_t>(k)];
    }
    out[static_cast<std::size_t>(i)] = sum / (hi - lo + 1);
  }
  return out;
}

TEST(MovingAverage, ConstantSignal)
{
  const std::vector<double> v(20, 4.25);
  for (double x : moving_average(v, 9)) {
    EXPECT_DOUBLE_EQ(x, 4.25);
  }
}

TEST(MovingAverage, RampPreservedEverywhereWithSymmetricEdges)
{
  std::vector<double> v;
  for (int i = 0; i < 30; ++i) {
    v.push_back(0.5 * i - 3.0);
  }
  const auto out = moving_average(v, 9);
  ASSERT_EQ(out.size(), v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(out[i], v[i], 1e-12);
  }
}

TEST(MovingAverage, AlternatingSignalSymmetricEdges)
{
  const std::vector<double> v{0, 3, 0, 3, 0};
  const auto out = moving_average(v, 3, EdgeMode::Symmetric);
  const std::vector<double> expected{0, 1, 2, 1, 0};
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(out[i], expected[i], 1e-12);
  }
}

TEST(MovingAverage, AlternatingSignalTruncatedEdges)
{
  const std::vector<double> v{0, 3, 0, 3, 0};
  const auto out = moving_average(v, 3, EdgeMode::Truncate);
  const std::vector<double> expected{1.5, 1, 2, 1, 1.5};
  for (std::size_t i = 0; i < v.size(); ++i) {
    EXPECT_NEAR(out[i], expected[i], 1e-12);
  }
}

TEST(MovingAverage, MatchesBruteForceOnRandomInput)
{
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g(0.0, 3.0);
  for (int window : {1, 3, 5, 9, 15}) {
    std::vector<double> v(57);
    for (auto & x : v) {
      x = g(rng);
    }
    for (bool sym : {true, false}) {
      const auto out = moving_average(v, window, sym ? EdgeMode::Symmetric : EdgeMode::Truncate);
      const auto ref = oracle_average(v, window, sym);
      for (std::size_t i = 0; i < v.size(); ++i) {
        EXPECT_NEAR(out[i], ref[i], 1e-9);
      }
    }
  }
}

TEST(MovingAverage, EmptyAndInvalidWindow)
{
  EXPECT_TRUE(moving_average(std::vector<double>{}, 9).empty());
  const std::vector<double> v{1, 2, 3};
  EXPECT_THROW(moving_average(v, 4), UsageError);
  EXPECT_THROW(moving_average(v, 0), UsageError);
}

TEST(MovingAverage, WindowDurationsMatchDeviceRates)
{
  constexpr double gnss_rate = 18.0;
  constexpr double imu_rate = 90.0;
  EXPECT_NEAR(kDefaultSmoothingWindow / gnss_rate, 0.5, 0.05);
  EXPECT_NEAR(kDefaultSmoothingWindow / imu_rate, 0.1, 0.01);
}

TEST(Spline, PassesThroughKnots)
{
  std::mt19937_64 rng(22);
  std::uniform_real_distribution<double> dt(0.01, 0.2);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  std::vector<double> t{0.0};
  std::vector<double> y{val(rng)};
  for (int i = 0; i < 100; ++i) {
    t.push_back(t.back() + dt(rng));
    y.push_back(val(rng));
  }
  const NaturalCubicSpline s(t, y);
  for (std::size_t i = 0; i < t.size(); ++i) {
    EXPECT_NEAR(s.value(t[i]), y[i], 1e-9);
  }
  EXPECT_NEAR(s.second_derivative(t.front()), 0.0, 1e-9);
  EXPECT_NEAR(s.second_derivative(t.back()), 0.0, 1e-9);
}

TEST(Spline, ContinuousFirstAndSecondDerivative)
{
  const std::vector<double> t{0.0, 0.3, 0.7, 1.2, 2.0};
  const std::vector<double> y{1.0, -1.0, 2.0, 0.5, 0.0};
  const NaturalCubicSpline s(t, y);
  constexpr double h = 1e-6;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    // First-order Taylor extrapolation of each side to the knot.
    const double left = s.derivative(t[i] - h) + h * s.second_derivative(t[i] - h);
    const double right = s.derivative(t[i] + h) - h * s.second_derivative(t[i] + h);
    EXPECT_NEAR(left, right, 1e-8);
    EXPECT_NEAR(s.second_derivative(t[i] - 1e-10), s.second_derivative(t[i] + 1e-10), 1e-6);
  }
}

TEST(Spline, RejectsBadKnots)
{
  const std::vector<double> one{0.0};
  EXPECT_THROW(NaturalCubicSpline(one, one), UsageError);
  const std::vector<double> t{0.0, 1.0, 1.0};
  const std::vector<double> y{0.0, 1.0, 2.0};
  EXPECT_THROW(NaturalCubicSpline(t, y), UsageError);
}

Trajectory line_trajectory(double speed, double heading, int n, double dt)
{
  std::vector<double> times;
  std::vector<Point2> pos;
  for (int i = 0; i < n; ++i) {
    const double t = i * dt;
    times.push_back(t);
    pos.emplace_back(speed * t * std::cos(heading), speed * t * std::sin(heading));
  }
  return Trajectory(times, pos);
}

TEST(Trajectory, KnotTimesReturnKnotPositions)
{
  std::vector<double> times;
  std::vector<Point2> pos;
  for (int i = 0; i < 40; ++i) {
    times.push_back(0.1 * i);
    pos.emplace_back(std::sin(0.3 * i), std::cos(0.2 * i));
  }
  const Trajectory traj(times, pos);
  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto s = traj.state_at(times[i]);
    EXPECT_NEAR(s.pose.x, pos[i].x(), 1e-9);
    EXPECT_NEAR(s.pose.y, pos[i].y(), 1e-9);
  }
}

TEST(Trajectory, UniformStraightLine)
{
  const double heading = 0.7;
  const Trajectory traj = line_trajectory(2.0, heading, 50, 1.0 / 18.0);
  for (double t = 0.0; t <= traj.end_time(); t += 0.013) {
    const auto s = traj.state_at(t);
    EXPECT_NEAR(s.speed, 2.0, 1e-6);
    EXPECT_NEAR(s.pose.yaw, heading, 1e-6);
    EXPECT_NEAR(s.yaw_rate, 0.0, 1e-6);
  }
}

TEST(Trajectory, DenseCircleBetweenKnots)
{
  constexpr double radius = 5.0;
  constexpr double omega = 0.4;
  std::vector<double> times;
  std::vector<Point2> pos;
  for (int i = 0; i <= 360; ++i) {
    const double t = i / 18.0;
    times.push_back(t);
    pos.emplace_back(radius * std::cos(omega * t), radius * std::sin(omega * t));
  }
  const Trajectory traj(times, pos);
  for (std::size_t i = 5; i + 5 < times.size(); ++i) {
    const double t = 0.5 * (times[i] + times[i + 1]);
    const auto s = traj.state_at(t);
    const Point2 truth{radius * std::cos(omega * t), radius * std::sin(omega * t)};
    EXPECT_LT((s.pose.position() - truth).norm(), 1e-3);
    EXPECT_NEAR(s.speed, radius * omega, 1e-3);
    EXPECT_NEAR(s.yaw_rate, omega, 1e-3);
    EXPECT_NEAR(wrap_angle(s.pose.yaw - (omega * t + kPi / 2.0)), 0.0, 1e-3);
  }
}

TEST(Trajectory, OutsideSupportIsOutOfRange)
{
  const Trajectory traj = line_trajectory(1.0, 0.0, 10, 0.1);
  EXPECT_THROW(traj.state_at(-0.01), OutOfRangeError);
  EXPECT_THROW(traj.state_at(traj.end_time() + 0.01), OutOfRangeError);
  EXPECT_NO_THROW(traj.state_at(traj.end_time()));
}

TEST(Trajectory, YawHeldAtStandstill)
{
  // Decelerates along +y from 1 m/s to rest at t = 2 s, then stands for 2 s.
  std::vector<double> times;
  std::vector<Point2> pos;
  for (int i = 0; i <= 72; ++i) {
    const double t = i / 18.0;
    const double tc = std::min(t, 2.0);
    times.push_back(t);
    pos.emplace_back(0.0, tc - 0.25 * tc * tc);
  }
  const Trajectory traj(times, pos);
  for (double t = 2.6; t <= 4.0; t += 0.05) {
    const auto s = traj.state_at(t);
    EXPECT_LT(s.speed, kStandstillSpeed);
    EXPECT_FALSE(std::isnan(s.pose.yaw));
    EXPECT_NEAR(s.pose.yaw, kPi / 2.0, 0.05);
  }
}

TEST(Trajectory, YawNeverNanWhenAlwaysStationary)
{
  std::vector<double> times{0.0, 0.1, 0.2, 0.3};
  std::vector<Point2> pos(4, Point2{1.0, 1.0});
  const Trajectory traj(times, pos);
  for (double t : times) {
    EXPECT_FALSE(std::isnan(traj.state_at(t).pose.yaw));
  }
}

TEST(Trajectory, YawRateFromImuChannel)
{
  std::vector<ImuSample> imu;
  for (int i = 0; i <= 100; ++i) {
    imu.push_back(ImuSample{i * 0.05, 0.1 * i, 0.0});
  }
  std::vector<double> times;
  std::vector<Point2> pos;
  for (int i = 0; i <= 90; ++i) {
    times.push_back(i / 18.0);
    pos.emplace_back(i / 18.0, 0.0);
  }
  const Trajectory traj(times, pos, imu);
  // Linear interpolation of the IMU channel at t = 1.0125 (between samples 20 and 21).
  EXPECT_NEAR(traj.state_at(1.0125).yaw_rate, 2.025, 1e-9);
}

TEST(Smooth, GnssKeepsTimestampsAndQuality)
{
  std::vector<GnssSample> g;
  for (int i = 0; i < 20; ++i) {
    g.push_back(GnssSample{i / 18.0, static_cast<double>(i % 2), 1.0, GnssQuality::FixFloat});
  }
  const auto s = smooth(std::span<const GnssSample>(g));
  ASSERT_EQ(s.size(), g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    EXPECT_EQ(s[i].timestamp, g[i].timestamp);
    EXPECT_EQ(s[i].quality, g[i].quality);
    EXPECT_NEAR(s[i].y, 1.0, 1e-12);
  }
  EXPECT_NEAR(s[10].x, 4.0 / 9.0, 1e-12);
}

}  // namespace
}  // namespace vruref
