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

#include "vruref/selection.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace vruref
{
namespace
{

TrajectoryState state(double speed, double yaw_rate, double yaw = 0.0, Point2 at = {0.0, 0.0})
{
  TrajectoryState s;
  s.pose = Pose{at.x(), at.y(), yaw, Frame::global()};
  s.speed = speed;
  s.yaw_rate = yaw_rate;
  return s;
}

// Direct transcription of the printed shape formulas.
double formula_ax_along(double v) { return v >= 0.05 ? 1.5 + std::min(std::abs(v) * 1.0, 1.0) : 1.5; }
double formula_ax_across(double v, double w)
{
  return v >= 0.05 ? 1.2 + std::min(std::abs(w) * 5.0, 1.0) : 1.5;
}
double formula_width(double w) { return 1.2 + std::min(std::abs(w) * 5.0, 1.0); }

TEST(PedestrianEllipse, StandingIsCircle)
{
  const auto e = pedestrian_ellipse(state(0.0, 0.3));
  EXPECT_DOUBLE_EQ(e.ax_along, 1.5);
  EXPECT_DOUBLE_EQ(e.ax_across, 1.5);
}

TEST(PedestrianEllipse, SaturatedSpeed)
{
  const auto e = pedestrian_ellipse(state(2.0, 0.0));
  EXPECT_DOUBLE_EQ(e.ax_along, 2.5);
  EXPECT_DOUBLE_EQ(e.ax_across, 1.2);
}

TEST(PedestrianEllipse, DirectSubstitution)
{
  const auto e = pedestrian_ellipse(state(0.3, 0.1));
  EXPECT_DOUBLE_EQ(e.ax_along, 1.8);
  EXPECT_DOUBLE_EQ(e.ax_across, 1.7);
}

TEST(PedestrianEllipse, CenterAndOrientationFollowState)
{
  const auto e = pedestrian_ellipse(state(1.0, 0.0, 0.8, {3.0, -2.0}));
  EXPECT_EQ(e.center, Point2(3.0, -2.0));
  EXPECT_EQ(e.orientation, 0.8);
}

TEST(PedestrianEllipse, BranchBoundaryIsExact)
{
  for (double w : {0.0, 0.01, 0.1, 0.2, 0.3}) {
    const double below = std::nextafter(0.05, 0.0);
    const auto lo = pedestrian_ellipse(state(below, w));
    EXPECT_EQ(lo.ax_along, formula_ax_along(below));
    EXPECT_EQ(lo.ax_across, formula_ax_across(below, w));
    EXPECT_EQ(lo.ax_along, 1.5);
    EXPECT_EQ(lo.ax_across, 1.5);

    const auto at = pedestrian_ellipse(state(0.05, w));
    EXPECT_EQ(at.ax_along, formula_ax_along(0.05));
    EXPECT_EQ(at.ax_across, formula_ax_across(0.05, w));
  }
  // The minor axis jumps at the boundary: 1.5 below, 1.2 + term at it.
  EXPECT_EQ(pedestrian_ellipse(state(0.05, 0.0)).ax_across, 1.2);
}

TEST(PedestrianEllipse, SaturationIsExact)
{
  for (double v : {1.0, 1.5, 4.0}) {
    for (double w : {0.2, -0.2, 0.5, -3.0}) {
      const auto e = pedestrian_ellipse(state(v, w));
      EXPECT_EQ(e.ax_along, 2.5);
      EXPECT_EQ(e.ax_across, 2.2);
      EXPECT_EQ(e.ax_along, formula_ax_along(v));
      EXPECT_EQ(e.ax_across, formula_ax_across(v, w));
    }
  }
}

TEST(PedestrianEllipse, MonotoneAndMatchesFormula)
{
  double prev_along = 0.0;
  for (double v = 0.05; v <= 2.0; v += 0.01) {
    const auto e = pedestrian_ellipse(state(v, 0.07));
    EXPECT_EQ(e.ax_along, formula_ax_along(v));
    EXPECT_GE(e.ax_along, prev_along);
    prev_along = e.ax_along;
  }
  double prev_across = 0.0;
  for (double w = 0.0; w <= 0.5; w += 0.005) {
    const auto e = pedestrian_ellipse(state(1.0, -w));
    EXPECT_EQ(e.ax_across, formula_ax_across(1.0, -w));
    EXPECT_GE(e.ax_across, prev_across);
    prev_across = e.ax_across;
  }
}

TEST(CyclistRectangle, ZeroYawRate)
{
  const auto r = cyclist_rectangle(state(3.0, 0.0), 0.0);
  EXPECT_DOUBLE_EQ(r.length, 2.5);
  EXPECT_DOUBLE_EQ(r.width, 1.2);
}

TEST(CyclistRectangle, SaturatedWidth)
{
  const auto r = cyclist_rectangle(state(3.0, 0.5), 0.0);
  EXPECT_DOUBLE_EQ(r.width, 2.2);
}

TEST(CyclistRectangle, HoldsOrientationAtStandstill)
{
  const auto r = cyclist_rectangle(state(0.01, 0.0, -2.0), 1.0);
  EXPECT_EQ(r.orientation, 1.0);
  const auto moving = cyclist_rectangle(state(0.05, 0.0, -2.0), 1.0);
  EXPECT_EQ(moving.orientation, -2.0);
}

TEST(CyclistRectangle, WidthExactAndMonotone)
{
  double prev = 0.0;
  for (double w = 0.0; w <= 0.6; w += 0.01) {
    const auto r = cyclist_rectangle(state(2.0, w), 0.0);
    EXPECT_EQ(r.width, formula_width(w));
    EXPECT_EQ(r.length, 2.5);
    EXPECT_GE(r.width, prev);
    prev = r.width;
  }
  EXPECT_EQ(cyclist_rectangle(state(2.0, 0.2), 0.0).width, 2.2);
  EXPECT_EQ(cyclist_rectangle(state(2.0, -7.0), 0.0).width, 2.2);
}

TEST(Contains, CenterIsInside)
{
  const OrientedEllipse e{{1.0, 2.0}, 2.5, 1.2, 0.4};
  const OrientedRectangle r{{1.0, 2.0}, 2.5, 1.2, 0.4};
  EXPECT_TRUE(contains(e, e.center));
  EXPECT_TRUE(contains(r, r.center));
}

TEST(Contains, HalfExtentBoundary)
{
  const OrientedEllipse e{{0.0, 0.0}, 2.5, 1.2, 0.0};
  EXPECT_FALSE(contains(e, {1.26, 0.0}));
  EXPECT_TRUE(contains(e, {1.24, 0.0}));
  EXPECT_TRUE(contains(e, {0.0, 0.6}));
  EXPECT_FALSE(contains(e, {0.0, 0.61}));
  const OrientedRectangle r{{0.0, 0.0}, 2.5, 1.2, 0.0};
  EXPECT_TRUE(contains(r, {1.25, 0.6}));
  EXPECT_FALSE(contains(r, {1.26, 0.0}));
}

// Counts grid cells (1 cm) whose centre is inside, using an independent
// formulation: distance-sum for the ellipse, edge half-planes for the rectangle.
TEST(Contains, AgreesWithRasterization)
{
  const double yaw = 0.6;
  const Point2 c{0.3, -0.2};
  const OrientedEllipse e{c, 2.4, 1.4, yaw};
  const OrientedRectangle r{c, 2.5, 1.2, yaw};

  const double a = 1.2;
  const double b = 0.7;
  const double f = std::sqrt(a * a - b * b);
  const Point2 axis{std::cos(yaw), std::sin(yaw)};
  const Point2 normal{-std::sin(yaw), std::cos(yaw)};
  const Point2 f1 = c + f * axis;
  const Point2 f2 = c - f * axis;

  int disagreements = 0;
  int inside_e = 0;
  int inside_r = 0;
  for (int i = -200; i <= 200; ++i) {
    for (int j = -200; j <= 200; ++j) {
      const Point2 p = c + Point2{(i + 0.5) * 0.01, (j + 0.5) * 0.01};
      const double focal = (p - f1).norm() + (p - f2).norm();
      if (std::abs(focal - 2.0 * a) > 1e-9) {
        const bool oracle_e = focal < 2.0 * a;
        disagreements += oracle_e != contains(e, p);
        inside_e += oracle_e;
      }
      const Point2 d = p - c;
      const double along = d.dot(axis);
      const double across = d.dot(normal);
      if (std::abs(std::abs(along) - 1.25) > 1e-9 && std::abs(std::abs(across) - 0.6) > 1e-9) {
        const bool oracle_r = std::abs(along) < 1.25 && std::abs(across) < 0.6;
        disagreements += oracle_r != contains(r, p);
        inside_r += oracle_r;
      }
    }
  }
  EXPECT_EQ(disagreements, 0);
  // Cell counts approximate the areas.
  EXPECT_NEAR(inside_e * 1e-4, kPi * a * b, 0.01);
  EXPECT_NEAR(inside_r * 1e-4, 2.5 * 1.2, 0.01);
}

TEST(Contains, InvariantUnderRigidMotion)
{
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  const OrientedEllipse e{{0.5, 0.5}, 2.0, 1.3, 0.3};
  const OrientedRectangle r{{0.5, 0.5}, 2.5, 1.7, 0.3};
  for (int i = 0; i < 2000; ++i) {
    const Point2 p{u(rng), u(rng)};
    const double rot = ang(rng);
    const Point2 shift{u(rng), u(rng)};
    const Matrix2 R = rotation(rot);
    OrientedEllipse e2 = e;
    e2.center = R * e.center + shift;
    e2.orientation = e.orientation + rot;
    OrientedRectangle r2 = r;
    r2.center = R * r.center + shift;
    r2.orientation = r.orientation + rot;
    const Point2 q = R * p + shift;
    if (std::abs(e.normalized_radius_sq(p) - 1.0) > 1e-9) {
      EXPECT_EQ(contains(e, p), contains(e2, q));
    }
    EXPECT_EQ(contains(r, p), contains(r2, q));
  }
}

TEST(Scaled, ScalesExtentsOnly)
{
  const SelectionShape s = OrientedRectangle{{1.0, 1.0}, 2.5, 1.2, 0.2};
  const auto half = std::get<OrientedRectangle>(scaled(s, 0.5));
  EXPECT_DOUBLE_EQ(half.length, 1.25);
  EXPECT_DOUBLE_EQ(half.width, 0.6);
  EXPECT_EQ(half.center, Point2(1.0, 1.0));
  EXPECT_EQ(half.orientation, 0.2);
}

TEST(BoundingEllipse, SinglePointAtCenterGivesFloor)
{
  const std::vector<Point2> pts{{2.0, 3.0}};
  const auto e = fit_bounding_ellipse(pts, {2.0, 3.0}, 0.5);
  EXPECT_DOUBLE_EQ(e.ax_along, 0.1);
  EXPECT_DOUBLE_EQ(e.ax_across, 0.1);
  EXPECT_EQ(e.orientation, 0.5);
}

TEST(BoundingEllipse, SymmetricPairOnBoundary)
{
  const double yaw = 0.9;
  const Point2 c{1.0, -1.0};
  const Point2 axis{std::cos(yaw), std::sin(yaw)};
  const std::vector<Point2> pts{c + axis, c - axis};
  const auto e = fit_bounding_ellipse(pts, c, yaw);
  EXPECT_NEAR(e.ax_along, 2.0, 1e-12);
  EXPECT_DOUBLE_EQ(e.ax_across, 0.1);
  for (const auto & p : pts) {
    EXPECT_NEAR(e.normalized_radius_sq(p), 1.0, 1e-9);
  }
}

TEST(BoundingEllipse, EmptyIsUsageError)
{
  EXPECT_THROW(fit_bounding_ellipse({}, {0.0, 0.0}, 0.0), UsageError);
}

TEST(BoundingEllipse, RandomCloudsContainedAndMinimal)
{
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> ang(-kPi, kPi);
  std::normal_distribution<double> g(0.0, 0.4);
  std::uniform_int_distribution<int> count(2, 40);
  for (int trial = 0; trial < 500; ++trial) {
    const Point2 c{g(rng) * 10.0, g(rng) * 10.0};
    const double yaw = ang(rng);
    std::vector<Point2> pts(static_cast<std::size_t>(count(rng)));
    for (auto & p : pts) {
      p = c + Point2{g(rng), g(rng)};
    }
    const auto e = fit_bounding_ellipse(pts, c, yaw);
    EXPECT_EQ(e.center, c);
    EXPECT_EQ(e.orientation, yaw);
    for (const auto & p : pts) {
      EXPECT_LE(e.normalized_radius_sq(p), 1.0 + 1e-9);
    }
    if (e.ax_along > 0.1 && e.ax_across > 0.1) {
      for (int axis = 0; axis < 2; ++axis) {
        OrientedEllipse shrunk = e;
        (axis == 0 ? shrunk.ax_along : shrunk.ax_across) *= 0.99;
        const bool excludes = std::any_of(pts.begin(), pts.end(), [&](const Point2 & p) {
          return shrunk.normalized_radius_sq(p) > 1.0;
        });
        EXPECT_TRUE(excludes);
      }
    }
  }
}

}  // namespace
}  // namespace vruref
