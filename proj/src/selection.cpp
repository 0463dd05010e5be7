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

#include <algorithm>
#include <cmath>

namespace vruref
{

using namespace selection;

double OrientedEllipse::normalized_radius_sq(const Point2 & p) const
{
  const Point2 local = rotation(orientation).transpose() * (p - center);
  const double a = 0.5 * ax_along;
  const double b = 0.5 * ax_across;
  return (local.x() / a) * (local.x() / a) + (local.y() / b) * (local.y() / b);
}

OrientedEllipse pedestrian_ellipse(const TrajectoryState & state)
{
  const double v = state.speed;
  const double w = state.yaw_rate;
  OrientedEllipse e;
  e.center = state.pose.position();
  e.orientation = state.pose.yaw;
  if (v >= kMovingThreshold) {
    e.ax_along = kPedestrianLength + std::min(std::abs(v) * kSpeedGain, kMaxExtra);
    e.ax_across = kPedestrianWidth + std::min(std::abs(w) * kYawRateGain, kMaxExtra);
  } else {
    e.ax_along = kPedestrianLength;
    e.ax_across = kStandingDiameter;
  }
  return e;
}

OrientedRectangle cyclist_rectangle(const TrajectoryState & state, double last_moving_yaw)
{
  OrientedRectangle r;
  r.center = state.pose.position();
  r.length = kCyclistLength;
  r.width = kCyclistWidth + std::min(std::abs(state.yaw_rate) * kYawRateGain, kMaxExtra);
  r.orientation = state.speed >= kMovingThreshold ? state.pose.yaw : last_moving_yaw;
  return r;
}

bool contains(const OrientedEllipse & shape, const Point2 & p)
{
  return shape.normalized_radius_sq(p) <= 1.0;
}

bool contains(const OrientedRectangle & shape, const Point2 & p)
{
  const Point2 local = rotation(shape.orientation).transpose() * (p - shape.center);
  return std::abs(local.x()) <= 0.5 * shape.length && std::abs(local.y()) <= 0.5 * shape.width;
}

bool contains(const SelectionShape & shape, const Point2 & p)
{
  return std::visit([&](const auto & s) { return contains(s, p); }, shape);
}

SelectionShape scaled(const SelectionShape & shape, double factor)
{
  if (const auto * e = std::get_if<OrientedEllipse>(&shape)) {
    OrientedEllipse out = *e;
    out.ax_along *= factor;
    out.ax_across *= factor;
    return out;
  }
  OrientedRectangle out = std::get<OrientedRectangle>(shape);
  out.length *= factor;
  out.width *= factor;
  return out;
}

OrientedEllipse fit_bounding_ellipse(
  std::span<const Point2> points, const Point2 & center, double yaw)
{
  if (points.empty()) {
    throw UsageError("fit_bounding_ellipse: no detections in this scan");
  }
  const Matrix2 to_object = rotation(yaw).transpose();

  double max_u = 0.0;
  double max_v = 0.0;
  for (const auto & p : points) {
    const Point2 q = to_object * (p - center);
    max_u = std::max(max_u, std::abs(q.x()));
    max_v = std::max(max_v, std::abs(q.y()));
  }

  // Half-axes (s u_ref, s v_ref), with the floor applied before scaling so a
  // vanishing extent cannot inflate s. s^2 is the largest normalized radius at s = 1.
  const double u_ref = std::max(max_u, 0.5 * kBoundingFloor);
  const double v_ref = std::max(max_v, 0.5 * kBoundingFloor);
  double s_sq = 1.0;
  for (const auto & p : points) {
    const Point2 q = to_object * (p - center);
    s_sq = std::max(s_sq, (q.x() / u_ref) * (q.x() / u_ref) + (q.y() / v_ref) * (q.y() / v_ref));
  }
  const double s = std::sqrt(s_sq);

  OrientedEllipse e;
  e.center = center;
  e.orientation = yaw;
  e.ax_along = 2.0 * s * u_ref;
  e.ax_across = 2.0 * s * v_ref;
  return e;
}

}  // namespace vruref
