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

#ifndef VRUREF__SELECTION_HPP_
#define VRUREF__SELECTION_HPP_

#include "vruref/core.hpp"
#include "vruref/trajectory.hpp"

#include <span>
#include <variant>

namespace vruref
{

/// Ellipse with full axis lengths. `ax_along` lies in the `orientation`
/// direction (the movement direction for selection shapes); it is not
/// required to be the longer axis.
struct OrientedEllipse
{
  Point2 center{0.0, 0.0};
  double ax_along{1.0};
  double ax_across{1.0};
  double orientation{0.0};

  /// (u / a)^2 + (v / b)^2 for half-axes a, b. Inside iff <= 1.
  double normalized_radius_sq(const Point2 & p) const;
};

/// Rectangle with full side lengths; `length` lies in the `orientation` direction.
struct OrientedRectangle
{
  Point2 center{0.0, 0.0};
  double length{1.0};
  double width{1.0};
  double orientation{0.0};
};

using SelectionShape = std::variant<OrientedEllipse, OrientedRectangle>;

namespace selection
{
// Fixed minimum dimensions and adaptive terms of the selection areas.
constexpr double kPedestrianLength = 1.5;       // m
constexpr double kPedestrianWidth = 1.2;        // m
constexpr double kStandingDiameter = 1.5;       // m
constexpr double kCyclistLength = 2.5;          // m
constexpr double kCyclistWidth = 1.2;           // m
constexpr double kSpeedGain = 1.0;              // s
constexpr double kYawRateGain = 5.0;            // m s / rad
constexpr double kMaxExtra = 1.0;               // m
constexpr double kMovingThreshold = 0.05;       // m/s
constexpr double kBoundingFloor = 0.1;          // m
}  // namespace selection

OrientedEllipse pedestrian_ellipse(const TrajectoryState & state);

/// Below the moving threshold the cyclist keeps `last_moving_yaw`.
OrientedRectangle cyclist_rectangle(const TrajectoryState & state, double last_moving_yaw);

bool contains(const OrientedEllipse & shape, const Point2 & p);
bool contains(const OrientedRectangle & shape, const Point2 & p);
bool contains(const SelectionShape & shape, const Point2 & p);

/// Uniformly scales the extents of a shape about its center.
SelectionShape scaled(const SelectionShape & shape, double factor);

/// Smallest symmetric ellipse with the given center and orientation that
/// covers every point, axes floored at 0.1 m. Throws UsageError when empty.
OrientedEllipse fit_bounding_ellipse(
  std::span<const Point2> points, const Point2 & center, double yaw);

}  // namespace vruref

#endif  // VRUREF__SELECTION_HPP_
