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

#include "vruref/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace vruref
{

std::vector<double> moving_average(std::span<const double> values, int window, EdgeMode edges)
{
  if (window < 1 || window % 2 == 0) {
    throw UsageError("moving_average: window must be odd and >= 1");
  }
  const auto n = static_cast<std::ptrdiff_t>(values.size());
  const std::ptrdiff_t half = window / 2;

  // Prefix sums keep this O(n) for long streams.
  std::vector<double> prefix(values.size() + 1, 0.0);
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + values[i];
  }

  std::vector<double> out(values.size());
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    std::ptrdiff_t lo = 0;
    std::ptrdiff_t hi = 0;
    if (edges == EdgeMode::Symmetric) {
      const std::ptrdiff_t h = std::min({half, i, n - 1 - i});
      lo = i - h;
      hi = i + h;
    } else {
      lo = std::max<std::ptrdiff_t>(0, i - half);
      hi = std::min<std::ptrdiff_t>(n - 1, i + half);
    }
    out[i] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
  }
  return out;
}

namespace
{

template <typename T, typename Get>
std::vector<double> channel(std::span<const T> items, Get get)
{
  std::vector<double> out;
  out.reserve(items.size());
  for (const auto & item : items) {
    out.push_back(get(item));
  }
  return out;
}

void require_increasing(std::span<const double> times, const char * what)
{
  for (std::size_t i = 1; i < times.size(); ++i) {
    if (!(times[i] > times[i - 1])) {
      throw UsageError(std::string(what) + ": timestamps must be strictly increasing");
    }
  }
}

double lerp_series(std::span<const double> ts, std::span<const double> vs, double t)
{
  auto it = std::upper_bound(ts.begin(), ts.end(), t);
  if (it == ts.begin()) {
    return vs.front();
  }
  if (it == ts.end()) {
    return vs.back();
  }
  const auto i = static_cast<std::size_t>(it - ts.begin());
  const double w = (t - ts[i - 1]) / (ts[i] - ts[i - 1]);
  return vs[i - 1] + w * (vs[i] - vs[i - 1]);
}

}  // namespace

std::vector<GnssSample> smooth(std::span<const GnssSample> samples, int window)
{
  const auto xs = moving_average(channel(samples, [](const auto & s) { return s.x; }), window);
  const auto ys = moving_average(channel(samples, [](const auto & s) { return s.y; }), window);
  std::vector<GnssSample> out(samples.begin(), samples.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].x = xs[i];
    out[i].y = ys[i];
  }
  return out;
}

std::vector<ImuSample> smooth(std::span<const ImuSample> samples, int window)
{
  const auto rates =
    moving_average(channel(samples, [](const auto & s) { return s.yaw_rate; }), window);
  const auto accels =
    moving_average(channel(samples, [](const auto & s) { return s.accel_forward; }), window);
  std::vector<ImuSample> out(samples.begin(), samples.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].yaw_rate = rates[i];
    out[i].accel_forward = accels[i];
  }
  return out;
}

std::vector<TrajectoryState> smooth(std::span<const TrajectoryState> states, int window)
{
  const auto xs = moving_average(channel(states, [](const auto & s) { return s.pose.x; }), window);
  const auto ys = moving_average(channel(states, [](const auto & s) { return s.pose.y; }), window);
  const auto vs = moving_average(channel(states, [](const auto & s) { return s.speed; }), window);
  const auto ws =
    moving_average(channel(states, [](const auto & s) { return s.yaw_rate; }), window);
  std::vector<TrajectoryState> out(states.begin(), states.end());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i].pose.x = xs[i];
    out[i].pose.y = ys[i];
    out[i].speed = vs[i];
    out[i].yaw_rate = ws[i];
  }
  return out;
}

Trajectory::Trajectory(
  std::vector<double> times, std::span<const Point2> positions,
  std::span<const ImuSample> yaw_rate_source, double standstill_speed)
: times_(std::move(times)), standstill_speed_(standstill_speed)
{
  if (times_.empty()) {
    throw UsageError("trajectory: empty input");
  }
  if (times_.size() != positions.size()) {
    throw UsageError("trajectory: time and position counts differ");
  }
  require_increasing(times_, "trajectory");
  if (times_.size() == 1) {
    // A single fix still defines a (stationary) trajectory at one instant.
    times_.push_back(times_.front() + 1e-9);
  }
  std::vector<double> xs;
  std::vector<double> ys;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const Point2 & p = positions[std::min(i, positions.size() - 1)];
    xs.push_back(p.x());
    ys.push_back(p.y());
  }
  x_ = NaturalCubicSpline(times_, xs);
  y_ = NaturalCubicSpline(times_, ys);

  if (!yaw_rate_source.empty()) {
    rate_times_ = channel(yaw_rate_source, [](const auto & s) { return s.timestamp; });
    rates_ = channel(yaw_rate_source, [](const auto & s) { return s.yaw_rate; });
    require_increasing(rate_times_, "trajectory yaw-rate source");
  }

  // Yaw held at standstill: last moving yaw at or before each knot. Leading
  // standstill knots take the first moving yaw.
  held_yaw_.assign(times_.size(), 0.0);
  std::optional<double> last;
  std::optional<double> first_moving;
  for (std::size_t i = 0; i < times_.size(); ++i) {
    const double dx = x_.derivative(times_[i]);
    const double dy = y_.derivative(times_[i]);
    if (std::hypot(dx, dy) >= standstill_speed_) {
      last = std::atan2(dy, dx);
      if (!first_moving) {
        first_moving = last;
      }
    }
    held_yaw_[i] = last.value_or(std::numeric_limits<double>::quiet_NaN());
  }
  for (auto & yaw : held_yaw_) {
    if (std::isnan(yaw)) {
      yaw = first_moving.value_or(0.0);
    }
  }
}

bool Trajectory::covers(double t) const
{
  constexpr double eps = 1e-9;
  return t >= times_.front() - eps && t <= times_.back() + eps;
}

double Trajectory::last_moving_yaw(double t) const
{
  const double dx = x_.derivative(t);
  const double dy = y_.derivative(t);
  if (std::hypot(dx, dy) >= standstill_speed_) {
    return wrap_angle(std::atan2(dy, dx));
  }
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  const std::size_t k = it == times_.begin() ? 0 : static_cast<std::size_t>(it - times_.begin()) - 1;
  return wrap_angle(held_yaw_[k]);
}

TrajectoryState Trajectory::state_at(double t) const
{
  if (!covers(t)) {
    throw OutOfRangeError(
      "trajectory: t = " + std::to_string(t) + " outside [" + std::to_string(start_time()) +
      ", " + std::to_string(end_time()) + "]");
  }
  t = std::clamp(t, times_.front(), times_.back());

  TrajectoryState s;
  s.timestamp = t;
  s.pose = Pose{x_.value(t), y_.value(t), 0.0, Frame::global()};
  const double dx = x_.derivative(t);
  const double dy = y_.derivative(t);
  s.speed = std::hypot(dx, dy);
  s.pose.yaw = last_moving_yaw(t);

  if (!rates_.empty() && t >= rate_times_.front() && t <= rate_times_.back()) {
    s.yaw_rate = lerp_series(rate_times_, rates_, t);
  } else if (s.speed >= standstill_speed_) {
    const double ddx = x_.second_derivative(t);
    const double ddy = y_.second_derivative(t);
    s.yaw_rate = (dx * ddy - dy * ddx) / (s.speed * s.speed);
  } else {
    s.yaw_rate = 0.0;
  }
  return s;
}

Trajectory build_gnss_trajectory(
  std::span<const GnssSample> gnss, std::span<const ImuSample> imu, int window)
{
  if (gnss.empty()) {
    throw UsageError("trajectory: empty GNSS stream");
  }
  const auto smoothed = smooth(gnss, window);
  std::vector<double> times;
  std::vector<Point2> positions;
  for (const auto & s : smoothed) {
    times.push_back(s.timestamp);
    positions.emplace_back(s.x, s.y);
  }
  const auto rates = imu.empty() ? std::vector<ImuSample>{} : smooth(imu, window);
  return Trajectory(std::move(times), positions, rates);
}

Trajectory build_fused_trajectory(
  std::span<const TrajectoryState> fused, std::span<const ImuSample> imu, int window)
{
  if (fused.empty()) {
    throw UsageError("trajectory: empty fused stream");
  }
  const auto smoothed = smooth(fused, window);
  std::vector<double> times;
  std::vector<Point2> positions;
  for (const auto & s : smoothed) {
    times.push_back(s.timestamp);
    positions.push_back(s.pose.position());
  }
  const auto rates = imu.empty() ? std::vector<ImuSample>{} : smooth(imu, window);
  return Trajectory(std::move(times), positions, rates);
}

Trajectory build_state_trajectory(std::span<const TrajectoryState> states)
{
  if (states.empty()) {
    throw UsageError("trajectory: empty state stream");
  }
  std::vector<double> times;
  std::vector<Point2> positions;
  std::vector<ImuSample> rates;
  for (const auto & s : states) {
    times.push_back(s.timestamp);
    positions.push_back(s.pose.position());
    rates.push_back(ImuSample{s.timestamp, s.yaw_rate, 0.0});
  }
  return Trajectory(std::move(times), positions, rates);
}

}  // namespace vruref
