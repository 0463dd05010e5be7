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

#include <cmath>
#include <deque>

namespace vruref
{

namespace
{

struct Epoch
{
  double t;
  Point2 fix;
  Point2 fused;
  double heading;
  double speed;
  bool accepted;
};

class DeadReckoner
{
public:
  DeadReckoner(const FusionParams & params, double t, Point2 p, double heading, double speed)
  : params_(params), t_(t), p_(std::move(p)), heading_(heading), speed_(speed)
  {
  }

  void set_rates(double yaw_rate, double accel)
  {
    yaw_rate_ = yaw_rate;
    accel_ = accel;
  }

  void propagate(double t)
  {
    const double dt = std::max(0.0, t - t_);
    const double mid_heading = heading_ + 0.5 * yaw_rate_ * dt;
    heading_ = wrap_angle(heading_ + yaw_rate_ * dt);
    speed_ = std::max(0.0, speed_ + accel_ * dt);
    if (standing_still()) {
      speed_ = 0.0;
    } else {
      p_ += speed_ * dt * Point2{std::cos(mid_heading), std::sin(mid_heading)};
    }
    t_ = std::max(t_, t);
  }

  bool standing_still() const
  {
    return speed_ < params_.standstill_speed &&
           std::abs(yaw_rate_) < params_.standstill_yaw_rate;
  }

  double t() const { return t_; }
  const Point2 & position() const { return p_; }
  double heading() const { return heading_; }
  double speed() const { return speed_; }
  double yaw_rate() const { return yaw_rate_; }

  void correct_position(const Point2 & delta) { p_ += delta; }
  void reset_position(const Point2 & p) { p_ = p; }
  void correct_heading(double delta) { heading_ = wrap_angle(heading_ + delta); }
  void correct_speed(double delta) { speed_ = std::max(0.0, speed_ + delta); }

private:
  const FusionParams & params_;
  double t_;
  Point2 p_;
  double heading_;
  double speed_;
  double yaw_rate_{0.0};
  double accel_{0.0};
};

// Entry in `history` closest to time `t`, restricted to [t - 2 span, t - span / 2].
const Epoch * lookback(const std::deque<Epoch> & history, double t, double span, bool accepted_only)
{
  const Epoch * best = nullptr;
  double best_gap = 0.0;
  for (const auto & e : history) {
    const double age = t - e.t;
    if (age < 0.5 * span || age > 2.0 * span || (accepted_only && !e.accepted)) {
      continue;
    }
    const double gap = std::abs(age - span);
    if (!best || gap < best_gap) {
      best = &e;
      best_gap = gap;
    }
  }
  return best;
}

const Epoch * nearest(const std::deque<Epoch> & history, double t)
{
  const Epoch * best = nullptr;
  for (const auto & e : history) {
    if (!best || std::abs(e.t - t) < std::abs(best->t - t)) {
      best = &e;
    }
  }
  return best;
}

}  // namespace

std::vector<TrajectoryState> fuse_gnss_imu(
  std::span<const GnssSample> gnss, std::span<const ImuSample> imu, const FusionParams & params)
{
  if (gnss.empty() || imu.empty()) {
    throw UsageError("fuse_gnss_imu: both streams must be non-empty");
  }
  const double overlap_start = std::max(gnss.front().timestamp, imu.front().timestamp);
  const double overlap_end = std::min(gnss.back().timestamp, imu.back().timestamp);
  if (overlap_start > overlap_end) {
    throw UsageError("fuse_gnss_imu: GNSS and IMU streams do not overlap in time");
  }

  std::size_t g = 0;
  while (gnss[g].timestamp < overlap_start) {
    ++g;
  }
  std::size_t m = 0;
  while (m < imu.size() && imu[m].timestamp < gnss[g].timestamp) {
    ++m;
  }
  if (m == imu.size()) {
    throw UsageError("fuse_gnss_imu: no IMU sample after the first overlapping fix");
  }

  // Initial heading and speed from the GNSS chord over the first span,
  // referred back to the start with the IMU yaw rate.
  const GnssSample & first = gnss[g];
  double heading = std::isfinite(imu[m].yaw) ? wrap_angle(imu[m].yaw) : 0.0;
  double speed = 0.0;
  for (std::size_t j = g + 1; j < gnss.size(); ++j) {
    const double dt = gnss[j].timestamp - first.timestamp;
    if (dt >= params.consistency_span) {
      const Point2 chord{gnss[j].x - first.x, gnss[j].y - first.y};
      if (chord.norm() / dt >= params.standstill_speed) {
        speed = chord.norm() / dt;
        heading = wrap_angle(std::atan2(chord.y(), chord.x()) - 0.5 * imu[m].yaw_rate * dt);
      }
      break;
    }
  }

  DeadReckoner dr(params, first.timestamp, Point2{first.x, first.y}, heading, speed);
  dr.set_rates(imu[m].yaw_rate, imu[m].accel_forward);

  std::deque<Epoch> history;
  double last_accept = first.timestamp;
  const double history_span = 2.5 * params.consistency_span;

  auto process_fix = [&](const GnssSample & fix) {
    const Point2 z{fix.x, fix.y};
    dr.propagate(fix.timestamp);
    const Point2 predicted = dr.position();

    bool accept = fix.quality != GnssQuality::Degraded &&
                  (z - predicted).norm() < params.innovation_gate;
    if (accept) {
      if (const Epoch * old = lookback(history, fix.timestamp, params.consistency_span, false)) {
        const Point2 mismatch = (z - old->fix) - (predicted - old->fused);
        accept = mismatch.norm() < params.consistency_gate;
      }
    }
    const bool forced = !accept && fix.quality != GnssQuality::Degraded &&
                        fix.timestamp - last_accept > params.max_coast;

    if (forced) {
      dr.reset_position(z);
      history.clear();
      last_accept = fix.timestamp;
      accept = true;
    } else if (accept) {
      if (!dr.standing_still()) {
        dr.correct_position(params.position_gain * (z - predicted));
      }
      if (const Epoch * old = lookback(history, fix.timestamp, params.consistency_span, true)) {
        const double dt = fix.timestamp - old->t;
        const Point2 chord = (z - old->fix) / dt;
        const Epoch * mid = nearest(history, 0.5 * (fix.timestamp + old->t));
        if (chord.norm() >= params.standstill_speed) {
          dr.correct_heading(
            params.heading_gain * wrap_angle(std::atan2(chord.y(), chord.x()) - mid->heading));
          dr.correct_speed(params.speed_gain * (chord.norm() - mid->speed));
        } else {
          dr.correct_speed(-params.speed_gain * dr.speed());
        }
      }
      last_accept = fix.timestamp;
    }

    history.push_back({fix.timestamp, z, dr.position(), dr.heading(), dr.speed(), accept});
    while (!history.empty() && fix.timestamp - history.front().t > history_span) {
      history.pop_front();
    }
  };

  std::vector<TrajectoryState> out;
  process_fix(first);
  ++g;
  for (; m < imu.size() && imu[m].timestamp <= overlap_end; ++m) {
    const ImuSample & sample = imu[m];
    while (g < gnss.size() && gnss[g].timestamp <= sample.timestamp) {
      process_fix(gnss[g]);
      ++g;
    }
    dr.propagate(sample.timestamp);
    dr.set_rates(sample.yaw_rate, sample.accel_forward);
    out.push_back(TrajectoryState{
      sample.timestamp,
      Pose{dr.position().x(), dr.position().y(), dr.heading(), Frame::global()},
      dr.speed(), sample.yaw_rate});
  }
  return out;
}

}  // namespace vruref
