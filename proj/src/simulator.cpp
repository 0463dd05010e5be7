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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace vruref::sim
{

namespace
{

constexpr std::size_t kArcTableSize = 4096;

enum class Stream : std::uint64_t { Gnss = 1, Imu = 2, Radar = 3 };

std::mt19937_64 make_rng(std::uint64_t seed, Stream stream)
{
  std::seed_seq seq{
    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
    static_cast<std::uint32_t>(stream)};
  return std::mt19937_64(seq);
}

std::size_t sample_count(double duration, double rate)
{
  return static_cast<std::size_t>(std::floor(duration * rate + 1e-9)) + 1;
}

double quantize(double value, double step)
{
  return std::round(value / step) * step;
}

void require(bool ok, const std::string & field, const std::string & what)
{
  if (!ok) {
    throw UsageError("scenario config: " + field + " " + what);
  }
}

}  // namespace

void validate(const ScenarioConfig & cfg)
{
  require(cfg.speed > 0.0, "speed", "must be positive");
  require(cfg.course_half_width > 0.0, "course_half_width", "must be positive");
  require(cfg.duration > 0.0, "duration", "must be positive");
  require(cfg.gnss_rate > 0.0, "gnss_rate", "must be positive");
  require(cfg.imu_rate > 0.0, "imu_rate", "must be positive");
  require(cfg.radar_rate > 0.0, "radar_rate", "must be positive");
  require(cfg.gnss_sigma >= 0.0, "gnss_sigma", "must be non-negative");
  require(cfg.detections_at_ref > 0.0, "detections_at_ref", "must be positive");
  require(cfg.detection_ref_range > 0.0, "detection_ref_range", "must be positive");
  require(
    cfg.scatter_sigma.x() > 0.0 && cfg.scatter_sigma.y() > 0.0, "scatter_sigma",
    "must be positive");
  require(cfg.clutter_rate >= 0.0, "clutter_rate", "must be non-negative");
  require(cfg.range_resolution > 0.0, "range_resolution", "must be positive");
  require(cfg.azimuth_resolution > 0.0, "azimuth_resolution", "must be positive");
  require(cfg.doppler_resolution > 0.0, "doppler_resolution", "must be positive");
  require(!cfg.mounts.empty(), "mounts", "must not be empty");
  for (const auto & m : cfg.mounts) {
    vruref::validate(m);
  }
  vruref::validate(cfg.ego_pose);
  if (cfg.perturbation) {
    require(cfg.perturbation->duration > 0.0, "perturbation.duration", "must be positive");
    require(cfg.perturbation->onset >= 0.0, "perturbation.onset", "must be non-negative");
  }
}

std::vector<SensorMount> default_mounts()
{
  const double fov = 70.0 * kPi / 180.0;
  return {
    SensorMount{0, Pose{3.6, 0.7, 0.25, Frame::ego()}, fov, 60.0},
    SensorMount{1, Pose{3.6, -0.7, -0.25, Frame::ego()}, fov, 60.0},
  };
}

ScenarioConfig preset(int id, std::uint64_t seed)
{
  ScenarioConfig cfg;
  cfg.mounts = default_mounts();
  cfg.seed = seed;
  switch (id) {
    case 1:
      cfg.vru_kind = VruKind::Pedestrian;
      cfg.speed = 1.4;
      cfg.duration = 60.0;
      cfg.scatter_sigma = {0.15, 0.15};
      break;
    case 2:
    case 3:
      cfg.vru_kind = VruKind::Cyclist;
      cfg.speed = 3.0;
      cfg.duration = 40.0;
      cfg.scatter_sigma = {0.4, 0.15};
      if (id == 3) {
        cfg.perturbation = Perturbation{};
      }
      break;
    default:
      throw UsageError("preset: unknown preset " + std::to_string(id) + " (expected 1, 2 or 3)");
  }
  return cfg;
}

EightCourse::EightCourse(double half_width, double speed, Point2 center)
: a_(half_width), speed_(speed), center_(std::move(center))
{
  if (!(half_width > 0.0) || !(speed > 0.0)) {
    throw UsageError("eight course: half-width and speed must be positive");
  }
  // Cumulative arc length on a uniform theta grid, Simpson per interval.
  theta_table_.resize(kArcTableSize + 1);
  arc_table_.resize(kArcTableSize + 1);
  const double h = 2.0 * kPi / static_cast<double>(kArcTableSize);
  arc_table_[0] = 0.0;
  for (std::size_t i = 0; i <= kArcTableSize; ++i) {
    theta_table_[i] = h * static_cast<double>(i);
    if (i > 0) {
      const double t0 = theta_table_[i - 1];
      arc_table_[i] = arc_table_[i - 1] +
                      h / 6.0 *
                        (speed_param(t0) + 4.0 * speed_param(t0 + 0.5 * h) + speed_param(t0 + h));
    }
  }
  length_ = arc_table_.back();
}

double EightCourse::speed_param(double theta) const
{
  return a_ * std::hypot(std::cos(theta), std::cos(2.0 * theta));
}

double EightCourse::arc_at_theta(double theta) const
{
  const double h = theta_table_[1];
  const auto i = std::min(
    static_cast<std::size_t>(std::floor(theta / h)), kArcTableSize - 1);
  const double t0 = theta_table_[i];
  const double d = theta - t0;
  // Simpson over the partial interval.
  return arc_table_[i] +
         d / 6.0 * (speed_param(t0) + 4.0 * speed_param(t0 + 0.5 * d) + speed_param(theta));
}

double EightCourse::theta_at_arc(double arc) const
{
  auto it = std::upper_bound(arc_table_.begin(), arc_table_.end(), arc);
  std::size_t i = it == arc_table_.begin() ? 0 : static_cast<std::size_t>(it - arc_table_.begin()) - 1;
  i = std::min(i, kArcTableSize - 1);
  const double frac = (arc - arc_table_[i]) / (arc_table_[i + 1] - arc_table_[i]);
  double theta = theta_table_[i] + frac * (theta_table_[i + 1] - theta_table_[i]);
  for (int k = 0; k < 8; ++k) {
    const double err = arc_at_theta(theta) - arc;
    theta -= err / speed_param(theta);
    if (std::abs(err) < 1e-13) {
      break;
    }
  }
  return theta;
}

TrajectoryState EightCourse::state_at(double t) const
{
  const double arc = std::fmod(std::max(0.0, t) * speed_, length_);
  const double th = theta_at_arc(arc);
  const double s1 = std::sin(th);
  const double c1 = std::cos(th);
  const double s2 = std::sin(2.0 * th);
  const double c2 = std::cos(2.0 * th);

  const double x = a_ * s1;
  const double y = 0.5 * a_ * s2;
  const double dx = a_ * c1;
  const double dy = a_ * c2;
  const double ddx = -a_ * s1;
  const double ddy = -2.0 * a_ * s2;
  const double norm = std::hypot(dx, dy);

  TrajectoryState s;
  s.timestamp = t;
  s.pose = Pose{center_.x() + x, center_.y() + y, wrap_angle(std::atan2(dy, dx)), Frame::global()};
  s.speed = speed_;
  s.yaw_rate = speed_ * (dx * ddy - dy * ddx) / (norm * norm * norm);
  return s;
}

std::vector<TrajectoryState> generate_truth(const ScenarioConfig & cfg)
{
  const EightCourse course(cfg.course_half_width, cfg.speed, cfg.course_center);
  std::vector<TrajectoryState> out;
  const std::size_t n = sample_count(cfg.duration, cfg.imu_rate);
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    out.push_back(course.state_at(static_cast<double>(k) / cfg.imu_rate));
  }
  return out;
}

std::vector<GnssSample> generate_gnss(const EightCourse & course, const ScenarioConfig & cfg)
{
  auto rng = make_rng(cfg.seed, Stream::Gnss);
  std::normal_distribution<double> noise(0.0, 1.0);

  const std::size_t n = sample_count(cfg.duration, cfg.gnss_rate);
  std::vector<GnssSample> out;
  out.reserve(n);

  std::size_t window_samples = 0;
  std::size_t onset_steps = 1;
  if (cfg.perturbation) {
    const auto & p = *cfg.perturbation;
    for (std::size_t k = 0; k < n; ++k) {
      const double t = static_cast<double>(k) / cfg.gnss_rate;
      window_samples += (t >= p.start && t < p.start + p.duration) ? 1 : 0;
    }
    onset_steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(p.onset * cfg.gnss_rate)));
  }

  Point2 walk = Point2::Zero();
  std::size_t in_window = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / cfg.gnss_rate;
    const TrajectoryState s = course.state_at(t);
    GnssSample g{t, s.pose.x, s.pose.y, GnssQuality::FixRtk};
    if (cfg.gnss_sigma > 0.0) {
      g.x += cfg.gnss_sigma * noise(rng);
      g.y += cfg.gnss_sigma * noise(rng);
    }
    if (cfg.perturbation) {
      const auto & p = *cfg.perturbation;
      if (t >= p.start && t < p.start + p.duration) {
        const double rise = static_cast<double>(in_window + 1) / static_cast<double>(onset_steps);
        const double fall =
          static_cast<double>(window_samples - in_window) / static_cast<double>(onset_steps);
        const double factor = std::min({1.0, rise, fall});
        if (p.random_walk_sigma > 0.0) {
          walk += p.random_walk_sigma * Point2{noise(rng), noise(rng)};
        }
        g.x += factor * p.bias.x() + walk.x();
        g.y += factor * p.bias.y() + walk.y();
        if (p.flagged) {
          g.quality = GnssQuality::Degraded;
        }
        ++in_window;
      }
    }
    out.push_back(g);
  }
  return out;
}

std::vector<ImuSample> generate_imu(const EightCourse & course, const ScenarioConfig & cfg)
{
  auto rng = make_rng(cfg.seed, Stream::Imu);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double rate_bias = cfg.imu_yaw_rate_bias + cfg.imu_yaw_rate_bias_sigma * noise(rng);
  const double accel_bias = cfg.imu_accel_bias_sigma * noise(rng);

  const std::size_t n = sample_count(cfg.duration, cfg.imu_rate);
  std::vector<ImuSample> out;
  out.reserve(n);
  double yaw = course.state_at(0.0).pose.yaw;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = static_cast<double>(k) / cfg.imu_rate;
    const TrajectoryState s = course.state_at(t);
    ImuSample m;
    m.timestamp = t;
    m.yaw_rate = s.yaw_rate + rate_bias + cfg.imu_yaw_rate_sigma * noise(rng);
    m.accel_forward = accel_bias + cfg.imu_accel_sigma * noise(rng);  // constant arc speed
    if (k > 0) {
      yaw += 0.5 * (out.back().yaw_rate + m.yaw_rate) / cfg.imu_rate;
    }
    m.yaw = wrap_angle(yaw);
    out.push_back(m);
  }
  return out;
}

RadarOutput generate_radar(const EightCourse & course, const ScenarioConfig & cfg)
{
  auto rng = make_rng(cfg.seed, Stream::Radar);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  struct Pending
  {
    RadarDetection det;
    PointLabel label;
  };

  RadarOutput out;
  const std::size_t n = sample_count(cfg.duration, cfg.radar_rate);
  const auto sensors = cfg.mounts.size();

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t si = 0; si < sensors; ++si) {
      const SensorMount & mount = cfg.mounts[si];
      const double t = static_cast<double>(k) / cfg.radar_rate +
                       static_cast<double>(si) / (cfg.radar_rate * static_cast<double>(sensors));
      if (t > cfg.duration) {
        continue;
      }
      const TrajectoryState vru = course.state_at(t);
      const Point2 sensor_pos = sensor_position_global(mount, cfg.ego_pose);

      auto measure = [&](const Point2 & global, double radial_velocity, double amp_ref_db) {
        const Polar polar = ego_to_polar(global_to_ego(global, cfg.ego_pose), mount);
        RadarDetection d;
        d.timestamp = t;
        d.sensor_id = mount.sensor_id;
        d.range = std::max(cfg.range_resolution, quantize(polar.range, cfg.range_resolution));
        d.azimuth = quantize(polar.azimuth, cfg.azimuth_resolution);
        d.radial_velocity = quantize(radial_velocity, cfg.doppler_resolution);
        d.amplitude = amp_ref_db - 40.0 * std::log10(polar.range) + cfg.amplitude_sigma_db * noise(rng);
        return d;
      };

      std::vector<Pending> points;
      const Polar center_polar = ego_to_polar(global_to_ego(vru.pose.position(), cfg.ego_pose), mount);
      if (std::abs(center_polar.azimuth) <= mount.fov_azimuth && center_polar.range <= mount.max_range) {
        std::poisson_distribution<int> count_law(
          cfg.detections_at_ref * cfg.detection_ref_range / std::max(center_polar.range, 1e-3));
        const int count = std::max(1, count_law(rng));
        const Matrix2 rot = rotation(vru.pose.yaw);
        const Point2 velocity = vru.speed * Point2{std::cos(vru.pose.yaw), std::sin(vru.pose.yaw)};
        for (int i = 0; i < count; ++i) {
          Point2 local;
          do {
            local = {cfg.scatter_sigma.x() * noise(rng), cfg.scatter_sigma.y() * noise(rng)};
          } while (std::pow(local.x() / cfg.scatter_sigma.x(), 2) +
                     std::pow(local.y() / cfg.scatter_sigma.y(), 2) > 16.0);
          const Point2 offset = rot * local;
          const Point2 p = vru.pose.position() + offset;
          const Point2 pv = velocity + vru.yaw_rate * Point2{-offset.y(), offset.x()};
          const Point2 u = (p - sensor_pos).normalized();
          const double vr = pv.dot(u) + cfg.doppler_sigma * noise(rng);
          points.push_back({measure(p, vr, cfg.amplitude_ref_db), PointLabel::Vru});
        }
      }

      std::poisson_distribution<int> clutter_law(cfg.clutter_rate);
      const int clutter = cfg.clutter_rate > 0.0 ? clutter_law(rng) : 0;
      for (int i = 0; i < clutter; ++i) {
        const double r = std::max(1.0, mount.max_range * std::sqrt(unit(rng)));
        const double az = mount.fov_azimuth * (2.0 * unit(rng) - 1.0);
        const Point2 ego_point = mount.pose_in_ego.position() +
                                 rotation(mount.pose_in_ego.yaw) * Point2{r * std::cos(az), r * std::sin(az)};
        const double vr = cfg.doppler_sigma * noise(rng);
        points.push_back(
          {measure(ego_to_global(ego_point, cfg.ego_pose), vr, cfg.clutter_amplitude_ref_db),
           PointLabel::Clutter});
      }

      std::shuffle(points.begin(), points.end(), rng);
      RadarScan scan{t, mount.sensor_id, {}};
      for (std::size_t i = 0; i < points.size(); ++i) {
        scan.detections.push_back(points[i].det);
        out.labels.push_back({t, i, points[i].label});
      }
      out.scans.push_back(std::move(scan));
    }
  }
  return out;
}

Scenario simulate(const ScenarioConfig & cfg)
{
  validate(cfg);
  const EightCourse course(cfg.course_half_width, cfg.speed, cfg.course_center);
  Scenario s;
  s.config = cfg;
  s.truth = generate_truth(cfg);
  s.gnss = generate_gnss(course, cfg);
  s.imu = generate_imu(course, cfg);
  RadarOutput radar = generate_radar(course, cfg);
  s.scans = std::move(radar.scans);
  s.labels = std::move(radar.labels);
  return s;
}

TruthIndex truth_index(const std::vector<TruthLabel> & labels)
{
  TruthIndex index;
  for (const auto & l : labels) {
    index.add(l.timestamp, l.index, l.label);
  }
  return index;
}

TrueExtent true_extent(const ScenarioConfig & cfg, double extent_scale)
{
  const double k = 2.0 / std::sqrt(extent_scale);
  const double a = k * cfg.scatter_sigma.x();
  const double b = k * cfg.scatter_sigma.y();
  return {std::max(a, b), std::min(a, b)};
}

}  // namespace vruref::sim
