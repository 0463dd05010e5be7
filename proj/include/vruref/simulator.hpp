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

#ifndef VRUREF__SIMULATOR_HPP_
#define VRUREF__SIMULATOR_HPP_

#include "vruref/annotation.hpp"
#include "vruref/core.hpp"
#include "vruref/evaluation.hpp"
#include "vruref/trajectory.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace vruref::sim
{

/// GNSS error window. Inside [start, start + duration) the fixes are displaced
/// by a bias that ramps in and out over `onset` seconds, plus an optional
/// random walk.
struct Perturbation
{
  double start{10.0};
  double duration{3.0};
  Point2 bias{1.2, 1.6};  // 2 m
  double onset{0.5};
  double random_walk_sigma{0.0};  // m per fix
  bool flagged{false};            // receiver marks the window as DEGRADED
};

struct ScenarioConfig
{
  VruKind vru_kind{VruKind::Pedestrian};
  double speed{1.4};               // m/s along the course
  double course_half_width{10.0};  // lemniscate half-width A
  Point2 course_center{0.0, 0.0};
  double duration{60.0};

  double gnss_rate{18.0};
  double imu_rate{90.0};
  double radar_rate{20.0};  // per sensor

  double gnss_sigma{0.02};
  std::optional<Perturbation> perturbation;

  double imu_yaw_rate_sigma{0.01};
  double imu_yaw_rate_bias{0.0};
  double imu_yaw_rate_bias_sigma{0.003};
  double imu_accel_sigma{0.05};
  double imu_accel_bias_sigma{0.02};

  double detections_at_ref{12.0};  // Poisson mean at detection_ref_range
  double detection_ref_range{10.0};
  Point2 scatter_sigma{0.15, 0.15};  // object frame (along, across)
  double doppler_sigma{0.05};
  double amplitude_ref_db{20.0};  // at 1 m, before the R^-4 falloff
  double amplitude_sigma_db{2.0};
  double clutter_rate{2.0};       // expected clutter points per scan
  double clutter_amplitude_ref_db{15.0};

  double range_resolution{0.15};
  double azimuth_resolution{2.4 * kPi / 180.0};
  double doppler_resolution{0.17};

  Pose ego_pose{-18.0, 0.0, 0.0, Frame::global()};
  std::vector<SensorMount> mounts;

  std::uint64_t seed{1};
};

/// Throws UsageError naming the offending field.
void validate(const ScenarioConfig & cfg);

/// Two forward-looking corner radars.
std::vector<SensorMount> default_mounts();

/// Scenario presets: 1 pedestrian, 2 cyclist, 3 cyclist with a GNSS perturbation.
ScenarioConfig preset(int id, std::uint64_t seed = 1);

/// Lemniscate of Gerono x = A sin(2 pi s), y = A sin(2 pi s) cos(2 pi s),
/// traversed at constant arc speed.
class EightCourse
{
public:
  EightCourse(double half_width, double speed, Point2 center = {0.0, 0.0});

  TrajectoryState state_at(double t) const;
  double length() const { return length_; }
  double period() const { return length_ / speed_; }

private:
  double theta_at_arc(double arc) const;
  double arc_at_theta(double theta) const;
  double speed_param(double theta) const;  // |dP/dtheta|

  double a_;
  double speed_;
  Point2 center_;
  double length_{0.0};
  std::vector<double> theta_table_;
  std::vector<double> arc_table_;
};

struct TruthLabel
{
  double timestamp;
  std::size_t index;
  PointLabel label;
};

struct Scenario
{
  ScenarioConfig config;
  std::vector<TrajectoryState> truth;  // sampled at imu_rate
  std::vector<GnssSample> gnss;
  std::vector<ImuSample> imu;
  std::vector<RadarScan> scans;
  std::vector<TruthLabel> labels;
};

std::vector<TrajectoryState> generate_truth(const ScenarioConfig & cfg);
std::vector<GnssSample> generate_gnss(const EightCourse & course, const ScenarioConfig & cfg);
std::vector<ImuSample> generate_imu(const EightCourse & course, const ScenarioConfig & cfg);

struct RadarOutput
{
  std::vector<RadarScan> scans;
  std::vector<TruthLabel> labels;
};
RadarOutput generate_radar(const EightCourse & course, const ScenarioConfig & cfg);

/// Whole scenario; fully determined by the config (including its seed).
Scenario simulate(const ScenarioConfig & cfg);

TruthIndex truth_index(const std::vector<TruthLabel> & labels);

/// Extent of the generating scatter expressed like a tracker estimate
/// (length = 2 sigma / sqrt(extent_scale)).
struct TrueExtent
{
  double length;
  double width;
};
TrueExtent true_extent(const ScenarioConfig & cfg, double extent_scale = 0.25);

}  // namespace vruref::sim

#endif  // VRUREF__SIMULATOR_HPP_
