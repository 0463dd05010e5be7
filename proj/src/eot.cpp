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

#include "vruref/eot.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <string>

namespace vruref::eot
{

namespace
{

constexpr double kStraightLimit = 1e-6;

template <typename Derived>
typename Derived::PlainObject symmetric(const Eigen::MatrixBase<Derived> & expr)
{
  const typename Derived::PlainObject m = expr;
  return 0.5 * (m + m.transpose());
}

Matrix2 inverse_sqrtm_spd(const Matrix2 & m)
{
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(m);
  const Eigen::Vector2d d = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
}

void require_spd(const Matrix2 & m, const char * where)
{
  if (!is_spd(m)) {
    throw ConsistencyError(std::string(where) + ": extent matrix is not SPD");
  }
}

}  // namespace

bool is_spd(const Matrix2 & m)
{
  if (!m.allFinite() || std::abs(m(0, 1) - m(1, 0)) > 1e-12 * std::max(1.0, m.norm())) {
    return false;
  }
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(m);
  return eig.eigenvalues()(0) > 0.0;
}

Matrix2 sqrtm_spd(const Matrix2 & m)
{
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(m);
  const Eigen::Vector2d d = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * d.asDiagonal() * eig.eigenvectors().transpose();
}

Vector5 constant_turn(const Vector5 & s, double dt)
{
  const double v = s(kSpeed);
  const double psi = s(kHeading);
  const double w = s(kYawRate);
  Vector5 out = s;
  if (std::abs(w) < kStraightLimit) {
    const double c = std::cos(psi);
    const double sn = std::sin(psi);
    out(kX) += v * dt * c - 0.5 * v * w * dt * dt * sn - v * w * w * dt * dt * dt * c / 6.0;
    out(kY) += v * dt * sn + 0.5 * v * w * dt * dt * c - v * w * w * dt * dt * dt * sn / 6.0;
  } else {
    // Product form avoids the cancellation in sin(a + b) - sin(a) for small turns.
    const double chord = 2.0 * v / w * std::sin(0.5 * w * dt);
    const double mid = psi + 0.5 * w * dt;
    out(kX) += chord * std::cos(mid);
    out(kY) += chord * std::sin(mid);
  }
  out(kHeading) = wrap_angle(psi + w * dt);
  return out;
}

Matrix5 constant_turn_jacobian(const Vector5 & s, double dt)
{
  const double v = s(kSpeed);
  const double psi = s(kHeading);
  const double w = s(kYawRate);
  const double s0 = std::sin(psi);
  const double c0 = std::cos(psi);
  Matrix5 f = Matrix5::Identity();
  if (std::abs(w) < kStraightLimit) {
    const double dt2 = dt * dt;
    const double dt3 = dt2 * dt;
    f(kX, kSpeed) = dt * c0 - 0.5 * w * dt2 * s0;
    f(kX, kHeading) = -v * dt * s0 - 0.5 * v * w * dt2 * c0;
    f(kX, kYawRate) = -0.5 * v * dt2 * s0 - v * w * dt3 * c0 / 3.0;
    f(kY, kSpeed) = dt * s0 + 0.5 * w * dt2 * c0;
    f(kY, kHeading) = v * dt * c0 - 0.5 * v * w * dt2 * s0;
    f(kY, kYawRate) = 0.5 * v * dt2 * c0 - v * w * dt3 * s0 / 3.0;
  } else {
    const double s1 = std::sin(psi + w * dt);
    const double c1 = std::cos(psi + w * dt);
    f(kX, kSpeed) = (s1 - s0) / w;
    f(kX, kHeading) = v / w * (c1 - c0);
    f(kX, kYawRate) = v * dt * c1 / w - v * (s1 - s0) / (w * w);
    f(kY, kSpeed) = (c0 - c1) / w;
    f(kY, kHeading) = v / w * (s1 - s0);
    f(kY, kYawRate) = v * dt * s1 / w - v * (c0 - c1) / (w * w);
  }
  f(kHeading, kYawRate) = dt;
  return f;
}

RmmTrack predict(const RmmTrack & track, double dt, const ProcessNoise & noise)
{
  if (!(dt > 0.0)) {
    throw UsageError("eot::predict: dt must be positive");
  }
  require_spd(track.extent, "eot::predict");

  RmmTrack out = track;
  out.timestamp = track.timestamp + dt;
  out.state = constant_turn(track.state, dt);
  const Matrix5 f = constant_turn_jacobian(track.state, dt);

  const double c = std::cos(track.state(kHeading));
  const double s = std::sin(track.state(kHeading));
  Eigen::Matrix<double, 5, 2> g = Eigen::Matrix<double, 5, 2>::Zero();
  g(kX, 0) = 0.5 * dt * dt * c;
  g(kY, 0) = 0.5 * dt * dt * s;
  g(kSpeed, 0) = dt;
  g(kHeading, 1) = 0.5 * dt * dt;
  g(kYawRate, 1) = dt;
  const Eigen::Vector2d q{
    noise.accel_sigma * noise.accel_sigma, noise.yaw_accel_sigma * noise.yaw_accel_sigma};
  out.covariance = symmetric(f * track.covariance * f.transpose() + g * q.asDiagonal() * g.transpose());

  // The extent turns with the object.
  const Matrix2 r = rotation(track.state(kYawRate) * dt);
  out.extent = symmetric(r * track.extent * r.transpose());

  out.dof = noise.dof_floor +
            std::max(0.0, track.dof - noise.dof_floor) * std::pow(noise.dof_retention, dt);
  require_spd(out.extent, "eot::predict");
  return out;
}

double predicted_radial_velocity(const Vector5 & state, const Point2 & sensor_position)
{
  const Point2 los = Point2{state(kX), state(kY)} - sensor_position;
  const double r = los.norm();
  if (r <= 0.0) {
    return 0.0;
  }
  const Point2 u = los / r;
  return state(kSpeed) *
         (std::cos(state(kHeading)) * u.x() + std::sin(state(kHeading)) * u.y());
}

RmmTrack update(
  const RmmTrack & track, const ScanMeasurement & scan, bool use_doppler,
  const MeasurementNoise & noise)
{
  if (scan.points.empty()) {
    throw UsageError("eot::update: scan has no detections");
  }
  require_spd(track.extent, "eot::update");
  const auto n = static_cast<double>(scan.points.size());

  Point2 mean = Point2::Zero();
  for (const auto & p : scan.points) {
    mean += p;
  }
  mean /= n;
  Matrix2 scatter = Matrix2::Zero();
  for (const auto & p : scan.points) {
    scatter += (p - mean) * (p - mean).transpose();
  }

  RmmTrack out = track;
  out.timestamp = scan.timestamp;
  const Matrix2 spread = symmetric(noise.extent_scale * track.extent + noise.sensor);

  Eigen::Matrix<double, 2, 5> h = Eigen::Matrix<double, 2, 5>::Zero();
  h(0, kX) = 1.0;
  h(1, kY) = 1.0;
  const Matrix2 innovation_cov = symmetric(h * track.covariance * h.transpose() + spread / n);
  const Eigen::Matrix<double, 5, 2> gain =
    track.covariance * h.transpose() * innovation_cov.inverse();
  const Point2 innovation = mean - Point2{track.state(kX), track.state(kY)};

  out.state = track.state + gain * innovation;
  out.state(kHeading) = wrap_angle(out.state(kHeading));
  out.covariance = symmetric(track.covariance - gain * innovation_cov * gain.transpose());

  // Extent: dof-weighted blend of prior, innovation spread and scan scatter.
  const Matrix2 x_half = sqrtm_spd(track.extent);
  const Matrix2 s_inv_half = inverse_sqrtm_spd(innovation_cov);
  const Matrix2 y_inv_half = inverse_sqrtm_spd(spread);
  const Matrix2 n_hat = x_half * s_inv_half * innovation * innovation.transpose() *
                        s_inv_half.transpose() * x_half.transpose();
  const Matrix2 z_hat =
    x_half * y_inv_half * scatter * y_inv_half.transpose() * x_half.transpose();
  out.extent = symmetric((track.dof * track.extent + n_hat + z_hat) / (track.dof + n));
  out.dof = track.dof + n;

  // The radial velocity is v cos(heading - bearing); its linearization is
  // only trusted once the heading is reasonably well known.
  const bool heading_known =
    out.covariance(kHeading, kHeading) <=
    noise.doppler_max_heading_sigma * noise.doppler_max_heading_sigma;
  if (use_doppler && heading_known && !scan.radial_velocities.empty()) {
    double measured = 0.0;
    for (double v : scan.radial_velocities) {
      measured += v;
    }
    measured /= static_cast<double>(scan.radial_velocities.size());

    const Point2 los = Point2{out.state(kX), out.state(kY)} - scan.sensor_position;
    if (los.norm() > 1e-6) {
      const Point2 u = los.normalized();
      const double c = std::cos(out.state(kHeading));
      const double s = std::sin(out.state(kHeading));
      Eigen::Matrix<double, 1, 5> hd = Eigen::Matrix<double, 1, 5>::Zero();
      hd(kSpeed) = c * u.x() + s * u.y();
      hd(kHeading) = out.state(kSpeed) * (-s * u.x() + c * u.y());
      const double r = noise.doppler_sigma * noise.doppler_sigma /
                         static_cast<double>(scan.radial_velocities.size()) +
                       noise.doppler_model_sigma * noise.doppler_model_sigma;
      const double sd = (hd * out.covariance * hd.transpose())(0, 0) + r;

      // Only speed, heading and yaw rate are corrected (Schmidt-style gain);
      // the Joseph form keeps the covariance consistent with that choice.
      Vector5 k = out.covariance * hd.transpose() / sd;
      k(kX) = 0.0;
      k(kY) = 0.0;
      const double residual =
        measured - predicted_radial_velocity(out.state, scan.sensor_position);
      out.state += k * residual;
      const Matrix5 ikh = Matrix5::Identity() - k * hd;
      out.covariance = symmetric(ikh * out.covariance * ikh.transpose() + k * r * k.transpose());
    }
  }

  if (out.state(kSpeed) < 0.0) {
    out.state(kSpeed) = -out.state(kSpeed);
    out.state(kHeading) += kPi;
  }
  out.state(kHeading) = wrap_angle(out.state(kHeading));
  require_spd(out.extent, "eot::update");
  return out;
}

ExtentEstimate extract_extent(const Matrix2 & extent, double scale)
{
  const Matrix2 m = scale * extent;
  if (!(scale > 0.0) || !is_spd(m)) {
    throw ConsistencyError("eot::extract_extent: extent matrix is not SPD");
  }
  Eigen::SelfAdjointEigenSolver<Matrix2> eig(m);
  ExtentEstimate e;
  e.length = 2.0 * std::sqrt(eig.eigenvalues()(1));
  e.width = 2.0 * std::sqrt(eig.eigenvalues()(0));
  const Point2 major = eig.eigenvectors().col(1);
  e.orientation = fold_axis_angle(std::atan2(major.y(), major.x()));
  return e;
}

ExtentEstimate extract_extent(const RmmTrack & track, double scale)
{
  return extract_extent(track.extent, scale);
}

Matrix2 reconstruct_extent(const ExtentEstimate & e)
{
  const Matrix2 r = rotation(e.orientation);
  const Eigen::Vector2d d{0.25 * e.length * e.length, 0.25 * e.width * e.width};
  return symmetric(r * d.asDiagonal() * r.transpose());
}

RmmTracker::RmmTracker(TrackerParams params) : params_(std::move(params)) {}

std::optional<TrackEstimate> RmmTracker::process(const ScanMeasurement & scan)
{
  if (scan.points.empty()) {
    return std::nullopt;
  }
  if (!first_) {
    first_ = scan;
    return std::nullopt;
  }

  if (!track_) {
    const ScanMeasurement & s0 = *first_;
    const auto n0 = static_cast<double>(s0.points.size());
    Point2 m0 = Point2::Zero();
    for (const auto & p : s0.points) {
      m0 += p;
    }
    m0 /= n0;
    Point2 m1 = Point2::Zero();
    for (const auto & p : scan.points) {
      m1 += p;
    }
    m1 /= static_cast<double>(scan.points.size());

    Matrix2 cov = Matrix2::Zero();
    for (const auto & p : s0.points) {
      cov += (p - m0) * (p - m0).transpose();
    }
    if (s0.points.size() > 1) {
      cov /= n0 - 1.0;
    }
    Eigen::SelfAdjointEigenSolver<Matrix2> eig(symmetric(cov / params_.measurement.extent_scale));
    const Eigen::Vector2d floored = eig.eigenvalues().cwiseMax(params_.extent_floor);

    RmmTrack t;
    t.timestamp = s0.timestamp;
    t.state << m0.x(), m0.y(), 0.0, std::atan2(m1.y() - m0.y(), m1.x() - m0.x()), 0.0;
    t.extent = symmetric(eig.eigenvectors() * floored.asDiagonal() * eig.eigenvectors().transpose());
    t.dof = params_.initial_dof;
    t.covariance = Matrix5::Zero();
    t.covariance.block<2, 2>(kX, kX) =
      (params_.measurement.extent_scale * t.extent + params_.measurement.sensor) / n0;
    t.covariance(kSpeed, kSpeed) = params_.initial_speed_sigma * params_.initial_speed_sigma;
    // Two closely spaced scans give a poor heading; widen its prior by the
    // ratio of centroid noise to displacement.
    const Matrix2 spread = params_.measurement.extent_scale * t.extent + params_.measurement.sensor;
    const double disp_var =
      0.5 * spread.trace() * (1.0 / n0 + 1.0 / static_cast<double>(scan.points.size()));
    const double disp = (m1 - m0).norm();
    const double heading_sigma = std::max(
      params_.initial_heading_sigma, disp > 0.0 ? std::min(kPi, std::sqrt(disp_var) / disp) : kPi);
    t.covariance(kHeading, kHeading) = heading_sigma * heading_sigma;
    t.covariance(kYawRate, kYawRate) =
      params_.initial_yaw_rate_sigma * params_.initial_yaw_rate_sigma;
    track_ = t;
  }

  const double dt = scan.timestamp - track_->timestamp;
  if (dt > 0.0) {
    track_ = predict(*track_, dt, params_.process);
  }
  track_ = update(*track_, scan, params_.use_doppler, params_.measurement);

  TrackEstimate e;
  e.timestamp = scan.timestamp;
  e.x = track_->state(kX);
  e.y = track_->state(kY);
  e.speed = track_->state(kSpeed);
  e.heading = track_->state(kHeading);
  e.yaw_rate = track_->state(kYawRate);
  e.extent = extract_extent(*track_);
  return e;
}

std::vector<TrackEstimate> run_tracker(
  std::span<const ScanMeasurement> scans, const TrackerParams & params)
{
  RmmTracker tracker(params);
  std::vector<TrackEstimate> out;
  for (const auto & scan : scans) {
    if (auto e = tracker.process(scan)) {
      out.push_back(*e);
    }
  }
  return out;
}

double axis_angle_error(double estimate, double truth)
{
  return std::abs(fold_axis_angle(estimate - truth));
}

std::vector<ErrorSample> tracking_metrics(
  std::span<const TrackEstimate> estimates, std::span<const TruthSample> truth)
{
  if (estimates.size() != truth.size()) {
    throw UsageError("tracking_metrics: estimate and truth series differ in length");
  }
  std::vector<ErrorSample> out;
  double centroid_ss = 0.0;
  double length_ss = 0.0;
  double width_ss = 0.0;
  for (std::size_t i = 0; i < estimates.size(); ++i) {
    const TrackEstimate & e = estimates[i];
    const TruthSample & g = truth[i];
    if (std::abs(e.timestamp - g.timestamp) > 1e-6) {
      throw UsageError("tracking_metrics: series are not time-aligned at index " + std::to_string(i));
    }
    ErrorSample s;
    s.timestamp = e.timestamp;
    s.centroid_error = std::hypot(e.x - g.x, e.y - g.y);
    centroid_ss += s.centroid_error * s.centroid_error;
    length_ss += (e.extent.length - g.length) * (e.extent.length - g.length);
    width_ss += (e.extent.width - g.width) * (e.extent.width - g.width);
    const double k = static_cast<double>(i + 1);
    s.centroid_rmse = std::sqrt(centroid_ss / k);
    s.length_rmse = std::sqrt(length_ss / k);
    s.width_rmse = std::sqrt(width_ss / k);
    s.yaw_rate_abs_error = std::abs(e.yaw_rate - g.yaw_rate);
    s.orientation_abs_error_deg = axis_angle_error(e.extent.orientation, g.orientation) * 180.0 / kPi;
    out.push_back(s);
  }
  return out;
}

}  // namespace vruref::eot
