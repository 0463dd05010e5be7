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

#include "vruref/signature.hpp"

#include "vruref/io.hpp"

#include <Eigen/Eigenvalues>
#include <fmt/format.h>
#include <omp.h>

#include <algorithm>
#include <cmath>
#include <ostream>

namespace vruref
{

SignatureGrid::SignatureGrid(double resolution, double half_extent_x, double half_extent_y)
: resolution_(resolution), half_x_(half_extent_x), half_y_(half_extent_y)
{
  if (!(resolution > 0.0) || !(half_extent_x > 0.0) || !(half_extent_y > 0.0)) {
    throw UsageError("signature grid: resolution and extents must be positive");
  }
  nx_ = static_cast<int>(std::ceil(2.0 * half_x_ / resolution_ - 1e-9));
  ny_ = static_cast<int>(std::ceil(2.0 * half_y_ / resolution_ - 1e-9));
  counts_.assign(static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_), 0);
}

void SignatureGrid::add(const Point2 & p)
{
  const double fx = std::floor((p.x() + half_x_) / resolution_);
  const double fy = std::floor((p.y() + half_y_) / resolution_);
  if (fx < 0.0 || fy < 0.0 || fx >= nx_ || fy >= ny_) {
    ++overflow_;
    return;
  }
  ++counts_[index(static_cast<int>(fx), static_cast<int>(fy))];
  ++total_;
}

void SignatureGrid::merge(const SignatureGrid & other)
{
  if (
    other.nx_ != nx_ || other.ny_ != ny_ || other.resolution_ != resolution_ ||
    other.half_x_ != half_x_ || other.half_y_ != half_y_) {
    throw UsageError("signature grid: cannot merge grids of different geometry");
  }
  for (std::size_t i = 0; i < counts_.size(); ++i) {
    counts_[i] += other.counts_[i];
  }
  total_ += other.total_;
  overflow_ += other.overflow_;
}

Point2 SignatureGrid::cell_center(int ix, int iy) const
{
  return {-half_x_ + (ix + 0.5) * resolution_, -half_y_ + (iy + 0.5) * resolution_};
}

Point2 to_object_frame(const Point2 & global, const TrajectoryState & vru_state)
{
  return rotation(vru_state.pose.yaw).transpose() * (global - vru_state.pose.position());
}

Point2 from_object_frame(const Point2 & object, const TrajectoryState & vru_state)
{
  return rotation(vru_state.pose.yaw) * object + vru_state.pose.position();
}

namespace
{

void bin_scan(SignatureGrid & grid, const LabeledScan & scan, const StateProvider & reference)
{
  const TrajectoryState state = reference ? reference(scan) : scan.vru_state;
  for (const auto & a : scan.assigned) {
    grid.add(to_object_frame(a.global, state));
  }
}

}  // namespace

SignatureGrid accumulate(
  std::span<const LabeledScan> scans, const SignatureParams & params,
  const StateProvider & reference)
{
  const SignatureGrid empty(params.resolution, params.half_extent_x, params.half_extent_y);
  std::vector<SignatureGrid> partial(static_cast<std::size_t>(omp_get_max_threads()), empty);
  const auto n = static_cast<std::ptrdiff_t>(scans.size());

#pragma omp parallel
  {
    SignatureGrid & mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      bin_scan(mine, scans[i], reference);
    }
  }

  SignatureGrid out = empty;
  for (const auto & g : partial) {
    out.merge(g);
  }
  return out;
}

namespace serial
{

SignatureGrid accumulate(
  std::span<const LabeledScan> scans, const SignatureParams & params,
  const StateProvider & reference)
{
  SignatureGrid out(params.resolution, params.half_extent_x, params.half_extent_y);
  for (const auto & scan : scans) {
    bin_scan(out, scan, reference);
  }
  return out;
}

}  // namespace serial

GridStats grid_stats(const SignatureGrid & grid)
{
  if (grid.total() == 0) {
    throw UsageError("grid_stats: empty grid");
  }
  GridStats s;
  std::uint64_t peak = 0;
  Point2 sum = Point2::Zero();
  for (int iy = 0; iy < grid.cells_y(); ++iy) {
    for (int ix = 0; ix < grid.cells_x(); ++ix) {
      const auto c = grid.count(ix, iy);
      if (c > peak) {
        peak = c;
        s.peak_ix = ix;
        s.peak_iy = iy;
      }
      sum += static_cast<double>(c) * grid.cell_center(ix, iy);
    }
  }
  const double total = static_cast<double>(grid.total());
  s.peak_center = grid.cell_center(s.peak_ix, s.peak_iy);
  s.centroid = sum / total;

  Matrix2 cov = Matrix2::Zero();
  for (int iy = 0; iy < grid.cells_y(); ++iy) {
    for (int ix = 0; ix < grid.cells_x(); ++ix) {
      const auto c = grid.count(ix, iy);
      if (c != 0) {
        const Point2 d = grid.cell_center(ix, iy) - s.centroid;
        cov += static_cast<double>(c) * d * d.transpose();
      }
    }
  }
  s.covariance = cov / total;

  Eigen::SelfAdjointEigenSolver<Matrix2> eig(s.covariance);
  // Eigenvalues ascending.
  s.minor_sigma = std::sqrt(std::max(0.0, eig.eigenvalues()(0)));
  s.major_sigma = std::sqrt(std::max(0.0, eig.eigenvalues()(1)));
  const Point2 major = eig.eigenvectors().col(1);
  s.major_direction = fold_axis_angle(std::atan2(major.y(), major.x()));
  return s;
}

void write_pgm(std::ostream & os, const SignatureGrid & grid)
{
  std::uint64_t peak = 0;
  for (int iy = 0; iy < grid.cells_y(); ++iy) {
    for (int ix = 0; ix < grid.cells_x(); ++ix) {
      peak = std::max(peak, grid.count(ix, iy));
    }
  }
  os << "P2\n# " << kFormatTag << "\n" << grid.cells_x() << ' ' << grid.cells_y() << "\n255\n";
  for (int iy = grid.cells_y() - 1; iy >= 0; --iy) {
    for (int ix = 0; ix < grid.cells_x(); ++ix) {
      const auto c = grid.count(ix, iy);
      const auto level = peak == 0 ? 0 : (c * 255 + peak / 2) / peak;
      os << level << (ix + 1 == grid.cells_x() ? '\n' : ' ');
    }
  }
}

void write_csv(std::ostream & os, const SignatureGrid & grid)
{
  os << "# " << kFormatTag << "\n";
  os << "x,y,count\n";
  for (int iy = 0; iy < grid.cells_y(); ++iy) {
    for (int ix = 0; ix < grid.cells_x(); ++ix) {
      const Point2 c = grid.cell_center(ix, iy);
      os << fmt::format("{:.4f},{:.4f},{}\n", c.x(), c.y(), grid.count(ix, iy));
    }
  }
}

}  // namespace vruref
