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

#ifndef VRUREF__SIGNATURE_HPP_
#define VRUREF__SIGNATURE_HPP_

#include "vruref/annotation.hpp"
#include "vruref/core.hpp"
#include "vruref/trajectory.hpp"

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace vruref
{

/// Object-centred 2D histogram of detections. Row-major, x is the movement
/// direction. Cell (ix, iy) spans [-half_x + ix res, -half_x + (ix + 1) res).
class SignatureGrid
{
public:
  SignatureGrid(double resolution, double half_extent_x, double half_extent_y);

  void add(const Point2 & object_point);
  /// Element-wise sum. Throws UsageError on a geometry mismatch.
  void merge(const SignatureGrid & other);

  double resolution() const { return resolution_; }
  double half_extent_x() const { return half_x_; }
  double half_extent_y() const { return half_y_; }
  int cells_x() const { return nx_; }
  int cells_y() const { return ny_; }
  std::uint64_t count(int ix, int iy) const { return counts_[index(ix, iy)]; }
  Point2 cell_center(int ix, int iy) const;
  std::uint64_t total() const { return total_; }
  std::uint64_t overflow() const { return overflow_; }

  bool operator==(const SignatureGrid &) const = default;

private:
  std::size_t index(int ix, int iy) const
  {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(nx_) +
           static_cast<std::size_t>(ix);
  }

  double resolution_;
  double half_x_;
  double half_y_;
  int nx_;
  int ny_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_{0};
  std::uint64_t overflow_{0};
};

struct SignatureParams
{
  double resolution{0.05};
  double half_extent_x{2.5};
  double half_extent_y{1.5};
};

/// Global point into the VRU frame: translate by -centre, rotate by -yaw.
Point2 to_object_frame(const Point2 & global, const TrajectoryState & vru_state);
Point2 from_object_frame(const Point2 & object, const TrajectoryState & vru_state);

/// Reference state per scan; defaults to LabeledScan::vru_state.
using StateProvider = std::function<TrajectoryState(const LabeledScan &)>;

/// Bins all assigned detections. Partial grids are built per thread and merged.
SignatureGrid accumulate(
  std::span<const LabeledScan> scans, const SignatureParams & params = {},
  const StateProvider & reference = {});

namespace serial
{
SignatureGrid accumulate(
  std::span<const LabeledScan> scans, const SignatureParams & params = {},
  const StateProvider & reference = {});
}  // namespace serial

struct GridStats
{
  int peak_ix{0};
  int peak_iy{0};
  Point2 peak_center{0.0, 0.0};
  Point2 centroid{0.0, 0.0};
  Matrix2 covariance{Matrix2::Zero()};
  double major_sigma{0.0};
  double minor_sigma{0.0};
  double major_direction{0.0};  // folded into (-pi/2, pi/2]
};

/// Throws UsageError on an empty grid.
GridStats grid_stats(const SignatureGrid & grid);

/// Plain-text PGM (P2), counts scaled to 0..255, +y up.
void write_pgm(std::ostream & os, const SignatureGrid & grid);
/// CSV of cell-centre x, y and raw count for every cell.
void write_csv(std::ostream & os, const SignatureGrid & grid);

}  // namespace vruref

#endif  // VRUREF__SIGNATURE_HPP_
