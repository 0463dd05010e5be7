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

#ifndef VRUREF__SPLINE_HPP_
#define VRUREF__SPLINE_HPP_

#include <span>
#include <vector>

namespace vruref
{

/// Natural cubic spline (zero second derivative at both ends) through
/// strictly increasing knots.
class NaturalCubicSpline
{
public:
  NaturalCubicSpline() = default;
  NaturalCubicSpline(std::span<const double> knots, std::span<const double> values);

  double value(double t) const;
  double derivative(double t) const;
  double second_derivative(double t) const;

  double front() const { return knots_.front(); }
  double back() const { return knots_.back(); }
  std::size_t size() const { return knots_.size(); }

private:
  std::size_t segment(double t) const;

  std::vector<double> knots_;
  std::vector<double> values_;
  std::vector<double> m_;  // second derivatives at the knots
};

}  // namespace vruref

#endif  // VRUREF__SPLINE_HPP_
