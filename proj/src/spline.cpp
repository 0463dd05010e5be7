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

#include "vruref/spline.hpp"

#include "vruref/core.hpp"

#include <algorithm>

namespace vruref
{

NaturalCubicSpline::NaturalCubicSpline(
  std::span<const double> knots, std::span<const double> values)
: knots_(knots.begin(), knots.end()), values_(values.begin(), values.end())
{
  const std::size_t n = knots_.size();
  if (n != values_.size()) {
    throw UsageError("spline: knot and value counts differ");
  }
  if (n < 2) {
    throw UsageError("spline: need at least two knots");
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(knots_[i] > knots_[i - 1])) {
      throw UsageError("spline: knots must be strictly increasing");
    }
  }

  m_.assign(n, 0.0);
  if (n == 2) {
    return;
  }

  // Tridiagonal system for the interior second derivatives, Thomas algorithm.
  const std::size_t k = n - 2;
  std::vector<double> diag(k), upper(k), rhs(k);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double h0 = knots_[i] - knots_[i - 1];
    const double h1 = knots_[i + 1] - knots_[i];
    diag[i - 1] = 2.0 * (h0 + h1);
    upper[i - 1] = h1;
    rhs[i - 1] =
      6.0 * ((values_[i + 1] - values_[i]) / h1 - (values_[i] - values_[i - 1]) / h0);
  }
  for (std::size_t i = 1; i < k; ++i) {
    const double lower = knots_[i + 1] - knots_[i];  // h_i, symmetric system
    const double w = lower / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[k] = rhs[k - 1] / diag[k - 1];
  for (std::size_t i = k - 1; i >= 1; --i) {
    m_[i] = (rhs[i - 1] - upper[i - 1] * m_[i + 1]) / diag[i - 1];
  }
}

std::size_t NaturalCubicSpline::segment(double t) const
{
  auto it = std::upper_bound(knots_.begin(), knots_.end(), t);
  if (it == knots_.begin()) {
    return 0;
  }
  const auto idx = static_cast<std::size_t>(it - knots_.begin()) - 1;
  return std::min(idx, knots_.size() - 2);
}

double NaturalCubicSpline::value(double t) const
{
  const std::size_t i = segment(t);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = (t - knots_[i]) / h;
  return a * values_[i] + b * values_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

double NaturalCubicSpline::derivative(double t) const
{
  const std::size_t i = segment(t);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = (t - knots_[i]) / h;
  return (values_[i + 1] - values_[i]) / h -
         (3.0 * a * a - 1.0) / 6.0 * h * m_[i] + (3.0 * b * b - 1.0) / 6.0 * h * m_[i + 1];
}

double NaturalCubicSpline::second_derivative(double t) const
{
  const std::size_t i = segment(t);
  const double h = knots_[i + 1] - knots_[i];
  const double a = (knots_[i + 1] - t) / h;
  const double b = (t - knots_[i]) / h;
  return a * m_[i] + b * m_[i + 1];
}

}  // namespace vruref
