// Copyright 2026 The casimir-twin Authors
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

#include "casimir/theory_curve.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>

#include "casimir/errors.hpp"

namespace casimir {

struct TheoryCurve::Spline {
  boost::math::interpolators::cardinal_cubic_b_spline<double> impl;
};

TheoryCurve::TheoryCurve(const TheoryParams& params, Range range, unsigned threads)
    : range_(range), cap_offset_(params.cap_offset) {
  params.validate();
  if (!(range.s_min > 0.0 && range.s_max > range.s_min) || range.nodes < 8)
    throw DomainError("invalid theory curve range");
  const double u0 = std::log(range.s_min);
  const double h = (std::log(range.s_max) - u0) / static_cast<double>(range.nodes - 1);
  s_.resize(range.nodes);
  for (std::size_t i = 0; i < range.nodes; ++i) s_[i] = std::exp(u0 + h * static_cast<double>(i));
  s_.back() = range.s_max;

  f_ = casimir_force_grid(s_, params.geom, params.model, params.quad, threads);
  for (std::size_t i = 0; i < s_.size(); ++i) f_[i] *= correction_factor(s_[i], params);

  std::vector<double> y(f_.size());
  for (std::size_t i = 0; i < f_.size(); ++i) {
    if (!(f_[i] < 0.0)) log_mode_ = false;
  }
  for (std::size_t i = 0; i < f_.size(); ++i) y[i] = log_mode_ ? std::log(-f_[i]) : f_[i];
  spline_ = std::make_shared<const Spline>(
      Spline{boost::math::interpolators::cardinal_cubic_b_spline<double>(y.begin(), y.end(), u0, h)});
}

double TheoryCurve::at_separation(double s) const {
  // Half-ulp slack at the ends so nodes themselves are always accepted.
  if (!(s >= range_.s_min * (1.0 - 1e-12) && s <= range_.s_max * (1.0 + 1e-12)))
    throw DomainError("separation outside the tabulated theory range");
  const double u = std::log(std::clamp(s, range_.s_min, range_.s_max));
  const double v = spline_->impl(u);
  return log_mode_ ? -std::exp(v) : v;
}

}  // namespace casimir
