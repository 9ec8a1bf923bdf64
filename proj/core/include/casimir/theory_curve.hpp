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

#pragma once

#include <memory>
#include <vector>

#include "casimir/corrections.hpp"

namespace casimir {

/// theoretical_force tabulated once on a log-uniform grid of Al-Al separations
/// and interpolated by a cubic B-spline of ln|F| against ln s. The fits call
/// the theory thousands of times; this keeps each call O(1).
class TheoryCurve {
 public:
  struct Range {
    double s_min = 40e-9;    // m
    double s_max = 3500e-9;  // m
    std::size_t nodes = 241;
  };

  TheoryCurve(const TheoryParams& params, Range range, unsigned threads = 0);
  explicit TheoryCurve(const TheoryParams& params) : TheoryCurve(params, Range{}) {}

  /// Force at Al-Al separation s (m). Throws DomainError outside the range.
  double at_separation(double s) const;
  /// Force at outer-surface gap z_gap, i.e. at_separation(z_gap + cap_offset).
  double at_gap(double z_gap) const { return at_separation(z_gap + cap_offset_); }

  double cap_offset() const noexcept { return cap_offset_; }
  const Range& range() const noexcept { return range_; }
  const std::vector<double>& node_separations() const noexcept { return s_; }
  const std::vector<double>& node_forces() const noexcept { return f_; }

 private:
  struct Spline;
  Range range_;
  double cap_offset_;
  std::vector<double> s_;
  std::vector<double> f_;
  bool log_mode_ = true;
  std::shared_ptr<const Spline> spline_;
};

}  // namespace casimir
