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

#include <cstddef>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace casimir {

enum class Observable {
  signal,  // photodiode difference, dimensionless
  force,   // N
};

/// One approach scan. `piezo` is the plate coordinate in m, strictly
/// increasing; larger values mean the surfaces are further apart. Once a curve
/// is contact-referenced, piezo is the separation measured from contact.
struct ForceCurve {
  std::string scan_id;
  double applied_voltage = 0.0;  // V on the plate
  std::vector<double> piezo;     // m
  Observable observable = Observable::force;
  std::vector<double> values;    // signal units or N
  std::optional<double> spring_constant;  // N/m, from file metadata
  std::optional<double> temperature;      // K, from file metadata
  std::map<std::string, std::string> metadata;  // other `# key=value` lines
  std::vector<std::string> corrections;         // transforms applied, in order

  std::size_t size() const noexcept { return piezo.size(); }
  bool has_force() const noexcept { return observable == Observable::force; }

  /// Throws StateError unless the curve is force-valued.
  const std::vector<double>& force() const;

  /// Length >= 10, matching sizes, piezo strictly increasing, finite values.
  void validate() const;
};

struct CalibrationParams {
  double spring_constant = 0.0169;        // N/m
  double deflection_sensitivity = 1e-9;   // m of deflection per signal unit
  std::vector<double> hysteresis_poly{0.0, 1.0};  // commanded m -> true m, ascending powers
  double residual_potential = 7.9e-3;     // V
  double temperature = 300.0;             // K

  void validate() const;
  double hysteresis(double commanded) const;
};

/// Hooke's law: deflection = signal * sensitivity, F = k * deflection
/// (negative deflection is attraction). Throws StateError on a force curve.
ForceCurve signal_to_force(const ForceCurve& curve, const CalibrationParams& cal);

/// piezo -> hysteresis(piezo) + F/k. Attraction bends the cantilever toward the
/// plate and shortens the true gap. Throws CalibrationError if either step
/// leaves the axis non-monotone.
ForceCurve correct_separation_axis(const ForceCurve& curve, const CalibrationParams& cal);

/// Half-open index range [begin, end).
struct IndexRange {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t size() const noexcept { return end - begin; }
  bool empty() const noexcept { return end == begin; }
};

struct RegionOptions {
  double region2_lo = 16e-9;   // m beyond contact
  double region2_hi = 516e-9;  // m beyond contact
  std::size_t window = 7;      // samples per local-slope window
  double slope_factor = 5.0;   // flexing slope vs baseline noise slope
  double baseline_fraction = 0.25;
};

/// Region 1: flexing plus the snap-in band up to contact + region2_lo.
/// Region 2: (contact + region2_lo, contact + region2_hi]. Region 3: beyond.
struct RegionBounds {
  std::size_t contact_index = 0;  // first sample at or beyond contact
  double contact_piezo = 0.0;     // m
  IndexRange region1;
  IndexRange region2;
  IndexRange region3;
};

/// Partition by piezo distance from a known contact position.
RegionBounds regions_from_contact(const ForceCurve& curve, double contact_piezo, const RegionOptions& opt = {});

/// Locate contact as the intersection of the least-squares line through the
/// post-contact flexing segment with the far-field baseline, then partition.
/// Throws SegmentationError when no flexing segment is present.
RegionBounds segment_regions(const ForceCurve& curve, const RegionOptions& opt = {});

/// Sub-curve over an index range (metadata kept).
ForceCurve slice(const ForceCurve& curve, IndexRange r);

/// Linear interpolation onto `nodes` (must lie inside the curve's piezo span).
std::vector<double> interpolate_linear(const std::vector<double>& x, const std::vector<double>& y,
                                       const std::vector<double>& nodes);

}  // namespace casimir
