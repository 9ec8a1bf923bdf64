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

namespace casimir {

/// Plate at V1, sphere at V2 (residual potential when the plate is grounded).
struct ElectrostaticConfig {
  double radius = 100.85e-6;  // m
  double v1 = 0.0;             // V, plate
  double v2 = 7.9e-3;          // V, sphere
  double series_tol = 1e-9;
  std::size_t max_terms = 1000000;

  void validate() const;
  double voltage_difference() const noexcept { return v1 - v2; }
};

/// alpha = acosh(1 + z/R), via log1p so small z/R keeps full precision.
double alpha(double z, double R);

struct SeriesResult {
  double force;        // N, attractive negative
  std::size_t terms;   // terms summed
  double tail_bound;   // bound on |sum of omitted terms| relative to |partial sum|
};

/// 2 pi eps0 (V1 - V2)^2 sum_n csch(n a) [coth a - n coth(n a)]. Summed until
/// both the last term and the geometric tail bound fall below series_tol
/// relative to the partial sum; throws ConvergenceError at max_terms.
SeriesResult sphere_plane_force_exact_detailed(double z, const ElectrostaticConfig& cfg);
double sphere_plane_force_exact(double z, const ElectrostaticConfig& cfg);

/// -pi eps0 R (V1 - V2)^2 / z. Throws ValidityError when z/R >= 0.05.
double sphere_plane_force_pfa(double z, const ElectrostaticConfig& cfg);

}  // namespace casimir
