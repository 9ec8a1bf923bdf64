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

#include <span>
#include <vector>

#include "casimir/dielectric.hpp"

namespace casimir {

struct SphereGeometry {
  double radius;  // m

  /// 201.7 um diameter sphere.
  static SphereGeometry reference() { return {100.85e-6}; }
};

/// Proximity-regime limit enforced on every sphere-plate operation.
inline constexpr double kMaxGapOverRadius = 0.05;

/// Controls for the nested xi/p integration. The xi axis (as t = 2 xi z / c)
/// is cut at xi_cut_multiplier, the p axis (as u = p t) at p_cut; both are
/// bounded because the kernel decays like exp(-u).
struct QuadratureParams {
  double rel_tol = 1e-7;
  double abs_tol = 1e-24;  // N
  unsigned max_refinements = 15;  // bisection depth of each adaptive rule
  double xi_cut_multiplier = 60.0;
  double p_cut = 60.0;

  void validate() const;
};

/// s = sqrt(eps - 1 + p^2) with the two Fresnel coefficients at imaginary frequency.
struct ReflectionTerms {
  double s;
  double r_te;  // (s - p) / (s + p)
  double r_tm;  // (s - eps p) / (s + eps p)
};

ReflectionTerms reflection_terms(double eps, double p);

struct LifshitzResult {
  double force;           // N, attractive negative
  double error_estimate;  // N, reported by the outer rule
};

/// Lifshitz sphere-plate force at separation z (m). Throws GeometryError when
/// z/R >= 0.05 and ConvergenceError when the rules exhaust max_refinements.
LifshitzResult casimir_force_sphere_plate_detailed(double z, const SphereGeometry& geom,
                                                   const DielectricModel& model,
                                                   const QuadratureParams& q = {});

double casimir_force_sphere_plate(double z, const SphereGeometry& geom, const DielectricModel& model,
                                  const QuadratureParams& q = {});

/// Parallel sweep over a separation grid; bitwise identical to the serial loop.
/// threads == 0 picks hardware concurrency.
std::vector<double> casimir_force_grid(std::span<const double> z, const SphereGeometry& geom,
                                       const DielectricModel& model, const QuadratureParams& q = {},
                                       unsigned threads = 0);

/// -pi^3 hbar c R / (360 z^3).
double ideal_casimir_sphere_plate(double z, const SphereGeometry& geom);

/// -pi^2 hbar c / (240 z^4), pressure in N/m^2.
double ideal_casimir_parallel_plates(double z);

}  // namespace casimir
