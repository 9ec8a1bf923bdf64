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

#include <vector>

#include "casimir/dielectric.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

struct HeightLevel {
  double height;       // m, relative to the surface mean
  double probability;  // fractional surface area
};

/// Zero-mean surface-height distribution; probabilities sum to one.
using HeightDistribution = std::vector<HeightLevel>;

/// Multiplicative roughness correction 1 + c2 (A/z)^2 + c3 (A/z)^3 + c4 (A/z)^4.
struct RoughnessSpec {
  double amplitude = 11.8e-9;  // effective height A, m
  double c2 = 0.86;
  double c3 = 1.02;
  double c4 = 1.9;
  HeightDistribution distribution;  // optional; used only by the averaging oracle

  void validate() const;
};

/// Crystals of 14 nm and 7 nm on a 2 nm background (area fractions 0.05,
/// 0.11, 0.84), shifted so the mean height is zero.
HeightDistribution measured_aluminum_heights();

/// Check probabilities sum to 1 and the mean height is zero (both to 1e-12).
void validate_distribution(const HeightDistribution& d);

/// Throws ValidityError when A/z >= 0.3.
double roughness_factor(double z, const RoughnessSpec& rough);

/// sum_ij p_i q_j (1 - (h_i + k_j)/z)^-3: the z^-3 law averaged over
/// independent height offsets of the two surfaces.
double roughness_factor_from_distribution(double z, const HeightDistribution& plate,
                                          const HeightDistribution& sphere);

/// Same distribution on both surfaces.
double roughness_factor_from_distribution(double z, const HeightDistribution& both);

struct TemperatureParams {
  double temperature = 300.0;  // K

  /// eta = 2 pi kB T z / (h c).
  double eta(double z) const;
};

/// 1 + (720/pi^2) f(eta), f = zeta(3) eta^3 / (2 pi) - pi^2 eta^4 / 45.
/// Throws ValidityError when eta >= 0.5.
double temperature_factor(double z, const TemperatureParams& temp);

struct CorrectionToggles {
  bool roughness = true;
  bool temperature = true;
};

/// Everything that defines the theoretical force; no adjustable parameters.
struct TheoryParams {
  SphereGeometry geom = SphereGeometry::reference();
  DielectricModel model = DielectricModel::drude(DrudeParams::aluminum());
  RoughnessSpec rough;
  TemperatureParams temp;
  double cap_offset = 15.8e-9;  // two 7.9 nm transparent Au/Pd layers, m
  QuadratureParams quad;
  CorrectionToggles toggles;

  void validate() const;
};

/// Theory at the outer-surface gap z_gap: Lifshitz, roughness and temperature
/// all evaluated at the Al-Al separation z_gap + cap_offset.
double theoretical_force(double z_gap, const TheoryParams& params);

/// The correction multipliers alone at Al-Al separation `s`.
double correction_factor(double s, const TheoryParams& params);

}  // namespace casimir
