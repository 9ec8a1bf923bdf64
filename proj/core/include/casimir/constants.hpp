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

#include <numbers>

namespace casimir {

/// CODATA-2018 values, SI units. Every module reads constants from here.
struct PhysicalConstants {
  static constexpr double planck_h = 6.62607015e-34;   // J s (exact)
  static constexpr double hbar = planck_h / (2.0 * std::numbers::pi);  // 1.054571817e-34 J s
  static constexpr double c = 299792458.0;             // m/s (exact)
  static constexpr double eps0 = 8.8541878128e-12;     // F/m
  static constexpr double kB = 1.380649e-23;           // J/K (exact)
  static constexpr double ev = 1.602176634e-19;        // J per eV (exact)
  static constexpr double zeta3 = 1.2020569031595942;  // Riemann zeta(3)
};

using phys = PhysicalConstants;

/// Angular frequency (rad/s) of a photon of energy `energy_ev`.
/// Throws DomainError for negative energies.
double energy_ev_to_angular_frequency(double energy_ev);

/// Inverse of energy_ev_to_angular_frequency.
double angular_frequency_to_energy_ev(double omega);

/// Photon energy h c / lambda in eV. Throws DomainError unless lambda > 0.
double plasma_energy_from_wavelength(double lambda_m);

}  // namespace casimir
