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

#include "casimir/constants.hpp"

#include "casimir/errors.hpp"

namespace casimir {

double energy_ev_to_angular_frequency(double energy_ev) {
  if (!(energy_ev >= 0.0)) throw DomainError("photon energy must be non-negative");
  return energy_ev * phys::ev / phys::hbar;
}

double angular_frequency_to_energy_ev(double omega) {
  if (!(omega >= 0.0)) throw DomainError("angular frequency must be non-negative");
  return omega * phys::hbar / phys::ev;
}

double plasma_energy_from_wavelength(double lambda_m) {
  if (!(lambda_m > 0.0)) throw DomainError("wavelength must be positive");
  return phys::planck_h * phys::c / lambda_m / phys::ev;
}

}  // namespace casimir
