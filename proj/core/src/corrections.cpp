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

#include "casimir/corrections.hpp"

#include <cmath>
#include <numbers>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {

namespace {
constexpr double kMaxRoughnessRatio = 0.3;
constexpr double kMaxEta = 0.5;
}  // namespace

void RoughnessSpec::validate() const {
  if (!(amplitude >= 0.0)) throw DomainError("roughness amplitude must be non-negative");
  if (!distribution.empty()) validate_distribution(distribution);
}

HeightDistribution measured_aluminum_heights() {
  HeightDistribution d{{14e-9, 0.05}, {7e-9, 0.11}, {2e-9, 0.84}};
  double mean = 0.0;
  for (const auto& l : d) mean += l.height * l.probability;
  for (auto& l : d) l.height -= mean;
  return d;
}

void validate_distribution(const HeightDistribution& d) {
  if (d.empty()) throw DomainError("empty height distribution");
  double total = 0.0;
  double mean = 0.0;
  double scale = 0.0;
  for (const auto& l : d) {
    if (!(l.probability >= 0.0)) throw DomainError("negative probability in height distribution");
    total += l.probability;
    mean += l.height * l.probability;
    scale = std::max(scale, std::abs(l.height));
  }
  if (std::abs(total - 1.0) > 1e-12) throw DomainError("height probabilities must sum to 1");
  if (std::abs(mean) > 1e-12 * std::max(scale, 1e-300)) throw DomainError("height distribution must have zero mean");
}

double roughness_factor(double z, const RoughnessSpec& rough) {
  if (!(z > 0.0)) throw DomainError("separation must be positive");
  const double x = rough.amplitude / z;
  if (!(x < kMaxRoughnessRatio)) throw ValidityError("A/z >= 0.3: roughness series not valid");
  const double x2 = x * x;
  return 1.0 + x2 * (rough.c2 + x * (rough.c3 + x * rough.c4));
}

double roughness_factor_from_distribution(double z, const HeightDistribution& plate,
                                          const HeightDistribution& sphere) {
  if (!(z > 0.0)) throw DomainError("separation must be positive");
  validate_distribution(plate);
  validate_distribution(sphere);
  double sum = 0.0;
  for (const auto& a : plate) {
    for (const auto& b : sphere) {
      const double gap = 1.0 - (a.height + b.height) / z;
      if (!(gap > 0.0)) throw DomainError("surface heights reach the opposite surface");
      sum += a.probability * b.probability / (gap * gap * gap);
    }
  }
  return sum;
}

double roughness_factor_from_distribution(double z, const HeightDistribution& both) {
  return roughness_factor_from_distribution(z, both, both);
}

double TemperatureParams::eta(double z) const {
  return 2.0 * std::numbers::pi * phys::kB * temperature * z / (phys::planck_h * phys::c);
}

double temperature_factor(double z, const TemperatureParams& temp) {
  if (!(z > 0.0)) throw DomainError("separation must be positive");
  if (!(temp.temperature >= 0.0)) throw DomainError("temperature must be non-negative");
  const double eta = temp.eta(z);
  if (!(eta < kMaxEta)) throw ValidityError("eta >= 0.5: temperature series not valid");
  constexpr double pi = std::numbers::pi;
  const double e3 = eta * eta * eta;
  const double f = phys::zeta3 / (2.0 * pi) * e3 - pi * pi / 45.0 * e3 * eta;
  return 1.0 + 720.0 / (pi * pi) * f;
}

void TheoryParams::validate() const {
  if (!(geom.radius > 0.0)) throw DomainError("sphere radius must be positive");
  if (!(cap_offset >= 0.0)) throw DomainError("cap offset must be non-negative");
  if (!(temp.temperature >= 0.0)) throw DomainError("temperature must be non-negative");
  rough.validate();
  quad.validate();
}

double correction_factor(double s, const TheoryParams& params) {
  double f = 1.0;
  if (params.toggles.roughness) f *= roughness_factor(s, params.rough);
  if (params.toggles.temperature) f *= temperature_factor(s, params.temp);
  return f;
}

double theoretical_force(double z_gap, const TheoryParams& params) {
  if (!(z_gap > 0.0)) throw DomainError("gap must be positive");
  const double s = z_gap + params.cap_offset;
  const double bare = casimir_force_sphere_plate(s, params.geom, params.model, params.quad);
  return bare * correction_factor(s, params);
}

}  // namespace casimir
