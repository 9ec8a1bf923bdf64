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

#include "casimir/electrostatics.hpp"

#include <cmath>
#include <numbers>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"

namespace casimir {

void ElectrostaticConfig::validate() const {
  if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
  if (!(series_tol > 0.0 && series_tol <= 1e-6)) throw DomainError("series_tol must lie in (0, 1e-6]");
  if (max_terms < 10) throw DomainError("max_terms must be >= 10");
}

double alpha(double z, double R) {
  if (!(z >= 0.0)) throw DomainError("separation must be non-negative");
  if (!(R > 0.0)) throw DomainError("sphere radius must be positive");
  const double x = z / R;
  return std::log1p(x + std::sqrt(x * x + 2.0 * x));
}

SeriesResult sphere_plane_force_exact_detailed(double z, const ElectrostaticConfig& cfg) {
  cfg.validate();
  if (!(z > 0.0)) throw DomainError("separation must be positive");
  const double dv = cfg.voltage_difference();
  if (dv == 0.0) return {0.0, 0, 0.0};

  const double a = alpha(z, cfg.radius);
  const double coth_a = 1.0 / std::tanh(a);
  const double q = std::exp(-a);
  const double one_minus_q = -std::expm1(-a);

  double sum = 0.0;
  double tail = 0.0;
  for (std::size_t n = 1; n <= cfg.max_terms; ++n) {
    const double x = static_cast<double>(n) * a;
    // csch and coth from e^{-x} so large n*a never overflows.
    const double em = std::exp(-x);
    const double denom = -std::expm1(-2.0 * x);
    const double csch = 2.0 * em / denom;
    const double coth = (1.0 + em * em) / denom;
    const double term = csch * (coth_a - static_cast<double>(n) * coth);
    sum += term;

    // For m > n: |t_m| <= K m q^m with K = 2 coth((n+1)a) / (1 - q^{2(n+1)}).
    const double n1 = static_cast<double>(n + 1);
    const double em1 = std::exp(-n1 * a);
    const double d1 = -std::expm1(-2.0 * n1 * a);
    const double k = 2.0 * (1.0 + em1 * em1) / d1 / d1;
    const double geometric = em1 * (n1 - static_cast<double>(n) * q) / (one_minus_q * one_minus_q);
    tail = k * geometric / std::abs(sum);

    if (std::abs(term) < cfg.series_tol * std::abs(sum) && tail < cfg.series_tol) {
      return {2.0 * std::numbers::pi * phys::eps0 * dv * dv * sum, n, tail};
    }
  }
  throw ConvergenceError("electrostatic series reached max_terms (n=" + std::to_string(cfg.max_terms) +
                             ", relative tail bound " + std::to_string(tail) + ")",
                         2.0 * std::numbers::pi * phys::eps0 * dv * dv * sum, tail);
}

double sphere_plane_force_exact(double z, const ElectrostaticConfig& cfg) {
  return sphere_plane_force_exact_detailed(z, cfg).force;
}

double sphere_plane_force_pfa(double z, const ElectrostaticConfig& cfg) {
  if (!(z > 0.0)) throw DomainError("separation must be positive");
  if (!(cfg.radius > 0.0)) throw DomainError("sphere radius must be positive");
  if (!(z / cfg.radius < kMaxGapOverRadius)) throw ValidityError("proximity form requires z/R < 0.05");
  const double dv = cfg.voltage_difference();
  return -std::numbers::pi * phys::eps0 * cfg.radius * dv * dv / z;
}

}  // namespace casimir
