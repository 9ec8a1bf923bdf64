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

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

namespace casimir {

struct OpticalPoint {
  double energy_ev;
  double eps2;  // imaginary part of the permittivity on the real axis
};

/// Tabulated eps''(omega). Energies strictly increasing, eps2 >= 0, at least two points.
class OpticalTable {
 public:
  OpticalTable(std::vector<OpticalPoint> points, std::string material_label = {});

  const std::vector<OpticalPoint>& points() const noexcept { return points_; }
  const std::string& material_label() const noexcept { return label_; }
  double min_energy_ev() const noexcept { return points_.front().energy_ev; }
  double max_energy_ev() const noexcept { return points_.back().energy_ev; }

  /// eps'' at `energy_ev` inside the table range; log-log interpolation where
  /// both neighbours are positive, linear otherwise.
  double eps2_at(double energy_ev) const;

 private:
  std::vector<OpticalPoint> points_;
  std::string label_;
};

/// Parse the optical-table CSV dialect: `#` comment lines, optional
/// `# material=<label>`, then `energy_ev,eps2` rows. Throws ParseError with
/// the offending line number.
OpticalTable load_optical_table(std::istream& in);
OpticalTable load_optical_table_file(const std::string& path);

/// Free-electron parameters, both as angular frequencies (rad/s).
struct DrudeParams {
  double omega_p;
  double gamma;

  static DrudeParams from_ev(double plasma_ev, double gamma_ev);
  /// hbar*omega_p = 12.398 eV (plasma wavelength 100 nm), hbar*gamma = 63 meV.
  static DrudeParams aluminum();
};

/// 1 + omega_p^2 / (xi^2 + gamma xi). Throws DomainError unless xi > 0.
double drude_eps_imag_axis(double xi, const DrudeParams& d);

/// Drude eps''(omega) = omega_p^2 gamma / (omega (omega^2 + gamma^2)).
double drude_eps2(double omega, const DrudeParams& d);

enum class HighEnergyTail {
  inverse_cube,  // eps'' continued as (E_last / E)^3 beyond the table
  none,          // spectrum truncated at the last table point
};

struct TabulatedWithDrudeTail {
  std::shared_ptr<const OpticalTable> table;
  DrudeParams drude;
  double crossover_ev = 0.04;
  int subdivisions = 4;  // log-uniform trapezoid panels per table interval
  HighEnergyTail tail = HighEnergyTail::inverse_cube;

  // Trapezoid nodes in ln(E) above the crossover: (E^2, weight * E^2 * eps''),
  // so the table contribution at x = hbar xi is sum_j c_j / (E_j^2 + x^2).
  struct Node {
    double e2;
    double c;
  };
  std::shared_ptr<const std::vector<Node>> nodes;
};

struct DrudeOnly {
  DrudeParams drude;
};

struct ConstantPermittivity {
  double eps;
};

/// Rule producing eps(i xi). Immutable after construction.
class DielectricModel {
 public:
  using Variant = std::variant<TabulatedWithDrudeTail, DrudeOnly, ConstantPermittivity>;

  static DielectricModel tabulated(std::shared_ptr<const OpticalTable> table, DrudeParams drude,
                                   double crossover_ev = 0.04, int subdivisions = 4,
                                   HighEnergyTail tail = HighEnergyTail::inverse_cube);
  static DielectricModel drude(DrudeParams drude);
  static DielectricModel constant(double eps);

  const Variant& variant() const noexcept { return v_; }
  std::string describe() const;

 private:
  explicit DielectricModel(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

/// eps(i xi) for xi in rad/s. Throws DomainError unless xi > 0.
double eps_imag_axis(const DielectricModel& model, double xi);

/// eps(i xi) = 1 + (2/pi) int_0^inf omega eps''(omega) / (omega^2 + xi^2) d omega,
/// evaluated by adaptive quadrature in ln(omega) over [1e-9 xi, 1e9 xi].
/// `eps2` takes omega in rad/s.
double dispersion_integral(const std::function<double(double)>& eps2, double xi,
                           double rel_tol = 1e-10);

/// Thread-safe memo of eps(i xi) keyed on the exact bit pattern of xi.
/// Concurrent fills of the same key store the same value.
class EpsilonCache {
 public:
  explicit EpsilonCache(DielectricModel model) : model_(std::move(model)) {}

  double operator()(double xi) const;
  const DielectricModel& model() const noexcept { return model_; }
  std::size_t size() const;

 private:
  DielectricModel model_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<std::uint64_t, double> values_;
};

}  // namespace casimir
