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

#include "casimir/dielectric.hpp"

#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {
namespace {

constexpr double pi = std::numbers::pi;

// int_0^ec d e / ((e^2 + g^2)(e^2 + x^2)) times wp^2 g, in eV units.
double drude_segment(double wp, double g, double x, double ec) {
  const double den = x * x - g * g;
  if (std::abs(den) > 1e-6 * x * x) {
    return wp * wp * (std::atan(ec / g) - g * std::atan(ec / x) / x) / den;
  }
  // x ~ gamma: the partial-fraction form cancels; integrate directly.
  auto f = [&](double e) { return 1.0 / ((e * e + g * g) * (e * e + x * x)); };
  return wp * wp * g * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, 0.0, ec, 15, 1e-13);
}

// int_a^inf d e / (e^2 (e^2 + x^2)).
double inverse_cube_tail(double a, double x) {
  const double r = x / a;
  if (r < 1e-2) {
    const double r2 = r * r;
    return (1.0 / 3.0 - r2 / 5.0 + r2 * r2 / 7.0 - r2 * r2 * r2 / 9.0) / (a * a * a);
  }
  return (1.0 / a - std::atan(r) / x) / (x * x);
}

// Trapezoid in ln(E) of E^2 eps''(E) / (E^2 + x^2) from the crossover to the
// last table point. Each table interval is split into `subdivisions`
// log-uniform panels with eps'' interpolated in between.
std::vector<TabulatedWithDrudeTail::Node> build_nodes(const OpticalTable& t, double e_lo, int subdivisions) {
  std::vector<double> es{e_lo};
  std::vector<double> vs{t.eps2_at(e_lo)};
  double prev = e_lo;
  for (const auto& p : t.points()) {
    if (p.energy_ev <= e_lo) continue;
    const double ratio = std::log(p.energy_ev / prev);
    for (int k = 1; k < subdivisions; ++k) {
      const double e = prev * std::exp(ratio * k / subdivisions);
      es.push_back(e);
      vs.push_back(t.eps2_at(e));
    }
    es.push_back(p.energy_ev);
    vs.push_back(p.eps2);
    prev = p.energy_ev;
  }
  std::vector<TabulatedWithDrudeTail::Node> nodes(es.size());
  for (std::size_t j = 0; j < es.size(); ++j) {
    const double left = j > 0 ? std::log(es[j] / es[j - 1]) : 0.0;
    const double right = j + 1 < es.size() ? std::log(es[j + 1] / es[j]) : 0.0;
    const double e2 = es[j] * es[j];
    nodes[j] = {e2, 0.5 * (left + right) * e2 * vs[j]};
  }
  return nodes;
}

double tabulated_eps(const TabulatedWithDrudeTail& m, double xi) {
  const double x = angular_frequency_to_energy_ev(xi);
  const double wp = angular_frequency_to_energy_ev(m.drude.omega_p);
  const double g = angular_frequency_to_energy_ev(m.drude.gamma);
  double integral = drude_segment(wp, g, x, m.crossover_ev);
  const double x2 = x * x;
  double table_part = 0.0;
  for (const auto& n : *m.nodes) table_part += n.c / (n.e2 + x2);
  integral += table_part;
  if (m.tail == HighEnergyTail::inverse_cube) {
    const auto& last = m.table->points().back();
    const double a = last.energy_ev;
    integral += last.eps2 * a * a * a * inverse_cube_tail(a, x);
  }
  return 1.0 + 2.0 / pi * integral;
}

}  // namespace

DrudeParams DrudeParams::from_ev(double plasma_ev, double gamma_ev) {
  if (!(plasma_ev > 0.0)) throw DomainError("plasma energy must be positive");
  if (!(gamma_ev >= 0.0)) throw DomainError("relaxation energy must be non-negative");
  return {energy_ev_to_angular_frequency(plasma_ev), energy_ev_to_angular_frequency(gamma_ev)};
}

DrudeParams DrudeParams::aluminum() {
  return from_ev(plasma_energy_from_wavelength(100e-9), 0.063);
}

double drude_eps_imag_axis(double xi, const DrudeParams& d) {
  if (!(xi > 0.0)) throw DomainError("imaginary frequency must be positive");
  return 1.0 + d.omega_p * d.omega_p / (xi * xi + d.gamma * xi);
}

double drude_eps2(double omega, const DrudeParams& d) {
  if (!(omega > 0.0)) throw DomainError("real frequency must be positive");
  return d.omega_p * d.omega_p * d.gamma / (omega * (omega * omega + d.gamma * d.gamma));
}

DielectricModel DielectricModel::tabulated(std::shared_ptr<const OpticalTable> table, DrudeParams drude,
                                           double crossover_ev, int subdivisions, HighEnergyTail tail) {
  if (!table) throw DomainError("tabulated model needs a table");
  if (!(drude.omega_p > 0.0) || !(drude.gamma >= 0.0)) throw DomainError("invalid Drude parameters");
  if (!(crossover_ev >= table->min_energy_ev() && crossover_ev < table->max_energy_ev()))
    throw DomainError("crossover energy must lie inside the table range");
  if (subdivisions < 1) throw DomainError("subdivisions must be >= 1");
  auto nodes = std::make_shared<const std::vector<TabulatedWithDrudeTail::Node>>(
      build_nodes(*table, crossover_ev, subdivisions));
  return DielectricModel(
      TabulatedWithDrudeTail{std::move(table), drude, crossover_ev, subdivisions, tail, std::move(nodes)});
}

DielectricModel DielectricModel::drude(DrudeParams d) {
  if (!(d.omega_p > 0.0) || !(d.gamma >= 0.0)) throw DomainError("invalid Drude parameters");
  return DielectricModel(DrudeOnly{d});
}

DielectricModel DielectricModel::constant(double eps) {
  if (!(eps >= 1.0)) throw DomainError("constant permittivity must be >= 1");
  return DielectricModel(ConstantPermittivity{eps});
}

std::string DielectricModel::describe() const {
  std::ostringstream os;
  os.precision(9);
  struct V {
    std::ostringstream& os;
    void operator()(const TabulatedWithDrudeTail& m) const {
      os << "tabulated(" << (m.table->material_label().empty() ? "unlabelled" : m.table->material_label())
         << ", points=" << m.table->points().size() << ", crossover_ev=" << m.crossover_ev
         << ", tail=" << (m.tail == HighEnergyTail::inverse_cube ? "inverse_cube" : "none") << ")";
    }
    void operator()(const DrudeOnly& m) const {
      os << "drude(plasma_ev=" << angular_frequency_to_energy_ev(m.drude.omega_p)
         << ", gamma_ev=" << angular_frequency_to_energy_ev(m.drude.gamma) << ")";
    }
    void operator()(const ConstantPermittivity& m) const { os << "constant(" << m.eps << ")"; }
  };
  std::visit(V{os}, v_);
  return os.str();
}

double eps_imag_axis(const DielectricModel& model, double xi) {
  if (!(xi > 0.0)) throw DomainError("imaginary frequency must be positive");
  struct V {
    double xi;
    double operator()(const TabulatedWithDrudeTail& m) const { return tabulated_eps(m, xi); }
    double operator()(const DrudeOnly& m) const { return drude_eps_imag_axis(xi, m.drude); }
    double operator()(const ConstantPermittivity& m) const { return m.eps; }
  };
  return std::visit(V{xi}, model.variant());
}

double dispersion_integral(const std::function<double(double)>& eps2, double xi, double rel_tol) {
  if (!(xi > 0.0)) throw DomainError("imaginary frequency must be positive");
  // omega = xi e^u; d omega = omega du.
  auto f = [&](double u) {
    const double w = xi * std::exp(u);
    return w * w * eps2(w) / (w * w + xi * xi);
  };
  const double span = 9.0 * std::numbers::ln10;
  double total = 0.0;
  // One panel per decade keeps each Kronrod rule on a smooth stretch.
  for (int k = -9; k < 9; ++k) {
    const double a = span * k / 9.0;
    const double b = span * (k + 1) / 9.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, a, b, 20, rel_tol);
  }
  return 1.0 + 2.0 / pi * total;
}

double EpsilonCache::operator()(double xi) const {
  const auto key = std::bit_cast<std::uint64_t>(xi);
  {
    std::shared_lock lock(mutex_);
    if (auto it = values_.find(key); it != values_.end()) return it->second;
  }
  const double v = eps_imag_axis(model_, xi);
  std::unique_lock lock(mutex_);
  values_.emplace(key, v);
  return v;
}

std::size_t EpsilonCache::size() const {
  std::shared_lock lock(mutex_);
  return values_.size();
}

}  // namespace casimir
