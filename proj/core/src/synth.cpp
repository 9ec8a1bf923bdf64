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

#include "casimir/synth.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <json.hpp>

#include "casimir/errors.hpp"

namespace casimir {
namespace {

constexpr std::uint64_t kCasimirStream = 0;
constexpr std::uint64_t kElectroStream = 1;
constexpr std::uint64_t kCalibrationStream = 2;

double round9(double v) { return std::stod(fmt::format("{:.9g}", v)); }

ForceCurve make_curve(std::string id, double voltage, const std::vector<double>& z, Observable obs) {
  ForceCurve c;
  c.scan_id = std::move(id);
  c.applied_voltage = voltage;
  c.piezo = z;
  c.observable = obs;
  c.values.assign(z.size(), 0.0);
  return c;
}

ElectrostaticConfig electro_cfg(const SynthTruth& t, double v1) {
  ElectrostaticConfig e;
  e.radius = t.theory.geom.radius;
  e.v1 = v1;
  e.v2 = t.V2_residual;
  return e;
}

void stamp(ForceCurve& c, const SynthTruth& t) {
  c.spring_constant = t.k_true;
  c.temperature = t.theory.temp.temperature;
  c.metadata["seed"] = std::to_string(t.seed);
  c.metadata["source"] = "synth";
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index)
    : engine_(splitmix64(splitmix64(seed) ^ splitmix64((stream << 32) ^ index))) {}

double NoiseStream::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double NoiseStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform();
  while (u1 == 0.0) u1 = uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * std::numbers::pi * u2;
  spare_ = r * std::sin(a);
  has_spare_ = true;
  return r * std::cos(a);
}

void SynthTruth::validate() const {
  if (!(noise_sigma >= 0.0)) throw DomainError("noise_sigma must be >= 0");
  if (!(k_true > 0.0) || !(deflection_sensitivity > 0.0)) throw DomainError("k_true and sensitivity must be positive");
  if (!(z0_true >= 0.0)) throw DomainError("z0_true must be >= 0");
  if (grid.size() < 10) throw DomainError("synthetic grid needs at least 10 nodes");
  for (const auto* g : {&grid, &calibration_grid}) {
    for (std::size_t i = 0; i < g->size(); ++i) {
      if ((*g)[i] <= -z0_true) throw DomainError("grid enters z <= -z0_true");
      if (i > 0 && !((*g)[i] > (*g)[i - 1])) throw DomainError("synthetic grid must be strictly increasing");
    }
  }
  theory.validate();
}

std::vector<double> aligned_grid(double z0, double cap_offset, const AnalysisConfig& acfg, double z_min,
                                 double z_max) {
  const double h = (acfg.window_hi - acfg.window_lo) / static_cast<double>(acfg.window_nodes - 1);
  const double off = z0 + cap_offset;
  const auto k_lo = static_cast<long long>(std::ceil((z_min + off - acfg.window_lo) / h - 1e-9));
  const auto k_hi = static_cast<long long>(std::floor((z_max + off - acfg.window_lo) / h + 1e-9));
  std::vector<double> z;
  for (long long k = k_lo; k <= k_hi; ++k) z.push_back(acfg.window_lo + h * static_cast<double>(k) - off);
  return z;
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  if (n < 2 || !(hi > lo)) throw DomainError("invalid uniform grid");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  g.back() = hi;
  return g;
}

SynthTruth default_truth(const AnalysisConfig& acfg) {
  SynthTruth t;
  t.grid = aligned_grid(t.z0_true, t.theory.cap_offset, acfg);
  t.calibration_grid = uniform_grid(2.05e-6, 3e-6, 101);
  return t;
}

std::vector<ForceCurve> generate_scans(const SynthTruth& t, const TheoryCurve& theory) {
  t.validate();
  const auto e = electro_cfg(t, 0.0);
  std::vector<double> model(t.grid.size());
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    const double gap = t.grid[i] + t.z0_true;
    model[i] = theory.at_gap(gap) + electrostatic_force(gap, e, t.electro_model) + t.C_true * t.grid[i];
  }
  std::vector<ForceCurve> out;
  for (std::size_t s = 0; s < t.n_scans; ++s) {
    auto c = make_curve(fmt::format("casimir_{:03d}", s), 0.0, t.grid, Observable::force);
    NoiseStream noise(t.seed, kCasimirStream, s);
    for (std::size_t i = 0; i < model.size(); ++i) c.values[i] = model[i] + t.noise_sigma * noise.normal();
    stamp(c, t);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ForceCurve> generate_electrostatic_scans(const SynthTruth& t, const TheoryCurve& theory) {
  t.validate();
  std::vector<ForceCurve> out;
  for (std::size_t s = 0; s < t.applied_voltages.size(); ++s) {
    const double v = t.applied_voltages[s];
    const auto e = electro_cfg(t, v);
    auto c = make_curve(fmt::format("electro_{:03d}", s), v, t.grid, Observable::force);
    NoiseStream noise(t.seed, kElectroStream, s);
    for (std::size_t i = 0; i < t.grid.size(); ++i) {
      const double gap = t.grid[i] + t.z0_true;
      c.values[i] = theory.at_gap(gap) + electrostatic_force(gap, e, t.electro_model) + t.C_true * t.grid[i] +
                    t.noise_sigma * noise.normal();
    }
    stamp(c, t);
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ForceCurve> generate_calibration_scans(const SynthTruth& t, const TheoryCurve& theory) {
  t.validate();
  std::vector<ForceCurve> out;
  const double to_signal = 1.0 / (t.k_true * t.deflection_sensitivity);
  for (std::size_t s = 0; s < t.calibration_voltages.size(); ++s) {
    const double v = t.calibration_voltages[s];
    const auto e = electro_cfg(t, v);
    auto c = make_curve(fmt::format("calibration_{:03d}", s), v, t.calibration_grid, Observable::signal);
    NoiseStream noise(t.seed, kCalibrationStream, s);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double z = c.piezo[i];
      const double gap = z + t.z0_true;
      const double f = sphere_plane_force_exact(gap, e) + theory.at_gap(gap) + t.C_true * z +
                       t.noise_sigma * noise.normal();
      c.values[i] = f * to_signal;
    }
    stamp(c, t);
    c.spring_constant.reset();
    out.push_back(std::move(c));
  }
  return out;
}

Campaign generate_campaign(const SynthTruth& t, const TheoryCurve& theory) {
  Campaign c;
  if (!t.calibration_grid.empty()) c.calibration = generate_calibration_scans(t, theory);
  c.electrostatic = generate_electrostatic_scans(t, theory);
  c.casimir = generate_scans(t, theory);
  return c;
}

ForceCurve generate_raw_scan(const RawScanSpec& spec, const GapForce& tail) {
  if (spec.n < 10 || !(spec.step > 0.0) || !(spec.k > 0.0)) throw DomainError("invalid raw scan spec");
  ForceCurve c;
  c.scan_id = "raw";
  c.observable = Observable::signal;
  c.spring_constant = spec.k;
  NoiseStream noise(spec.seed, 3, 0);
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double p = spec.piezo_start + spec.step * static_cast<double>(i);
    const double f = p <= spec.contact_piezo ? spec.k * (spec.contact_piezo - p) : tail(p - spec.contact_piezo);
    c.piezo.push_back(p);
    c.values.push_back((f + spec.noise_sigma * noise.normal()) / (spec.k * spec.deflection_sensitivity));
  }
  return c;
}

std::string truth_json(const SynthTruth& t) {
  using nlohmann::ordered_json;
  auto nm = [](const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(round9(x * 1e9));
    return a;
  };
  auto plain = [](const std::vector<double>& v) {
    ordered_json a = ordered_json::array();
    for (double x : v) a.push_back(round9(x));
    return a;
  };
  ordered_json j;
  j["z0_true_nm"] = round9(t.z0_true * 1e9);
  j["C_true_pn_per_nm"] = round9(t.C_true * 1e3);
  j["k_true_n_per_m"] = round9(t.k_true);
  j["V_applied_v"] = plain(t.applied_voltages);
  j["V2_residual_v"] = round9(t.V2_residual);
  j["noise_sigma_pn"] = round9(t.noise_sigma * 1e12);
  j["n_scans"] = t.n_scans;
  j["seed"] = t.seed;
  j["deflection_sensitivity_nm_per_unit"] = round9(t.deflection_sensitivity * 1e9);
  j["electro_model"] = t.electro_model == ElectroModel::proximity ? "proximity" : "exact";
  j["calibration_voltages_v"] = plain(t.calibration_voltages);
  ordered_json th;
  th["radius_um"] = round9(t.theory.geom.radius * 1e6);
  th["material"] = t.theory.model.describe();
  th["cap_offset_nm"] = round9(t.theory.cap_offset * 1e9);
  th["roughness_amplitude_nm"] = round9(t.theory.rough.amplitude * 1e9);
  th["roughness"] = t.theory.toggles.roughness;
  th["temperature"] = t.theory.toggles.temperature;
  th["temperature_k"] = round9(t.theory.temp.temperature);
  j["theory"] = th;
  j["grid_nm"] = nm(t.grid);
  j["calibration_grid_nm"] = nm(t.calibration_grid);
  return j.dump(2) + "\n";
}

}  // namespace casimir
