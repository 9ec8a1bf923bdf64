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

#include "run_config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>

#include <fmt/format.h>

#include "casimir/errors.hpp"
#include "casimir/units.hpp"

namespace casimir::cli {
namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

const std::map<std::string, std::string>& defaults() {
  static const std::map<std::string, std::string> d{
      // geometry and material
      {"sphere_radius_um", "100.85"},
      {"material", "drude"},  // drude | tabulated
      {"material_file", ""},
      {"drude_plasma_ev", "12.3984198"},
      {"drude_damping_ev", "0.063"},
      {"crossover_ev", "0.04"},
      {"table_subdivisions", "4"},
      {"high_energy_tail", "inverse_cube"},  // inverse_cube | none
      {"cap_offset_nm", "15.8"},
      // corrections
      {"roughness", "true"},
      {"roughness_amplitude_nm", "11.8"},
      {"temperature_correction", "true"},
      {"temperature_k", "300"},
      // numerics
      {"quad_rel_tol", "1e-7"},
      {"quad_max_refinements", "15"},
      {"xi_cut_multiplier", "60"},
      {"p_cut", "60"},
      {"series_tol", "1e-9"},
      {"theory_s_min_nm", "40"},
      {"theory_s_max_nm", "3500"},
      {"theory_nodes", "241"},
      {"threads", "0"},
      // calibration and electrostatics
      {"spring_constant_n_per_m", "0.0169"},
      {"deflection_sensitivity_nm", "1"},
      {"residual_potential_v", "0.0079"},
      {"applied_voltage_v", "0.3"},
      {"assumed_z0_nm", "48.9"},
      // analysis
      {"pooled_noise_pn", "7"},
      {"z0_lo_nm", "0"},
      {"z0_hi_nm", "200"},
      {"coarse_step_nm", "1"},
      {"fit_z_min_nm", "30"},
      {"fit_z_max_nm", "3000"},
      {"electro_model", "proximity"},  // proximity | exact
      {"per_point_weights", "false"},
      {"calibration_min_separation_um", "2"},
      {"drift_cap_pn", "50"},
      {"region2_lo_nm", "16"},
      {"region2_hi_nm", "516"},
      {"window_lo_nm", "100"},
      {"window_hi_nm", "500"},
      {"window_nodes", "441"},
      {"separation_shift_nm", "3"},
      {"opaque_cap_offset_nm", "0.9"},
      // synthesis
      {"seed", "0"},
      {"noise_sigma_pn", "7"},
      {"n_scans", "27"},
      {"z0_true_nm", "48.9"},
      {"drift_true_pn_per_nm", "0.0004"},
      {"k_true_n_per_m", "0.0169"},
      {"synth_voltages_v", "0.3,0.4,0.5,0.6,0.7,0.8"},
      {"calibration_voltages_v", "0.5,0.8"},
      {"synth_z_min_nm", "20"},
      {"synth_z_max_nm", "1500"},
  };
  return d;
}

}  // namespace

std::uint64_t fnv1a64(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RunConfig::RunConfig() : values_(defaults()) {
  for (const auto& [k, v] : values_) origin_[k] = "default";
}

void RunConfig::merge(std::istream& in, const std::string& source) {
  std::string line;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    const std::string body = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected key=value", n, source);
    const std::string key = trim(body.substr(0, eq));
    if (!values_.count(key)) throw ParseError("unknown config key '" + key + "'", n, source);
    values_[key] = trim(body.substr(eq + 1));
    origin_[key] = fmt::format("{}:{}", source, n);
  }
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file", 0, path);
  merge(in, path);
}

void RunConfig::set(const std::string& key, const std::string& value, const std::string& origin) {
  if (!values_.count(key)) throw ParseError("unknown config key '" + key + "'", 0, origin);
  values_[key] = value;
  origin_[key] = origin;
}

void RunConfig::bad_value(const std::string& key, const std::string& why) const {
  throw ParseError(fmt::format("config key '{}' = '{}': {}", key, values_.at(key), why), 0, origin_.at(key));
}

std::string RunConfig::text(const std::string& key) const { return values_.at(key); }

double RunConfig::number(const std::string& key) const {
  const std::string& s = values_.at(key);
  double v = 0.0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) bad_value(key, "not a finite number");
  return v;
}

bool RunConfig::flag(const std::string& key) const {
  const std::string& s = values_.at(key);
  if (s == "true" || s == "1" || s == "on") return true;
  if (s == "false" || s == "0" || s == "off") return false;
  bad_value(key, "expected true or false");
}

std::uint64_t RunConfig::u64(const std::string& key) const {
  const std::string& s = values_.at(key);
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) bad_value(key, "not an unsigned integer");
  return v;
}

std::vector<double> RunConfig::list(const std::string& key) const {
  std::vector<double> out;
  const std::string& s = values_.at(key);
  std::size_t b = 0;
  while (b <= s.size()) {
    auto e = s.find(',', b);
    if (e == std::string::npos) e = s.size();
    const std::string item = trim(s.substr(b, e - b));
    double v = 0.0;
    const auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || p != item.data() + item.size()) bad_value(key, "expected a comma list of numbers");
    out.push_back(v);
    b = e + 1;
  }
  return out;
}

std::uint64_t RunConfig::hash() const {
  std::string canon;
  for (const auto& [k, v] : values_) canon += k + "=" + v + "\n";
  return fnv1a64(canon);
}

std::string RunConfig::hash_hex() const { return fmt::format("{:016x}", hash()); }

TheoryParams RunConfig::theory_params() const {
  TheoryParams p;
  p.geom.radius = number("sphere_radius_um") * units::um;
  const auto drude = DrudeParams::from_ev(number("drude_plasma_ev"), number("drude_damping_ev"));
  const std::string material = text("material");
  if (material == "drude") {
    p.model = DielectricModel::drude(drude);
  } else if (material == "tabulated") {
    if (text("material_file").empty()) bad_value("material_file", "tabulated material needs a table file");
    const std::string tail = text("high_energy_tail");
    if (tail != "inverse_cube" && tail != "none") bad_value("high_energy_tail", "expected inverse_cube or none");
    auto table = std::make_shared<const OpticalTable>(load_optical_table_file(text("material_file")));
    p.model = DielectricModel::tabulated(
        table, drude, number("crossover_ev"), static_cast<int>(u64("table_subdivisions")),
        tail == "none" ? HighEnergyTail::none : HighEnergyTail::inverse_cube);
  } else {
    bad_value("material", "expected drude or tabulated");
  }
  p.cap_offset = number("cap_offset_nm") * units::nm;
  p.rough.amplitude = number("roughness_amplitude_nm") * units::nm;
  p.temp.temperature = number("temperature_k");
  p.toggles.roughness = flag("roughness");
  p.toggles.temperature = flag("temperature_correction");
  p.quad.rel_tol = number("quad_rel_tol");
  p.quad.max_refinements = static_cast<unsigned>(u64("quad_max_refinements"));
  p.quad.xi_cut_multiplier = number("xi_cut_multiplier");
  p.quad.p_cut = number("p_cut");
  p.validate();
  return p;
}

TheoryCurve::Range RunConfig::theory_range() const {
  return {number("theory_s_min_nm") * units::nm, number("theory_s_max_nm") * units::nm,
          static_cast<std::size_t>(u64("theory_nodes"))};
}

unsigned RunConfig::threads() const { return static_cast<unsigned>(u64("threads")); }

ElectrostaticConfig RunConfig::electrostatic_config() const {
  ElectrostaticConfig e;
  e.radius = number("sphere_radius_um") * units::um;
  e.v1 = number("applied_voltage_v");
  e.v2 = number("residual_potential_v");
  e.series_tol = number("series_tol");
  e.validate();
  return e;
}

AnalysisConfig RunConfig::analysis_config() const {
  AnalysisConfig a;
  a.pooled_noise = number("pooled_noise_pn") * units::pN;
  a.z0_lo = number("z0_lo_nm") * units::nm;
  a.z0_hi = number("z0_hi_nm") * units::nm;
  a.coarse_step = number("coarse_step_nm") * units::nm;
  a.fit_z_min = number("fit_z_min_nm") * units::nm;
  a.fit_z_max = number("fit_z_max_nm") * units::nm;
  const std::string em = text("electro_model");
  if (em == "proximity") {
    a.electro_model = ElectroModel::proximity;
  } else if (em == "exact") {
    a.electro_model = ElectroModel::exact;
  } else {
    bad_value("electro_model", "expected proximity or exact");
  }
  a.per_point_weights = flag("per_point_weights");
  a.calibration_min_separation = number("calibration_min_separation_um") * units::um;
  a.drift_cap = number("drift_cap_pn") * units::pN;
  a.regions.region2_lo = number("region2_lo_nm") * units::nm;
  a.regions.region2_hi = number("region2_hi_nm") * units::nm;
  a.window_lo = number("window_lo_nm") * units::nm;
  a.window_hi = number("window_hi_nm") * units::nm;
  a.window_nodes = static_cast<std::size_t>(u64("window_nodes"));
  a.separation_shift = number("separation_shift_nm") * units::nm;
  a.opaque_cap_offset = number("opaque_cap_offset_nm") * units::nm;
  a.electro = electrostatic_config();
  a.validate();
  return a;
}

CalibrationParams RunConfig::calibration_params() const {
  CalibrationParams c;
  c.spring_constant = number("spring_constant_n_per_m");
  c.deflection_sensitivity = number("deflection_sensitivity_nm") * units::nm;
  c.residual_potential = number("residual_potential_v");
  c.temperature = number("temperature_k");
  c.validate();
  return c;
}

SynthTruth RunConfig::synth_truth() const {
  const auto acfg = analysis_config();
  SynthTruth t;
  t.theory = theory_params();
  t.z0_true = number("z0_true_nm") * units::nm;
  // pN/nm is numerically 1e-3 N/m.
  t.C_true = number("drift_true_pn_per_nm") * units::pN / units::nm;
  t.k_true = number("k_true_n_per_m");
  t.applied_voltages = list("synth_voltages_v");
  t.V2_residual = number("residual_potential_v");
  t.noise_sigma = number("noise_sigma_pn") * units::pN;
  t.n_scans = static_cast<std::size_t>(u64("n_scans"));
  t.grid = aligned_grid(t.z0_true, t.theory.cap_offset, acfg, number("synth_z_min_nm") * units::nm,
                        number("synth_z_max_nm") * units::nm);
  t.calibration_voltages = list("calibration_voltages_v");
  t.calibration_grid = uniform_grid(2.05e-6, 3e-6, 101);
  t.deflection_sensitivity = number("deflection_sensitivity_nm") * units::nm;
  t.seed = u64("seed");
  t.electro_model = acfg.electro_model;
  t.validate();
  return t;
}

}  // namespace casimir::cli
