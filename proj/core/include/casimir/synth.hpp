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
#include <random>
#include <string>
#include <vector>

#include "casimir/analysis.hpp"

namespace casimir {

/// Ground truth for a synthetic campaign. Scans are emitted force valued and
/// contact referenced (piezo = z, the separation from contact), except the
/// calibration scans which carry the raw signal.
struct SynthTruth {
  double z0_true = 48.9e-9;    // m
  double C_true = 4e-7;        // N/m
  double k_true = 0.0169;      // N/m
  std::vector<double> applied_voltages{0.3, 0.4, 0.5, 0.6, 0.7, 0.8};  // V, one electrostatic scan each
  double V2_residual = 7.9e-3;  // V
  double noise_sigma = 7e-12;   // N
  std::size_t n_scans = 27;     // Casimir scans at zero applied voltage
  std::vector<double> grid;     // m, contact-referenced; see aligned_grid
  std::vector<double> calibration_voltages{0.5, 0.8};
  std::vector<double> calibration_grid;  // m
  double deflection_sensitivity = 1e-9;  // m per signal unit
  std::uint64_t seed = 0;
  ElectroModel electro_model = ElectroModel::proximity;
  TheoryParams theory;

  void validate() const;
};

/// Contact-referenced grid whose Al-Al separations z + z0 + cap coincide with
/// the comparison window nodes and continue at the same spacing over
/// [z_min, z_max].
std::vector<double> aligned_grid(double z0, double cap_offset, const AnalysisConfig& acfg, double z_min = 20e-9,
                                 double z_max = 1500e-9);

/// Uniform grid of n points on [lo, hi].
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

/// Defaults: aligned 441-node window grid and 101 calibration points over
/// 2.05-3 um.
SynthTruth default_truth(const AnalysisConfig& acfg = {});

/// Noise stream: mt19937_64 seeded per (seed, stream, index) through
/// splitmix64, normals by Box-Muller on 53-bit uniforms. std::normal_distribution
/// is not used because its output differs between standard libraries.
class NoiseStream {
 public:
  NoiseStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t index);
  double normal();

 private:
  double uniform();
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Casimir scans: F = theory(z + z0) + F_e(z + z0; 0 V) + C z + noise.
std::vector<ForceCurve> generate_scans(const SynthTruth& truth, const TheoryCurve& theory);
/// One scan per applied voltage with the applied-voltage term added.
std::vector<ForceCurve> generate_electrostatic_scans(const SynthTruth& truth, const TheoryCurve& theory);
/// Signal-valued scans at large separation using the exact series.
std::vector<ForceCurve> generate_calibration_scans(const SynthTruth& truth, const TheoryCurve& theory);
Campaign generate_campaign(const SynthTruth& truth, const TheoryCurve& theory);

/// Raw approach scan in the commanded-piezo frame: flexing (F = k (p_c - p))
/// below contact and `tail(p - p_c)` beyond it, emitted as signal.
struct RawScanSpec {
  std::size_t n = 400;
  double piezo_start = 0.0;   // m
  double step = 2e-9;         // m
  double contact_piezo = 150.5e-9;  // m
  double k = 0.0169;
  double deflection_sensitivity = 1e-9;
  double noise_sigma = 0.0;   // N
  std::uint64_t seed = 0;
};
ForceCurve generate_raw_scan(const RawScanSpec& spec, const GapForce& tail);

/// Sidecar record of every truth field.
std::string truth_json(const SynthTruth& truth);

}  // namespace casimir
