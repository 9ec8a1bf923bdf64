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

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "casimir/corrections.hpp"
#include "casimir/electrostatics.hpp"
#include "casimir/force_curve.hpp"
#include "casimir/theory_curve.hpp"

namespace casimir {

/// Theory force (N) as a function of the outer-surface gap (m).
using GapForce = std::function<double(double)>;
/// Theory force (N) as a function of the Al-Al separation (m).
using SeparationForce = std::function<double(double)>;

enum class ElectroModel { proximity, exact };

struct AnalysisConfig {
  double pooled_noise = 7e-12;  // N, per-sample thermal noise
  double z0_lo = 0.0;           // m, z0 bracket
  double z0_hi = 200e-9;
  double coarse_step = 1e-9;
  double fit_z_min = 30e-9;    // m from contact; samples used by the z0 fit
  double fit_z_max = 3000e-9;
  ElectroModel electro_model = ElectroModel::proximity;
  bool per_point_weights = false;
  double calibration_min_separation = 2e-6;
  std::size_t calibration_min_points = 20;
  double drift_cap = 50e-12;  // N, bound on |C| * max separation
  RegionOptions regions;
  double window_lo = 100e-9;  // Al-Al separation window for the comparison
  double window_hi = 500e-9;
  std::size_t window_nodes = 441;
  double separation_shift = 3e-9;
  double opaque_cap_offset = 0.9e-9;
  std::size_t min_window_points = 10;
  ElectrostaticConfig electro;  // R and series controls; voltages are set per use
  std::size_t max_iterations = 30;

  void validate() const;
};

/// Electrostatic force at gap z under the configured model.
double electrostatic_force(double z, const ElectrostaticConfig& cfg, ElectroModel model);

struct SpringConstantFit {
  double k;        // N/m
  double k_sigma;  // N/m
  std::size_t n_points;
};

/// Least squares F_e(z + z0) = k * deflection over calibration scans (signal
/// valued, piezo = separation from contact). Only samples with z + z0 above
/// calibration_min_separation are used. `base` supplies R, V2 and the series
/// tolerance; V1 comes from each curve.
/// `background` (theory at the gap) and `drift` are subtracted when given.
SpringConstantFit calibrate_spring_constant(std::span<const ForceCurve> curves, double deflection_sensitivity,
                                            double z0, const ElectrostaticConfig& base,
                                            const AnalysisConfig& cfg = {}, const GapForce& background = {},
                                            double drift = 0.0);

struct Z0FitResult {
  double z0;        // m
  double z0_sigma;  // m, half-width of the chi2_min + 1 interval
  double chi2;
  std::size_t n_points;
  double voltage;   // V
};

/// Scalar chi2 fit of the contact separation on one electrostatic scan
/// (force valued, contact referenced). The model is F_e(z + z0) + theory(z + z0)
/// + drift * z; sigma per sample is the pooled noise unless `sigma` is given.
Z0FitResult fit_contact_separation(const ForceCurve& curve, const GapForce& theory, const ElectrostaticConfig& cfg,
                                   const AnalysisConfig& acfg = {}, double drift = 0.0,
                                   std::span<const double> sigma = {});
Z0FitResult fit_contact_separation(const ForceCurve& curve, const TheoryParams& theory, const ElectrostaticConfig& cfg,
                                   const AnalysisConfig& acfg = {});

/// chi2(z0) as used by fit_contact_separation, exposed for the coarse-scan properties.
double contact_chi2(const ForceCurve& curve, const GapForce& theory, const ElectrostaticConfig& cfg,
                    const AnalysisConfig& acfg, double z0, double drift = 0.0, std::span<const double> sigma = {});

struct DriftFit {
  double C;        // N/m
  double C_sigma;  // N/m
  std::size_t n_points;
};

/// Closed-form least squares for C in F = theory(z + z0) + F_e(z + z0) + C z on
/// region-3 samples. `residual` carries V1 = 0 and the residual V2.
DriftFit fit_drift_coefficient(const ForceCurve& region3, double z0, const GapForce& theory,
                               const ElectrostaticConfig& residual, const AnalysisConfig& acfg = {});

/// F_c-m = F_m - F_e - C z with the axis re-expressed as z + z0 + cap_offset.
ForceCurve extract_casimir(const ForceCurve& curve, double z0, const DriftFit& drift,
                           const ElectrostaticConfig& residual, double cap_offset, const AnalysisConfig& acfg = {});

struct ScanAverage {
  ForceCurve mean;
  std::vector<double> stddev;  // sample standard deviation per point, N
  std::size_t n_scans;
};

/// Pointwise mean and sample standard deviation. Grids must match.
ScanAverage average_scans(std::span<const ForceCurve> scans);

/// Linear resampling of a force curve onto new piezo nodes.
ForceCurve resample(const ForceCurve& curve, const std::vector<double>& nodes);

/// Averaged measurement on the Al-Al separation axis.
struct MeasuredCurve {
  std::vector<double> separation;  // m
  std::vector<double> force;       // N
  std::vector<double> stddev;      // N, per point across scans (may be empty)
  std::size_t n_scans = 1;
};

struct ComparisonStats {
  double sigma_rms;      // N
  std::size_t n_points;
  double reduced_chi2;
  double pooled_noise;   // N, rms of the per-point standard deviations
  std::map<std::string, double> variants;  // label -> sigma_rms, N
};

/// Window nodes: window_nodes points evenly spaced over [window_lo, window_hi].
std::vector<double> window_nodes(const AnalysisConfig& acfg);

/// sigma_rms over the window, reduced chi2 with per-point standard errors
/// (stddev / sqrt(n_scans); pooled noise where a point has none), and the
/// variants shift_minus_3nm, shift_plus_3nm, opaque_cap.
ComparisonStats compare_to_theory(const MeasuredCurve& measured, const SeparationForce& theory, double cap_offset,
                                  const AnalysisConfig& acfg = {});

struct Campaign {
  std::vector<ForceCurve> calibration;    // signal valued, large separation
  std::vector<ForceCurve> electrostatic;  // applied voltage on the plate
  std::vector<ForceCurve> casimir;        // plate grounded
};

struct CampaignResult {
  std::optional<SpringConstantFit> spring;
  double spring_constant;  // N/m actually used
  std::vector<Z0FitResult> z0_fits;
  double z0;
  double z0_sigma;
  double z0_rms;
  DriftFit drift;
  ForceCurve casimir_mean;       // contact-referenced average of the Casimir scans
  MeasuredCurve measured;        // extracted, resampled onto the window
  std::vector<double> theory;    // at measured.separation
  ComparisonStats stats;
  std::size_t iterations;
};

/// Signal-valued scans: Hooke conversion, contact detection, re-zero at contact,
/// drop region 1, axis correction. Force-valued scans are taken as already
/// contact referenced.
ForceCurve prepare_scan(const ForceCurve& curve, const CalibrationParams& cal, const AnalysisConfig& acfg);

/// Calibrate (if calibration scans exist), fit z0 per voltage, average, fit
/// drift, subtract, compare. z0, C and k are iterated to a joint fixed point
/// because the drift term enters the z0 fit and z0 enters the calibration.
CampaignResult run_campaign(const Campaign& campaign, const TheoryCurve& theory, const CalibrationParams& cal,
                            const AnalysisConfig& acfg = {});

/// Results JSON (keys z0_nm, z0_sigma_nm, z0_rms_over_voltages_nm,
/// spring_constant_n_per_m, drift_pn_per_nm, sigma_rms_pn, reduced_chi2,
/// n_points, variants, window_nm) plus a `metadata` object.
std::string results_json(const CampaignResult& r, const AnalysisConfig& acfg,
                         const std::map<std::string, std::string>& metadata = {});

}  // namespace casimir
