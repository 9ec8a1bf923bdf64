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

#include "casimir/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/tools/minima.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "casimir/errors.hpp"
#include "casimir/units.hpp"

namespace casimir {
namespace {

ElectrostaticConfig with_voltages(ElectrostaticConfig cfg, double v1, double v2) {
  cfg.v1 = v1;
  cfg.v2 = v2;
  return cfg;
}

double round9(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(fmt::format("{:.9g}", v));
}

}  // namespace

void AnalysisConfig::validate() const {
  if (!(pooled_noise > 0.0)) throw DomainError("pooled noise must be positive");
  if (!(z0_hi > z0_lo && z0_lo >= 0.0)) throw DomainError("invalid z0 bracket");
  if (!(coarse_step > 0.0) || (z0_hi - z0_lo) / coarse_step < 4.0) throw DomainError("invalid coarse step");
  if (!(fit_z_max > fit_z_min)) throw DomainError("invalid z0 fit range");
  if (!(window_hi > window_lo && window_lo > 0.0) || window_nodes < 2) throw DomainError("invalid comparison window");
  if (!(regions.region2_hi > regions.region2_lo)) throw DomainError("invalid region bounds");
  electro.validate();
}

double electrostatic_force(double z, const ElectrostaticConfig& cfg, ElectroModel model) {
  return model == ElectroModel::proximity ? sphere_plane_force_pfa(z, cfg) : sphere_plane_force_exact(z, cfg);
}

SpringConstantFit calibrate_spring_constant(std::span<const ForceCurve> curves, double deflection_sensitivity,
                                            double z0, const ElectrostaticConfig& base, const AnalysisConfig& cfg,
                                            const GapForce& background, double drift) {
  if (!(deflection_sensitivity > 0.0)) throw DomainError("deflection sensitivity must be positive");
  double sfd = 0.0, sdd = 0.0;
  std::vector<std::pair<double, double>> samples;  // (force, deflection)
  for (const auto& c : curves) {
    if (c.observable != Observable::signal) throw StateError("calibration scans must carry the raw signal");
    if (c.applied_voltage == 0.0) throw CalibrationError("calibration scan '" + c.scan_id + "' has zero applied voltage");
    const auto e = with_voltages(base, c.applied_voltage, base.v2);
    for (std::size_t i = 0; i < c.size(); ++i) {
      const double z = c.piezo[i] + z0;
      if (!(z > cfg.calibration_min_separation)) continue;
      double f = sphere_plane_force_exact(z, e) + drift * c.piezo[i];
      if (background) f += background(z);
      const double d = c.values[i] * deflection_sensitivity;
      sfd += f * d;
      sdd += d * d;
      samples.emplace_back(f, d);
    }
  }
  if (samples.size() < cfg.calibration_min_points)
    throw DataError(fmt::format("spring-constant calibration needs >= {} samples beyond {:.9g} nm, got {}",
                                cfg.calibration_min_points, units::m_to_nm(cfg.calibration_min_separation),
                                samples.size()));
  if (!(sdd > 0.0)) throw CalibrationError("calibration scans show no deflection");
  const double k = sfd / sdd;
  if (!(k > 0.0)) throw CalibrationError("fitted spring constant is not positive");
  double ss = 0.0;
  for (const auto& [f, d] : samples) ss += (f - k * d) * (f - k * d);
  const double n = static_cast<double>(samples.size());
  return {k, std::sqrt(ss / (n - 1.0) / sdd), samples.size()};
}

double contact_chi2(const ForceCurve& curve, const GapForce& theory, const ElectrostaticConfig& cfg,
                    const AnalysisConfig& acfg, double z0, double drift, std::span<const double> sigma) {
  const auto& f = curve.force();
  const auto e = with_voltages(cfg, curve.applied_voltage, cfg.v2);
  const double inv_pooled = 1.0 / acfg.pooled_noise;
  double chi2 = 0.0;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double z = curve.piezo[i];
    if (z < acfg.fit_z_min || z > acfg.fit_z_max) continue;
    const double gap = z + z0;
    const double model = electrostatic_force(gap, e, acfg.electro_model) + theory(gap) + drift * z;
    const double r = (f[i] - model) * (sigma.empty() ? inv_pooled : 1.0 / sigma[i]);
    chi2 += r * r;
  }
  return chi2;
}

Z0FitResult fit_contact_separation(const ForceCurve& curve, const GapForce& theory, const ElectrostaticConfig& cfg,
                                   const AnalysisConfig& acfg, double drift, std::span<const double> sigma) {
  acfg.validate();
  curve.validate();
  if (!sigma.empty() && sigma.size() != curve.size()) throw DataError("per-point sigma length mismatch");
  std::size_t used = 0;
  for (double z : curve.piezo) used += (z >= acfg.fit_z_min && z <= acfg.fit_z_max) ? 1 : 0;
  if (used < 10) throw DataError("z0 fit needs at least 10 samples inside the fit range");

  auto chi2 = [&](double z0) { return contact_chi2(curve, theory, cfg, acfg, z0, drift, sigma); };

  const auto steps = static_cast<std::size_t>(std::llround((acfg.z0_hi - acfg.z0_lo) / acfg.coarse_step));
  std::vector<double> grid(steps + 1), values(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    grid[i] = i == steps ? acfg.z0_hi : acfg.z0_lo + acfg.coarse_step * static_cast<double>(i);
    values[i] = chi2(grid[i]);
  }
  const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
  if (best == 0 || best == steps)
    throw FitError(fmt::format("scan '{}': chi2 minimum at the z0 bracket edge ({:.9g} nm)", curve.scan_id,
                               units::m_to_nm(grid[best])));
  std::size_t minima = 0;
  for (std::size_t i = 1; i < steps; ++i) minima += (values[i] < values[i - 1] && values[i] <= values[i + 1]) ? 1 : 0;
  if (minima > 1)
    throw FitError(fmt::format("scan '{}': chi2(z0) has {} local minima in the coarse scan", curve.scan_id, minima));

  // Brent's absolute tolerance term assumes O(1) abscissae, so search in nm.
  auto chi2_nm = [&](double z0_nm) { return chi2(z0_nm * units::nm); };
  const auto [z0_nm, chi2_min] = boost::math::tools::brent_find_minima(
      chi2_nm, units::m_to_nm(grid[best - 1]), units::m_to_nm(grid[best + 1]), std::numeric_limits<double>::digits / 2);
  const double z0 = z0_nm * units::nm;

  // Half-width of the chi2_min + 1 interval, each side found by expansion and bisection.
  auto half_width = [&](double dir) {
    const double limit = acfg.z0_hi - acfg.z0_lo;
    double lo = 0.0, hi = 1e-13;
    while (chi2(z0 + dir * hi) < chi2_min + 1.0) {
      lo = hi;
      hi *= 2.0;
      if (hi > limit) return limit;
    }
    for (int it = 0; it < 100 && hi - lo > 1e-9 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (chi2(z0 + dir * mid) < chi2_min + 1.0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };
  const double sig = 0.5 * (half_width(1.0) + half_width(-1.0));
  return {z0, sig, chi2_min, used, curve.applied_voltage};
}

Z0FitResult fit_contact_separation(const ForceCurve& curve, const TheoryParams& theory, const ElectrostaticConfig& cfg,
                                   const AnalysisConfig& acfg) {
  TheoryCurve::Range range;
  range.s_min = std::max(20e-9, acfg.fit_z_min + acfg.z0_lo + theory.cap_offset);
  range.s_max = acfg.fit_z_max + acfg.z0_hi + theory.cap_offset;
  const TheoryCurve tc(theory, range);
  return fit_contact_separation(curve, [&](double g) { return tc.at_gap(g); }, cfg, acfg);
}

DriftFit fit_drift_coefficient(const ForceCurve& region3, double z0, const GapForce& theory,
                               const ElectrostaticConfig& residual, const AnalysisConfig& acfg) {
  const auto& f = region3.force();
  if (region3.size() == 0) throw DataError("region 3 is empty: drift cannot be fitted");
  double szr = 0.0, szz = 0.0, zmax = 0.0;
  std::vector<double> r(region3.size());
  for (std::size_t i = 0; i < region3.size(); ++i) {
    const double z = region3.piezo[i];
    const double gap = z + z0;
    r[i] = f[i] - theory(gap) - electrostatic_force(gap, residual, acfg.electro_model);
    szr += z * r[i];
    szz += z * z;
    zmax = std::max(zmax, std::abs(z));
  }
  if (!(szz > 0.0)) throw DataError("region 3 has no extent");
  const double C = szr / szz;
  double ss = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) ss += std::pow(r[i] - C * region3.piezo[i], 2);
  const double n = static_cast<double>(r.size());
  const double sigma = n > 1.0 ? std::sqrt(ss / (n - 1.0) / szz) : 0.0;
  if (std::abs(C) * zmax > acfg.drift_cap)
    throw FitError(fmt::format("drift term {:.9g} pN at {:.9g} nm exceeds the sanity cap", units::n_to_pn(C * zmax),
                               units::m_to_nm(zmax)));
  return {C, sigma, r.size()};
}

ForceCurve extract_casimir(const ForceCurve& curve, double z0, const DriftFit& drift,
                           const ElectrostaticConfig& residual, double cap_offset, const AnalysisConfig& acfg) {
  const auto& f = curve.force();
  ForceCurve out = curve;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double z = curve.piezo[i];
    const double fe = residual.voltage_difference() == 0.0
                          ? 0.0
                          : electrostatic_force(z + z0, residual, acfg.electro_model);
    out.values[i] = f[i] - fe - drift.C * z;
    out.piezo[i] = z + z0 + cap_offset;
  }
  out.corrections.push_back("casimir-extraction");
  out.metadata["axis"] = "al_separation";
  return out;
}

ScanAverage average_scans(std::span<const ForceCurve> scans) {
  if (scans.size() < 2) throw DataError("averaging needs at least 2 scans");
  const auto& ref = scans.front();
  const std::size_t n = ref.size();
  const double span = ref.piezo.back() - ref.piezo.front();
  std::vector<double> sum(n, 0.0);
  for (const auto& s : scans) {
    if (s.size() != n) throw DataError("grid mismatch: scan '" + s.scan_id + "' has a different length");
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(s.piezo[i] - ref.piezo[i]) > 1e-12 * span)
        throw DataError("grid mismatch: scan '" + s.scan_id + "' is on a different separation grid");
    const auto& f = s.force();
    for (std::size_t i = 0; i < n; ++i) sum[i] += f[i];
  }
  const double m = static_cast<double>(scans.size());
  ScanAverage out{ref, std::vector<double>(n, 0.0), scans.size()};
  out.mean.scan_id = "mean";
  for (std::size_t i = 0; i < n; ++i) out.mean.values[i] = sum[i] / m;
  for (const auto& s : scans) {
    const auto& f = s.force();
    for (std::size_t i = 0; i < n; ++i) out.stddev[i] += std::pow(f[i] - out.mean.values[i], 2);
  }
  for (auto& v : out.stddev) v = std::sqrt(v / (m - 1.0));
  return out;
}

ForceCurve resample(const ForceCurve& curve, const std::vector<double>& nodes) {
  ForceCurve out = curve;
  out.values = interpolate_linear(curve.piezo, curve.values, nodes);
  out.piezo = nodes;
  return out;
}

std::vector<double> window_nodes(const AnalysisConfig& acfg) {
  std::vector<double> s(acfg.window_nodes);
  const double h = (acfg.window_hi - acfg.window_lo) / static_cast<double>(acfg.window_nodes - 1);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = acfg.window_lo + h * static_cast<double>(i);
  s.back() = acfg.window_hi;
  return s;
}

ComparisonStats compare_to_theory(const MeasuredCurve& m, const SeparationForce& theory, double cap_offset,
                                  const AnalysisConfig& acfg) {
  if (m.separation.size() != m.force.size() || (!m.stddev.empty() && m.stddev.size() != m.force.size()))
    throw DataError("measured curve arrays differ in length");
  const double slack = 1e-9 * (acfg.window_hi - acfg.window_lo);
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < m.separation.size(); ++i)
    if (m.separation[i] >= acfg.window_lo - slack && m.separation[i] <= acfg.window_hi + slack) idx.push_back(i);
  if (idx.size() < acfg.min_window_points)
    throw DataError(fmt::format("comparison window holds {} points (< {})", idx.size(), acfg.min_window_points));

  const double root_n = std::sqrt(static_cast<double>(std::max<std::size_t>(1, m.n_scans)));
  auto rms_against = [&](double shift) {
    double ss = 0.0;
    for (auto i : idx) ss += std::pow(theory(m.separation[i] + shift) - m.force[i], 2);
    return std::sqrt(ss / static_cast<double>(idx.size()));
  };

  ComparisonStats st{};
  st.n_points = idx.size();
  st.sigma_rms = rms_against(0.0);
  double chi2 = 0.0, var = 0.0;
  for (auto i : idx) {
    const double sd = m.stddev.empty() ? 0.0 : m.stddev[i];
    const double se = sd > 0.0 ? sd / root_n : acfg.pooled_noise / root_n;
    chi2 += std::pow((theory(m.separation[i]) - m.force[i]) / se, 2);
    var += sd * sd;
  }
  st.reduced_chi2 = chi2 / static_cast<double>(idx.size());
  st.pooled_noise = std::sqrt(var / static_cast<double>(idx.size()));
  st.variants["shift_minus_3nm"] = rms_against(-acfg.separation_shift);
  st.variants["shift_plus_3nm"] = rms_against(acfg.separation_shift);
  st.variants["opaque_cap"] = rms_against(acfg.opaque_cap_offset - cap_offset);
  return st;
}

ForceCurve prepare_scan(const ForceCurve& curve, const CalibrationParams& cal, const AnalysisConfig& acfg) {
  if (curve.observable == Observable::force) return curve;
  const ForceCurve f = signal_to_force(curve, cal);
  const RegionBounds rb = segment_regions(f, acfg.regions);
  ForceCurve trimmed = slice(f, {rb.region2.begin, f.size()});
  for (auto& p : trimmed.piezo) p -= rb.contact_piezo;
  ForceCurve out = correct_separation_axis(trimmed, cal);
  out.metadata["contact_piezo_nm"] = fmt::format("{:.9g}", units::m_to_nm(rb.contact_piezo));
  return out;
}

namespace {

ScanAverage average_on_common_grid(const std::vector<ForceCurve>& scans) {
  if (scans.size() == 1) return {scans.front(), {}, 1};
  std::vector<ForceCurve> aligned;
  aligned.reserve(scans.size());
  const auto& ref = scans.front().piezo;
  for (const auto& s : scans) {
    const bool same = s.piezo == ref;
    if (same) {
      aligned.push_back(s);
      continue;
    }
    // Resample onto the first scan's nodes that every scan covers.
    double lo = ref.front(), hi = ref.back();
    for (const auto& t : scans) {
      lo = std::max(lo, t.piezo.front());
      hi = std::min(hi, t.piezo.back());
    }
    std::vector<double> nodes;
    for (double x : ref)
      if (x >= lo && x <= hi) nodes.push_back(x);
    aligned.clear();
    for (const auto& t : scans) aligned.push_back(resample(t, nodes));
    break;
  }
  return average_scans(aligned);
}

// Ensemble std at the scan's samples, pooled noise where the ensemble has
// no coverage or no spread.
std::vector<double> ensemble_sigma(const ScanAverage& avg, const ForceCurve& scan, const AnalysisConfig& acfg) {
  const auto& x = avg.mean.piezo;
  std::vector<double> sigma(scan.size(), acfg.pooled_noise);
  for (std::size_t i = 0; i < scan.size(); ++i) {
    const double z = scan.piezo[i];
    if (z < x.front() || z > x.back()) continue;
    const double sd = interpolate_linear(x, avg.stddev, {z}).front();
    if (sd > 0.0) sigma[i] = sd;
  }
  return sigma;
}

}  // namespace

CampaignResult run_campaign(const Campaign& campaign, const TheoryCurve& theory, const CalibrationParams& cal,
                            const AnalysisConfig& acfg) {
  acfg.validate();
  cal.validate();
  if (campaign.electrostatic.empty()) throw DataError("no electrostatic scans: z0 cannot be fitted");
  if (campaign.casimir.empty()) throw DataError("no Casimir scans");

  const GapForce at_gap = [&theory](double g) { return theory.at_gap(g); };
  const auto residual = with_voltages(acfg.electro, 0.0, cal.residual_potential);

  CampaignResult res{};
  double k = cal.spring_constant;
  double z0 = 0.5 * (acfg.z0_lo + acfg.z0_hi);
  double C = 0.0;
  bool converged = false;
  std::vector<Z0FitResult> fits;
  ScanAverage avg;
  DriftFit drift{};

  for (std::size_t it = 1; it <= acfg.max_iterations; ++it) {
    double k_new = k;
    if (!campaign.calibration.empty()) {
      res.spring = calibrate_spring_constant(campaign.calibration, cal.deflection_sensitivity, z0, residual, acfg,
                                             at_gap, C);
      k_new = res.spring->k;
    }
    CalibrationParams cal_it = cal;
    cal_it.spring_constant = k_new;

    std::vector<ForceCurve> prepared;
    for (const auto& c : campaign.casimir) prepared.push_back(prepare_scan(c, cal_it, acfg));
    avg = average_on_common_grid(prepared);

    fits.clear();
    for (const auto& e : campaign.electrostatic) {
      const ForceCurve pe = prepare_scan(e, cal_it, acfg);
      std::vector<double> sigma;
      if (acfg.per_point_weights && !avg.stddev.empty()) sigma = ensemble_sigma(avg, pe, acfg);
      fits.push_back(fit_contact_separation(pe, at_gap, residual, acfg, C, sigma));
    }
    double z0_new = 0.0;
    for (const auto& f : fits) z0_new += f.z0;
    z0_new /= static_cast<double>(fits.size());
    const RegionBounds rb = regions_from_contact(avg.mean, 0.0, acfg.regions);
    drift = fit_drift_coefficient(slice(avg.mean, rb.region3), z0_new, at_gap, residual, acfg);

    const bool stable = std::abs(z0_new - z0) <= 1e-15 && std::abs(drift.C - C) <= 1e-9 * std::abs(C) + 1e-18 &&
                        std::abs(k_new - k) <= 1e-12 * k;
    z0 = z0_new;
    C = drift.C;
    k = k_new;
    res.iterations = it;
    if (stable && it > 1) {
      converged = true;
      break;
    }
  }
  if (!converged)
    throw ConvergenceError("z0 / drift / spring-constant iteration did not settle", units::m_to_nm(z0), 0.0);

  res.spring_constant = k;
  res.z0_fits = fits;
  res.z0 = z0;
  const double nv = static_cast<double>(fits.size());
  double ss = 0.0, sig2 = 0.0;
  for (const auto& f : fits) {
    ss += std::pow(f.z0 - z0, 2);
    sig2 += f.z0_sigma * f.z0_sigma;
  }
  res.z0_rms = fits.size() > 1 ? std::sqrt(ss / (nv - 1.0)) : 0.0;
  res.z0_sigma = std::max(res.z0_rms / std::sqrt(nv), std::sqrt(sig2) / nv);
  res.drift = drift;
  res.casimir_mean = avg.mean;

  const ForceCurve extracted = extract_casimir(avg.mean, z0, drift, residual, theory.cap_offset(), acfg);
  const auto nodes = window_nodes(acfg);
  res.measured.separation = nodes;
  res.measured.force = interpolate_linear(extracted.piezo, extracted.values, nodes);
  if (!avg.stddev.empty()) res.measured.stddev = interpolate_linear(extracted.piezo, avg.stddev, nodes);
  res.measured.n_scans = avg.n_scans;
  res.theory.reserve(nodes.size());
  for (double s : nodes) res.theory.push_back(theory.at_separation(s));
  res.stats = compare_to_theory(res.measured, [&theory](double s) { return theory.at_separation(s); },
                                theory.cap_offset(), acfg);
  return res;
}

std::string results_json(const CampaignResult& r, const AnalysisConfig& acfg,
                         const std::map<std::string, std::string>& metadata) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["z0_nm"] = round9(units::m_to_nm(r.z0));
  j["z0_sigma_nm"] = round9(units::m_to_nm(r.z0_sigma));
  j["z0_rms_over_voltages_nm"] = round9(units::m_to_nm(r.z0_rms));
  j["spring_constant_n_per_m"] = round9(r.spring_constant);
  // N/m -> pN/nm is numerically 1e-3.
  j["drift_pn_per_nm"] = round9(units::n_to_pn(r.drift.C) * units::nm);
  j["sigma_rms_pn"] = round9(units::n_to_pn(r.stats.sigma_rms));
  j["reduced_chi2"] = round9(r.stats.reduced_chi2);
  j["n_points"] = r.stats.n_points;
  ordered_json v = ordered_json::object();
  for (const auto& [k, val] : r.stats.variants) v[k] = round9(units::n_to_pn(val));
  j["variants"] = v;
  j["window_nm"] = {round9(units::m_to_nm(acfg.window_lo)), round9(units::m_to_nm(acfg.window_hi))};

  ordered_json detail;
  if (r.spring) detail["spring_constant_sigma_n_per_m"] = round9(r.spring->k_sigma);
  detail["drift_sigma_pn_per_nm"] = round9(units::n_to_pn(r.drift.C_sigma) * units::nm);
  detail["pooled_noise_pn"] = round9(units::n_to_pn(r.stats.pooled_noise));
  detail["n_scans"] = r.measured.n_scans;
  detail["iterations"] = r.iterations;
  ordered_json per_voltage = ordered_json::array();
  for (const auto& f : r.z0_fits) {
    per_voltage.push_back({{"voltage_v", round9(f.voltage)},
                           {"z0_nm", round9(units::m_to_nm(f.z0))},
                           {"z0_sigma_nm", round9(units::m_to_nm(f.z0_sigma))},
                           {"chi2", round9(f.chi2)},
                           {"n_points", f.n_points}});
  }
  detail["z0_fits"] = per_voltage;
  j["detail"] = detail;

  ordered_json meta = ordered_json::object();
  for (const auto& [k, val] : metadata) meta[k] = val;
  j["metadata"] = meta;
  return j.dump(2) + "\n";
}

}  // namespace casimir
