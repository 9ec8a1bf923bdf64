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

#include "casimir/force_curve.hpp"

#include <algorithm>
#include <cmath>

#include "casimir/errors.hpp"

namespace casimir {
namespace {

struct Line {
  double intercept;
  double slope;
  double at(double x) const { return intercept + slope * x; }
};

Line fit_line(const std::vector<double>& x, const std::vector<double>& y, std::size_t b, std::size_t e) {
  const double n = static_cast<double>(e - b);
  double mx = 0.0, my = 0.0;
  for (std::size_t i = b; i < e; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = b; i < e; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  const double slope = sxy / sxx;
  return {my - slope * mx, slope};
}

}  // namespace

const std::vector<double>& ForceCurve::force() const {
  if (observable != Observable::force) throw StateError("curve '" + scan_id + "' carries signal, not force");
  return values;
}

void ForceCurve::validate() const {
  if (piezo.size() != values.size()) throw DataError("piezo and observable lengths differ");
  if (piezo.size() < 10) throw DataError("force curve needs at least 10 samples");
  for (std::size_t i = 0; i < piezo.size(); ++i) {
    if (!std::isfinite(piezo[i]) || !std::isfinite(values[i])) throw DataError("non-finite sample");
    if (i > 0 && !(piezo[i] > piezo[i - 1])) throw DataError("piezo axis must be strictly increasing");
  }
}

void CalibrationParams::validate() const {
  if (!(spring_constant > 0.0)) throw DomainError("spring constant must be positive");
  if (!(deflection_sensitivity > 0.0)) throw DomainError("deflection sensitivity must be positive");
  if (hysteresis_poly.empty() || hysteresis_poly.front() != 0.0)
    throw DomainError("hysteresis polynomial must vanish at zero");
}

double CalibrationParams::hysteresis(double p) const {
  double v = 0.0;
  for (auto it = hysteresis_poly.rbegin(); it != hysteresis_poly.rend(); ++it) v = v * p + *it;
  return v;
}

ForceCurve signal_to_force(const ForceCurve& curve, const CalibrationParams& cal) {
  cal.validate();
  if (curve.observable != Observable::signal) throw StateError("curve '" + curve.scan_id + "' is already in force units");
  ForceCurve out = curve;
  for (auto& v : out.values) v = cal.spring_constant * (v * cal.deflection_sensitivity);
  out.observable = Observable::force;
  out.corrections.push_back("hooke");
  return out;
}

ForceCurve correct_separation_axis(const ForceCurve& curve, const CalibrationParams& cal) {
  cal.validate();
  const auto& f = curve.force();
  ForceCurve out = curve;
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out.piezo[i] = cal.hysteresis(curve.piezo[i]);
    if (i > 0 && !(out.piezo[i] > out.piezo[i - 1]))
      throw CalibrationError("hysteresis polynomial is not monotone over the scan range");
  }
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out.piezo[i] += f[i] / cal.spring_constant;
    if (i > 0 && !(out.piezo[i] > out.piezo[i - 1]))
      throw CalibrationError("deflection correction folds the separation axis");
  }
  out.corrections.push_back("hysteresis+deflection");
  return out;
}

RegionBounds regions_from_contact(const ForceCurve& curve, double contact_piezo, const RegionOptions& opt) {
  const auto& p = curve.piezo;
  auto first_beyond = [&](double x) {
    return static_cast<std::size_t>(std::upper_bound(p.begin(), p.end(), x) - p.begin());
  };
  RegionBounds r;
  r.contact_piezo = contact_piezo;
  r.contact_index = static_cast<std::size_t>(std::lower_bound(p.begin(), p.end(), contact_piezo) - p.begin());
  const std::size_t b2 = first_beyond(contact_piezo + opt.region2_lo);
  const std::size_t b3 = first_beyond(contact_piezo + opt.region2_hi);
  r.region1 = {0, b2};
  r.region2 = {b2, b3};
  r.region3 = {b3, p.size()};
  return r;
}

RegionBounds segment_regions(const ForceCurve& curve, const RegionOptions& opt) {
  curve.validate();
  const auto& x = curve.piezo;
  const auto& y = curve.force();
  const std::size_t n = x.size();
  const std::size_t w = std::clamp<std::size_t>(opt.window, 3, n / 2);

  const std::size_t nb = std::max<std::size_t>(5, static_cast<std::size_t>(opt.baseline_fraction * n));
  const Line base = fit_line(x, y, n - nb, n);
  double ss = 0.0;
  for (std::size_t i = n - nb; i < n; ++i) ss += std::pow(y[i] - base.at(x[i]), 2);
  double scale = 0.0;
  for (double v : y) scale = std::max(scale, std::abs(v));
  const double noise = std::max(std::sqrt(ss / static_cast<double>(nb - 2)), 1e-9 * scale);

  const double h = (x.back() - x.front()) / static_cast<double>(n - 1);
  const double wd = static_cast<double>(w);
  const double slope_noise = noise / (h * std::sqrt(wd * (wd * wd - 1.0) / 12.0));
  const double threshold = opt.slope_factor * std::max(slope_noise, std::abs(base.slope));

  // Flexing: force falls steeply as the plate backs off from contact.
  auto window_slope = [&](std::size_t i) { return fit_line(x, y, i, i + w).slope; };
  if (!(window_slope(0) <= -threshold)) throw SegmentationError("no flexing segment: scan never reaches contact");
  std::size_t last = 0;
  while (last + 1 + w <= n - nb && window_slope(last + 1) <= -threshold) ++last;
  std::size_t end = last + w;

  // Windows straddling contact pull in snap-in samples; drop trailing
  // samples that sit off the flexing line.
  Line flex = fit_line(x, y, 0, end);
  while (end > 3 && std::abs(y[end - 1] - flex.at(x[end - 1])) > 4.0 * noise) {
    --end;
    flex = fit_line(x, y, 0, end);
  }
  if (flex.slope == base.slope) throw SegmentationError("flexing and baseline lines are parallel");
  const double contact = (base.intercept - flex.intercept) / (flex.slope - base.slope);
  return regions_from_contact(curve, contact, opt);
}

ForceCurve slice(const ForceCurve& curve, IndexRange r) {
  if (r.end > curve.size() || r.begin > r.end) throw DomainError("slice outside the curve");
  ForceCurve out = curve;
  out.piezo.assign(curve.piezo.begin() + static_cast<std::ptrdiff_t>(r.begin),
                   curve.piezo.begin() + static_cast<std::ptrdiff_t>(r.end));
  out.values.assign(curve.values.begin() + static_cast<std::ptrdiff_t>(r.begin),
                    curve.values.begin() + static_cast<std::ptrdiff_t>(r.end));
  return out;
}

std::vector<double> interpolate_linear(const std::vector<double>& x, const std::vector<double>& y,
                                       const std::vector<double>& nodes) {
  if (x.size() != y.size() || x.size() < 2) throw DataError("interpolation needs matching arrays of >= 2 points");
  const double slack = 1e-9 * (x.back() - x.front());
  std::vector<double> out;
  out.reserve(nodes.size());
  for (double v : nodes) {
    if (v < x.front() - slack || v > x.back() + slack) throw DataError("interpolation node outside the data range");
    auto it = std::upper_bound(x.begin(), x.end(), v);
    std::size_t j = static_cast<std::size_t>(it - x.begin());
    j = std::clamp<std::size_t>(j, 1, x.size() - 1);
    if (v == x[j - 1]) {
      out.push_back(y[j - 1]);
      continue;
    }
    const double t = (v - x[j - 1]) / (x[j] - x[j - 1]);
    out.push_back(y[j - 1] + t * (y[j] - y[j - 1]));
  }
  return out;
}

}  // namespace casimir
