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

#include "casimir/scan_io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include <fmt/format.h>

#include "casimir/errors.hpp"
#include "casimir/units.hpp"
#include "text_util.hpp"

namespace casimir {

ForceCurve load_scan(std::istream& in) {
  ForceCurve c;
  std::optional<std::string> scan_id;
  std::optional<double> voltage;
  bool have_header = false;
  std::size_t header_line = 0;
  std::string line;
  std::size_t lineno = 0;

  auto meta_double = [&](const std::string& key, const std::string& v) {
    const auto d = detail::parse_double(v);
    if (!d) throw ParseError("malformed value for '" + key + "'", lineno);
    return *d;
  };

  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (have_header) continue;
      const auto kv = detail::parse_meta(t);
      if (!kv) continue;
      const auto& [key, value] = *kv;
      if (key == "scan_id") {
        scan_id = value;
      } else if (key == "applied_voltage_v") {
        voltage = meta_double(key, value);
      } else if (key == "spring_constant_n_per_m") {
        c.spring_constant = meta_double(key, value);
      } else if (key == "temperature_k") {
        c.temperature = meta_double(key, value);
      } else {
        c.metadata[key] = value;
      }
      continue;
    }
    const auto fields = detail::split(t, ',');
    if (!have_header) {
      header_line = lineno;
      const bool sig = std::find(fields.begin(), fields.end(), "signal") != fields.end();
      const bool frc = std::find(fields.begin(), fields.end(), "force_pn") != fields.end();
      if (sig && frc) throw ParseError("ambiguous observable: both signal and force_pn columns", lineno);
      if (fields.size() != 2 || fields[0] != "piezo_nm" || !(sig || frc))
        throw ParseError("expected header 'piezo_nm,signal' or 'piezo_nm,force_pn'", lineno);
      if (!scan_id) throw ParseError("missing metadata key 'scan_id'", lineno);
      if (!voltage) throw ParseError("missing metadata key 'applied_voltage_v'", lineno);
      c.observable = sig ? Observable::signal : Observable::force;
      have_header = true;
      continue;
    }
    if (fields.size() != 2) throw ParseError("length mismatch: expected 2 fields", lineno);
    const auto p = detail::parse_double(fields[0]);
    const auto v = detail::parse_double(fields[1]);
    if (!p || !v) throw ParseError("malformed number", lineno);
    const double pm = units::nm_to_m(*p);
    if (!c.piezo.empty() && !(pm > c.piezo.back()))
      throw ParseError("non-monotone piezo at line " + std::to_string(lineno), lineno);
    c.piezo.push_back(pm);
    c.values.push_back(c.observable == Observable::force ? units::pn_to_n(*v) : *v);
  }
  if (!have_header) {
    if (!scan_id) throw ParseError("missing metadata key 'scan_id'", lineno);
    if (!voltage) throw ParseError("missing metadata key 'applied_voltage_v'", lineno);
    throw ParseError("missing column header", lineno);
  }
  if (c.piezo.size() < 10) throw ParseError("scan needs at least 10 samples", header_line);
  c.scan_id = *scan_id;
  c.applied_voltage = *voltage;
  return c;
}

ForceCurve load_scan_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open scan file", 0, path);
  try {
    return load_scan(f);
  } catch (const ParseError& e) {
    throw e.with_file(path);
  }
}

void write_scan(std::ostream& out, const ForceCurve& curve) {
  curve.validate();
  out << "# scan_id=" << curve.scan_id << '\n';
  out << fmt::format("# applied_voltage_v={:.9g}\n", curve.applied_voltage);
  if (curve.spring_constant) out << fmt::format("# spring_constant_n_per_m={:.9g}\n", *curve.spring_constant);
  if (curve.temperature) out << fmt::format("# temperature_k={:.9g}\n", *curve.temperature);
  for (const auto& [k, v] : curve.metadata) out << "# " << k << '=' << v << '\n';
  const bool force = curve.observable == Observable::force;
  out << (force ? "piezo_nm,force_pn\n" : "piezo_nm,signal\n");
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double v = force ? units::n_to_pn(curve.values[i]) : curve.values[i];
    out << fmt::format("{:.9g},{:.9g}\n", units::m_to_nm(curve.piezo[i]), v);
  }
}

}  // namespace casimir
