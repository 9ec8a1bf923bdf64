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

#include <cmath>
#include <fstream>
#include <istream>
#include <string>

#include "casimir/dielectric.hpp"
#include "casimir/errors.hpp"
#include "text_util.hpp"

namespace casimir {

OpticalTable::OpticalTable(std::vector<OpticalPoint> points, std::string material_label)
    : points_(std::move(points)), label_(std::move(material_label)) {
  if (points_.size() < 2) throw DomainError("optical table needs at least 2 points");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!(points_[i].energy_ev > 0.0)) throw DomainError("optical table energies must be positive");
    if (!(points_[i].eps2 >= 0.0)) throw DomainError("negative eps2 in optical table");
    if (i > 0 && !(points_[i].energy_ev > points_[i - 1].energy_ev))
      throw DomainError("optical table energies must be strictly increasing");
  }
}

double OpticalTable::eps2_at(double e) const {
  if (e < min_energy_ev() || e > max_energy_ev())
    throw DomainError("energy outside optical table range");
  auto it = std::lower_bound(points_.begin(), points_.end(), e,
                             [](const OpticalPoint& p, double v) { return p.energy_ev < v; });
  if (it == points_.begin()) return it->eps2;
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  if (hi.energy_ev == e) return hi.eps2;
  if (lo.eps2 > 0.0 && hi.eps2 > 0.0) {
    const double f = std::log(e / lo.energy_ev) / std::log(hi.energy_ev / lo.energy_ev);
    return lo.eps2 * std::pow(hi.eps2 / lo.eps2, f);
  }
  const double f = (e - lo.energy_ev) / (hi.energy_ev - lo.energy_ev);
  return lo.eps2 + f * (hi.eps2 - lo.eps2);
}

OpticalTable load_optical_table(std::istream& in) {
  std::vector<OpticalPoint> pts;
  std::string label;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    if (t.front() == '#') {
      if (auto kv = detail::parse_meta(t); kv && kv->first == "material") label = kv->second;
      continue;
    }
    const auto fields = detail::split(t, ',');
    if (fields.size() != 2) throw ParseError("expected 'energy_ev,eps2'", lineno);
    const auto e = detail::parse_double(fields[0]);
    const auto v = detail::parse_double(fields[1]);
    if (!e || !v) {
      // A single non-numeric row before any data is accepted as a header.
      if (pts.empty() && fields[0] == "energy_ev") continue;
      throw ParseError("malformed number", lineno);
    }
    if (!(*e > 0.0)) throw ParseError("non-positive energy", lineno);
    if (*v < 0.0) throw ParseError("negative eps2", lineno);
    if (!pts.empty() && !(*e > pts.back().energy_ev))
      throw ParseError("non-increasing energy at line " + std::to_string(lineno), lineno);
    pts.push_back({*e, *v});
  }
  if (pts.size() < 2) throw ParseError("optical table needs at least 2 data rows", 0);
  return OpticalTable(std::move(pts), std::move(label));
}

OpticalTable load_optical_table_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ParseError("cannot open optical table", 0, path);
  try {
    return load_optical_table(f);
  } catch (const ParseError& e) {
    throw e.with_file(path);
  }
}

}  // namespace casimir
