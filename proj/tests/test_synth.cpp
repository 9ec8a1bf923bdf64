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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "casimir/errors.hpp"
#include "casimir/synth.hpp"

using namespace casimir;

namespace {

const TheoryCurve& shared_theory() {
  static const TheoryCurve tc(TheoryParams{});
  return tc;
}

SynthTruth small_truth(std::uint64_t seed, double sigma = 7e-12) {
  auto t = default_truth();
  t.seed = seed;
  t.noise_sigma = sigma;
  t.n_scans = 3;
  return t;
}

double pfa(double gap, double dv) { return -std::numbers::pi * 8.8541878128e-12 * 100.85e-6 * dv * dv / gap; }

}  // namespace

TEST_CASE("splitmix64 reference outputs") {
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
  CHECK(splitmix64(1) != splitmix64(0));
}

TEST_CASE("noise stream statistics") {
  NoiseStream s(7, 0, 0);
  const int n = 200000;
  double m1 = 0.0, m2 = 0.0, m4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = s.normal();
    m1 += x;
    m2 += x * x;
    m4 += x * x * x * x;
  }
  m1 /= n;
  m2 /= n;
  m4 /= n;
  CHECK(std::abs(m1) < 5.0 / std::sqrt(n));
  CHECK(m2 == doctest::Approx(1.0).epsilon(0.02));
  CHECK(m4 == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("noise streams are reproducible and distinct") {
  NoiseStream a(7, 0, 3), b(7, 0, 3), c(7, 0, 4), d(7, 1, 3), e(8, 0, 3);
  for (int i = 0; i < 16; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    CHECK(x != c.normal());
    CHECK(x != d.normal());
    CHECK(x != e.normal());
  }
}

TEST_CASE("aligned grid lands on the window nodes") {
  AnalysisConfig a;
  const double z0 = 48.9e-9, cap = 15.8e-9;
  const auto g = aligned_grid(z0, cap, a);
  const auto nodes = window_nodes(a);
  CHECK(g.front() >= 20e-9);
  CHECK(g.back() <= 1500e-9);
  std::size_t hits = 0;
  for (double z : g)
    for (double n : nodes)
      if (std::abs(z + z0 + cap - n) < 1e-15) ++hits;
  CHECK(hits == nodes.size());
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] - g[i - 1] == doctest::Approx(400e-9 / 440).epsilon(1e-9));
}

TEST_CASE("uniform grid") {
  const auto g = uniform_grid(1.0, 2.0, 5);
  CHECK(g == std::vector<double>{1.0, 1.25, 1.5, 1.75, 2.0});
  CHECK_THROWS_AS(uniform_grid(1.0, 1.0, 5), DomainError);
  CHECK_THROWS_AS(uniform_grid(1.0, 2.0, 1), DomainError);
}

TEST_CASE("truth validation") {
  auto t = default_truth();
  CHECK_NOTHROW(t.validate());
  t.grid.front() = -t.z0_true;
  CHECK_THROWS_AS(t.validate(), DomainError);
  t = default_truth();
  std::swap(t.grid[3], t.grid[4]);
  CHECK_THROWS_AS(t.validate(), DomainError);
  t = default_truth();
  t.noise_sigma = -1.0;
  CHECK_THROWS_AS(t.validate(), DomainError);
}

TEST_CASE("noiseless scans follow the generating model") {
  const auto t = small_truth(1, 0.0);
  const auto& tc = shared_theory();
  const auto scans = generate_scans(t, tc);
  REQUIRE(scans.size() == 3);
  CHECK(scans[0].scan_id == "casimir_000");
  CHECK(scans[0].applied_voltage == 0.0);
  for (std::size_t i = 0; i < t.grid.size(); i += 37) {
    const double z = t.grid[i], gap = z + t.z0_true;
    const double model = tc.at_gap(gap) + pfa(gap, -t.V2_residual) + t.C_true * z;
    CHECK(scans[0].values[i] == doctest::Approx(model).epsilon(1e-12));
    CHECK(scans[1].values[i] == scans[0].values[i]);
  }

  const auto electro = generate_electrostatic_scans(t, tc);
  REQUIRE(electro.size() == t.applied_voltages.size());
  for (std::size_t j = 0; j < electro.size(); ++j) {
    const double v = t.applied_voltages[j];
    CHECK(electro[j].applied_voltage == v);
    const double z = t.grid[100], gap = z + t.z0_true;
    CHECK(electro[j].values[100] ==
          doctest::Approx(tc.at_gap(gap) + pfa(gap, v - t.V2_residual) + t.C_true * z).epsilon(1e-12));
  }

  const auto cal = generate_calibration_scans(t, tc);
  REQUIRE(cal.size() == t.calibration_voltages.size());
  for (const auto& c : cal) {
    CHECK(c.observable == Observable::signal);
    CHECK_FALSE(c.spring_constant.has_value());
    ElectrostaticConfig e;
    e.v1 = c.applied_voltage;
    e.v2 = t.V2_residual;
    const double z = c.piezo[50], gap = z + t.z0_true;
    const double f = sphere_plane_force_exact(gap, e) + tc.at_gap(gap) + t.C_true * z;
    CHECK(c.values[50] == doctest::Approx(f / t.k_true / t.deflection_sensitivity).epsilon(1e-12));
  }
}

TEST_CASE("noise residuals have the configured spread") {
  const auto noisy = generate_scans(small_truth(5), shared_theory());
  const auto clean = generate_scans(small_truth(5, 0.0), shared_theory());
  double ss = 0.0;
  std::size_t n = 0;
  for (std::size_t s = 0; s < noisy.size(); ++s)
    for (std::size_t i = 0; i < noisy[s].size(); ++i, ++n) ss += std::pow(noisy[s].values[i] - clean[s].values[i], 2);
  CHECK(std::sqrt(ss / static_cast<double>(n)) == doctest::Approx(7e-12).epsilon(0.05));
}

TEST_CASE("campaign generation is deterministic in the seed") {
  const auto a = generate_campaign(small_truth(42), shared_theory());
  const auto b = generate_campaign(small_truth(42), shared_theory());
  const auto c = generate_campaign(small_truth(43), shared_theory());
  REQUIRE(a.casimir.size() == b.casimir.size());
  for (std::size_t i = 0; i < a.casimir.size(); ++i) CHECK(a.casimir[i].values == b.casimir[i].values);
  for (std::size_t i = 0; i < a.electrostatic.size(); ++i) CHECK(a.electrostatic[i].values == b.electrostatic[i].values);
  CHECK(a.casimir[0].values != c.casimir[0].values);
  // Scans draw from independent streams.
  CHECK(a.casimir[0].values != a.casimir[1].values);
}

TEST_CASE("raw scan shape") {
  RawScanSpec spec;
  spec.noise_sigma = 0.0;
  const auto raw = generate_raw_scan(spec, [](double) { return 0.0; });
  REQUIRE(raw.size() == spec.n);
  CHECK(raw.observable == Observable::signal);
  const double k = spec.k, s = spec.deflection_sensitivity;
  CHECK(raw.values[10] * k * s == doctest::Approx(k * (spec.contact_piezo - raw.piezo[10])));
  CHECK(raw.values[300] == 0.0);
}

TEST_CASE("truth sidecar") {
  const auto t = small_truth(9);
  const auto j = nlohmann::json::parse(truth_json(t));
  CHECK(j["seed"] == 9);
  CHECK(j.contains("z0_true_nm"));
  CHECK(j.contains("noise_sigma_pn"));
}
