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
#include <memory>
#include <sstream>
#include <thread>
#include <vector>

#include "casimir/constants.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/errors.hpp"
#include "oracles.hpp"

using namespace casimir;

namespace {

std::string parse_message(const std::string& text) {
  std::istringstream in(text);
  try {
    load_optical_table(in);
  } catch (const ParseError& e) {
    return e.what();
  }
  return {};
}

double xi_of(double ev) { return energy_ev_to_angular_frequency(ev); }

}  // namespace

TEST_CASE("optical table parsing") {
  std::istringstream two("0.04,50.0\n0.05,45.0\n");
  const auto t = load_optical_table(two);
  CHECK(t.points().size() == 2);
  CHECK(t.points()[1].eps2 == 45.0);

  std::istringstream labelled("# material=Al\n# comment\nenergy_ev,eps2\n0.04,50\n\n1,2\n");
  const auto l = load_optical_table(labelled);
  CHECK(l.material_label() == "Al");
  CHECK(l.points().size() == 2);

  CHECK(parse_message("0.05,45.0\n0.04,50.0\n").find("non-increasing energy at line 2") != std::string::npos);
  CHECK(parse_message("0.04,50.0\n0.05,-1\n").find("negative eps2") != std::string::npos);
  CHECK(parse_message("0.04,50.0\n0.05,abc\n").find("line 2") != std::string::npos);
  CHECK(parse_message("0.04,50.0,1\n0.05,1\n").find("line 1") != std::string::npos);
  CHECK(parse_message("0.04,50.0\n0.04,1\n").find("non-increasing energy at line 2") != std::string::npos);
}

TEST_CASE("optical table file errors name the file") {
  try {
    load_optical_table_file("/nonexistent/table.csv");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("/nonexistent/table.csv") != std::string::npos);
  }
}

TEST_CASE("optical table interpolation is log-log") {
  OpticalTable t({{1.0, 8.0}, {4.0, 0.125}});
  // eps2 ~ E^-3 between the nodes
  CHECK(t.eps2_at(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_THROWS_AS(t.eps2_at(5.0), DomainError);
  CHECK_THROWS_AS(OpticalTable({{1.0, 1.0}}), DomainError);
  CHECK_THROWS_AS(OpticalTable({{1.0, 1.0}, {2.0, -1.0}}), DomainError);
}

TEST_CASE("drude closed form") {
  const double wp = xi_of(12.3984);
  CHECK(drude_eps_imag_axis(wp, {wp, 0.0}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(drude_eps_imag_axis(10.0 * wp, {wp, 0.0}) == doctest::Approx(1.01).epsilon(1e-14));
  const auto al = DrudeParams::from_ev(12.3984, 0.063);
  // 1 + 1 / (1 + gamma / omega_p)
  CHECK(drude_eps_imag_axis(wp, al) == doctest::Approx(1.0 + 1.0 / (1.0 + 0.063 / 12.3984)).epsilon(1e-13));
  CHECK(drude_eps_imag_axis(wp, al) == doctest::Approx(1.994945).epsilon(1e-6));
  CHECK_THROWS_AS(drude_eps_imag_axis(0.0, al), DomainError);
  CHECK_THROWS_AS(drude_eps_imag_axis(-1.0, al), DomainError);
  double prev = INFINITY;
  for (double ev = 1e-4; ev < 1e5; ev *= 1.3) {
    const double v = drude_eps_imag_axis(xi_of(ev), al);
    CHECK(v < prev);
    prev = v;
  }
  CHECK(drude_eps_imag_axis(xi_of(1e7), al) - 1.0 < 1e-11);
}

TEST_CASE("aluminum drude defaults") {
  const auto al = DrudeParams::aluminum();
  CHECK(angular_frequency_to_energy_ev(al.omega_p) ==
        doctest::Approx(6.62607015e-34 * oracle::c / 100e-9 / oracle::ev).epsilon(1e-12));
  CHECK(angular_frequency_to_energy_ev(al.omega_p) == doctest::Approx(12.398).epsilon(1e-4));
  CHECK(angular_frequency_to_energy_ev(al.gamma) == doctest::Approx(0.063).epsilon(1e-12));
}

TEST_CASE("constant model bypasses the integral") {
  const auto m = DielectricModel::constant(3.0);
  for (double ev : {1e-3, 1.0, 1e3}) CHECK(eps_imag_axis(m, xi_of(ev)) == 3.0);
  CHECK_THROWS_AS(DielectricModel::constant(0.5), DomainError);
  CHECK_THROWS_AS(eps_imag_axis(m, 0.0), DomainError);
}

TEST_CASE("dispersion integral of the drude spectrum reproduces the closed form") {
  const auto al = DrudeParams::aluminum();
  for (double ev = 0.01; ev <= 100.0 * 1.0001; ev *= 1.5) {
    const double xi = xi_of(ev);
    const double q = dispersion_integral([&](double w) { return drude_eps2(w, al); }, xi);
    CHECK(std::abs(q / drude_eps_imag_axis(xi, al) - 1.0) < 1e-3);
  }
  // empty spectrum
  for (double ev : {1e-3, 1.0, 1e3}) CHECK(dispersion_integral([](double) { return 0.0; }, xi_of(ev)) == 1.0);
}

TEST_CASE("tabulated model with a drude-generated table matches the drude closed form") {
  const auto al = DrudeParams::aluminum();
  const auto table = std::make_shared<const OpticalTable>(oracle::drude_table(al, 0.04, 1000.0, 400));
  const auto m = DielectricModel::tabulated(table, al, 0.04);
  for (double ev = 0.01; ev <= 100.0; ev *= 1.7) {
    const double xi = xi_of(ev);
    CHECK(std::abs(eps_imag_axis(m, xi) / drude_eps_imag_axis(xi, al) - 1.0) < 1e-3);
  }
}

TEST_CASE("tabulated model against direct quadrature of the interpolated spectrum") {
  // A structured spectrum: Drude background plus an interband bump near 1.5 eV.
  const auto al = DrudeParams::aluminum();
  std::vector<OpticalPoint> pts;
  for (double e = 0.04; e <= 1000.0 * 1.0000001; e *= 1.08) {
    const double w = energy_ev_to_angular_frequency(e);
    pts.push_back({e, drude_eps2(w, al) + 20.0 * std::exp(-std::pow((e - 1.5) / 0.3, 2))});
  }
  pts.back().energy_ev = std::min(pts.back().energy_ev, 1000.0);
  const auto table = std::make_shared<const OpticalTable>(pts);
  for (auto tail : {HighEnergyTail::inverse_cube, HighEnergyTail::none}) {
    const auto m = DielectricModel::tabulated(table, al, 0.04, 8, tail);
    for (double ev : {0.01, 0.1, 1.0, 3.0, 10.0, 50.0}) {
      const double xi = xi_of(ev);
      const double ref = oracle::tabulated_eps_direct(*table, al, 0.04, tail == HighEnergyTail::inverse_cube, xi);
      CHECK(std::abs(eps_imag_axis(m, xi) / ref - 1.0) < 2e-3);
    }
  }
}

TEST_CASE("tabulated model converges under refinement") {
  const auto al = DrudeParams::aluminum();
  const auto table = std::make_shared<const OpticalTable>(oracle::drude_table(al, 0.04, 1000.0, 120));
  for (double ev : {0.05, 0.5, 5.0, 50.0}) {
    const double xi = xi_of(ev);
    const double a = eps_imag_axis(DielectricModel::tabulated(table, al, 0.04, 8), xi);
    const double b = eps_imag_axis(DielectricModel::tabulated(table, al, 0.04, 16), xi);
    CHECK(std::abs(a / b - 1.0) < 1e-3);
  }
}

TEST_CASE("crossover must lie in the table range") {
  const auto al = DrudeParams::aluminum();
  const auto table = std::make_shared<const OpticalTable>(oracle::drude_table(al, 0.04, 1000.0, 20));
  CHECK_THROWS_AS(DielectricModel::tabulated(table, al, 0.01), DomainError);
  CHECK_THROWS_AS(DielectricModel::tabulated(table, al, 2000.0), DomainError);
  CHECK_THROWS_AS(DielectricModel::tabulated(nullptr, al, 0.04), DomainError);
}

TEST_CASE("zero table leaves only the low-energy drude segment") {
  const auto al = DrudeParams::aluminum();
  const auto table = std::make_shared<const OpticalTable>(std::vector<OpticalPoint>{{0.04, 0.0}, {1000.0, 0.0}});
  const auto m = DielectricModel::tabulated(table, al, 0.04, 4, HighEnergyTail::none);
  const double wc = energy_ev_to_angular_frequency(0.04);
  for (double ev : {0.01, 1.0, 100.0}) {
    const double xi = xi_of(ev);
    const double ref = dispersion_integral([&](double w) { return w < wc ? drude_eps2(w, al) : 0.0; }, xi, 1e-12);
    CHECK(std::abs(eps_imag_axis(m, xi) - ref) < 1e-4 * ref);
  }
}

TEST_CASE("permittivity is at least one and non-increasing for every model") {
  const auto al = DrudeParams::aluminum();
  const auto table = std::make_shared<const OpticalTable>(oracle::drude_table(al, 0.04, 1000.0, 60));
  const std::vector<DielectricModel> models{DielectricModel::drude(al), DielectricModel::constant(1.0),
                                            DielectricModel::constant(7.0), DielectricModel::tabulated(table, al)};
  for (const auto& m : models) {
    double prev = INFINITY;
    for (double ev = 1e-3; ev < 1e4; ev *= 1.25) {
      const double v = eps_imag_axis(m, xi_of(ev));
      CHECK(v >= 1.0);
      CHECK(v <= prev);
      prev = v;
    }
  }
}

TEST_CASE("epsilon cache is consistent under concurrent fills") {
  EpsilonCache cache(DielectricModel::drude(DrudeParams::aluminum()));
  std::vector<double> xs;
  for (int i = 0; i < 200; ++i) xs.push_back(xi_of(0.01 * (1 + i)));
  std::vector<std::vector<double>> got(4);
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < 4; ++w)
      pool.emplace_back([&, w] {
        for (double x : xs) got[w].push_back(cache(x));
      });
  }
  CHECK(cache.size() == xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double ref = eps_imag_axis(cache.model(), xs[i]);
    for (const auto& g : got) CHECK(g[i] == ref);
  }
}
