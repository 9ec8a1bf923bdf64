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
#include <numbers>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"
#include "casimir/lifshitz.hpp"
#include "oracles.hpp"

using namespace casimir;

namespace {

const SphereGeometry kGeom = SphereGeometry::reference();
const DielectricModel kAl = DielectricModel::drude(DrudeParams::aluminum());

double closed_form_sphere(double z, double R) {
  return -std::pow(std::numbers::pi, 3) * oracle::hbar * oracle::c * R / (360.0 * z * z * z);
}

}  // namespace

TEST_CASE("reflection terms") {
  for (double p : {1.0, 2.5, 40.0}) {
    const auto r = reflection_terms(1.0, p);
    CHECK(r.s == doctest::Approx(p));
    CHECK(r.r_te == 0.0);
    CHECK(r.r_tm == 0.0);
  }
  const auto t = reflection_terms(2.0, 1.0);
  const double s = std::sqrt(2.0);
  CHECK(t.s == doctest::Approx(s).epsilon(1e-15));
  CHECK(t.r_te == doctest::Approx((s - 1.0) / (s + 1.0)).epsilon(1e-14));
  CHECK(t.r_tm == doctest::Approx((s - 2.0) / (s + 2.0)).epsilon(1e-14));
  CHECK(t.r_te == doctest::Approx(0.17157).epsilon(1e-4));
  CHECK(t.r_tm == doctest::Approx(-0.17157).epsilon(1e-4));

  const auto big = reflection_terms(1e12, 3.0);
  CHECK(big.r_te == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(big.r_tm == doctest::Approx(-1.0).epsilon(1e-5));
  const auto inf = reflection_terms(INFINITY, 3.0);
  CHECK(inf.r_tm == -1.0);

  // textbook ratios over a grid
  for (double eps : {1.001, 1.5, 10.0, 1e4, 1e9}) {
    for (double p : {1.0, 1.3, 7.0, 300.0}) {
      const auto r = reflection_terms(eps, p);
      const double ss = std::sqrt(eps - 1.0 + p * p);
      CHECK(std::abs(r.r_te - (ss - p) / (ss + p)) <= 1e-12);
      CHECK(std::abs(r.r_tm - (ss - eps * p) / (ss + eps * p)) <= 1e-12);
      CHECK(std::abs(r.r_te) <= 1.0);
      CHECK(std::abs(r.r_tm) <= 1.0);
    }
  }
  CHECK_THROWS_AS(reflection_terms(0.5, 1.0), DomainError);
  CHECK_THROWS_AS(reflection_terms(2.0, 0.5), DomainError);
}

TEST_CASE("ideal sphere-plate closed form") {
  const double f = ideal_casimir_sphere_plate(100e-9, kGeom);
  CHECK(f == doctest::Approx(closed_form_sphere(100e-9, kGeom.radius)).epsilon(1e-14));
  CHECK(f * 1e12 == doctest::Approx(-274.6).epsilon(1e-3));
  CHECK(ideal_casimir_sphere_plate(200e-9, kGeom) == doctest::Approx(f / 8.0).epsilon(1e-14));
  CHECK(ideal_casimir_sphere_plate(100e-9, {2.0 * kGeom.radius}) == doctest::Approx(2.0 * f).epsilon(1e-14));
  CHECK_THROWS_AS(ideal_casimir_sphere_plate(0.0, kGeom), DomainError);
}

TEST_CASE("ideal parallel-plate pressure") {
  const double p = ideal_casimir_parallel_plates(1e-6);
  CHECK(p == doctest::Approx(-std::pow(std::numbers::pi, 2) * oracle::hbar * oracle::c / 240e-24).epsilon(1e-14));
  CHECK(p * 1e3 == doctest::Approx(-1.300).epsilon(1e-3));
  CHECK(ideal_casimir_parallel_plates(2e-6) == doctest::Approx(p / 16.0).epsilon(1e-14));
  CHECK(std::abs(ideal_casimir_parallel_plates(1e-12)) > 1e20);
  CHECK_THROWS_AS(ideal_casimir_parallel_plates(-1.0), DomainError);
}

TEST_CASE("vacuum gives no force") {
  const auto vac = DielectricModel::constant(1.0);
  for (double z : {100e-9, 200e-9, 500e-9, 1e-6}) CHECK(std::abs(casimir_force_sphere_plate(z, kGeom, vac)) < 1e-24);
}

TEST_CASE("large constant permittivity approaches the ideal limit") {
  // A non-dispersive dielectric is scale free, so F/F_ideal does not depend
  // on z and its deficit falls off roughly as ln(eps)/sqrt(eps).
  double prev = 1.0;
  for (double e : {1e4, 1e6, 1e8}) {
    const auto m = DielectricModel::constant(e);
    const double deficit = 1.0 - casimir_force_sphere_plate(100e-9, kGeom, m) / closed_form_sphere(100e-9, kGeom.radius);
    CHECK(deficit > 0.0);
    CHECK(deficit < prev);
    prev = deficit;
  }
  const auto m = DielectricModel::constant(1e6);
  for (double z : {100e-9, 200e-9, 300e-9, 500e-9}) {
    const double ratio = casimir_force_sphere_plate(z, kGeom, m) / closed_form_sphere(z, kGeom.radius);
    // independent scipy evaluation of the same double integral: 0.98606696
    CHECK(ratio == doctest::Approx(0.98606696).epsilon(2e-6));
    CHECK(std::abs(ratio - 1.0) > 1e-2);
  }
  // the integral itself is exact in the limit
  const auto inf = DielectricModel::constant(INFINITY);
  QuadratureParams q;
  q.rel_tol = 1e-9;
  CHECK(casimir_force_sphere_plate(150e-9, kGeom, inf, q) ==
        doctest::Approx(closed_form_sphere(150e-9, kGeom.radius)).epsilon(1e-8));
}

TEST_CASE("drude aluminum against the direct double integral") {
  const auto al = DrudeParams::aluminum();
  auto eps = [&](double xi) { return 1.0 + al.omega_p * al.omega_p / (xi * xi + al.gamma * xi); };
  for (double z : {100e-9, 200e-9, 500e-9}) {
    const double f = casimir_force_sphere_plate(z, kGeom, kAl);
    const double ref = oracle::lifshitz_direct(z, kGeom.radius, eps);
    CHECK(std::abs(f / ref - 1.0) < 1e-5);
  }
  const double f100 = casimir_force_sphere_plate(100e-9, kGeom, kAl) * 1e12;
  CHECK(f100 >= -185.0);
  CHECK(f100 <= -140.0);
}

TEST_CASE("constant dielectric against the direct double integral") {
  for (double e : {2.0, 11.7, 1e3}) {
    const auto m = DielectricModel::constant(e);
    const double f = casimir_force_sphere_plate(300e-9, kGeom, m);
    const double ref = oracle::lifshitz_direct(300e-9, kGeom.radius, [e](double) { return e; });
    CHECK(std::abs(f / ref - 1.0) < 1e-5);
  }
}

TEST_CASE("force is attractive, decreasing and bounded by the ideal limit") {
  double prev = -INFINITY;
  for (double z = 60e-9; z <= 2e-6; z *= 1.25) {
    const double f = casimir_force_sphere_plate(z, kGeom, kAl);
    CHECK(f < 0.0);
    CHECK(std::abs(f) < std::abs(closed_form_sphere(z, kGeom.radius)));
    if (std::isfinite(prev)) CHECK(std::abs(f) < std::abs(prev));
    prev = f;
  }
}

TEST_CASE("effective power law of drude aluminum") {
  // Finite conductivity weakens the force most at small z, so F(2z)/F(z)
  // lies between the ideal 1/8 and the z^-2 limit 1/4.
  for (double z : {100e-9, 150e-9, 250e-9}) {
    const double ratio = casimir_force_sphere_plate(2.0 * z, kGeom, kAl) / casimir_force_sphere_plate(z, kGeom, kAl);
    CHECK(ratio > 1.0 / 8.0);
    CHECK(ratio < 1.0 / 4.0);
  }
}

TEST_CASE("result converges when the tolerance is tightened") {
  for (double z : {100e-9, 400e-9}) {
    double prev_tol = 1e-5;
    double prev = casimir_force_sphere_plate(z, kGeom, kAl, {prev_tol});
    for (double tol : {1e-6, 1e-7, 1e-8}) {
      QuadratureParams q;
      q.rel_tol = tol;
      const double f = casimir_force_sphere_plate(z, kGeom, kAl, q);
      CHECK(std::abs(f / prev - 1.0) < prev_tol);
      prev = f;
      prev_tol = tol;
    }
  }
}

TEST_CASE("tight budgets report non-convergence with the last estimate") {
  QuadratureParams q;
  q.rel_tol = 1e-10;
  q.max_refinements = 1;
  try {
    casimir_force_sphere_plate(100e-9, kGeom, kAl, q);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.estimate() < 0.0);
    CHECK(e.error_bound() > 0.0);
  }
}

TEST_CASE("geometry and parameter guards") {
  CHECK_THROWS_AS(casimir_force_sphere_plate(0.05 * kGeom.radius, kGeom, kAl), GeometryError);
  CHECK_THROWS_AS(casimir_force_sphere_plate(0.0, kGeom, kAl), DomainError);
  QuadratureParams q;
  q.rel_tol = 0.1;
  CHECK_THROWS_AS(casimir_force_sphere_plate(1e-7, kGeom, kAl, q), DomainError);
  q = {};
  q.xi_cut_multiplier = 10.0;
  CHECK_THROWS_AS(casimir_force_sphere_plate(1e-7, kGeom, kAl, q), DomainError);
}

TEST_CASE("parallel grid is bitwise identical to serial evaluation") {
  std::vector<double> z;
  for (int i = 0; i < 9; ++i) z.push_back(100e-9 + 50e-9 * i);
  const auto serial = casimir_force_grid(z, kGeom, kAl, {}, 1);
  const auto parallel = casimir_force_grid(z, kGeom, kAl, {}, 4);
  for (std::size_t i = 0; i < z.size(); ++i) {
    CHECK(serial[i] == parallel[i]);
    CHECK(serial[i] == casimir_force_sphere_plate(z[i], kGeom, kAl));
  }
}

TEST_CASE("high-energy tail choice barely moves the force") {
  const auto al = DrudeParams::aluminum();
  const auto table = std::make_shared<const OpticalTable>(oracle::drude_table(al, 0.04, 1000.0, 200));
  const auto cubic = DielectricModel::tabulated(table, al, 0.04, 4, HighEnergyTail::inverse_cube);
  const auto none = DielectricModel::tabulated(table, al, 0.04, 4, HighEnergyTail::none);
  for (double z : {100e-9, 300e-9, 500e-9}) {
    const double a = casimir_force_sphere_plate(z, kGeom, cubic);
    const double b = casimir_force_sphere_plate(z, kGeom, none);
    CHECK(std::abs(a / b - 1.0) < 1e-3);
    // and the drude-generated table reproduces the closed-form model
    CHECK(std::abs(a / casimir_force_sphere_plate(z, kGeom, kAl) - 1.0) < 1e-3);
  }
}
