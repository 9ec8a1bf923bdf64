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

#include "casimir/lifshitz.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "casimir/constants.hpp"
#include "casimir/errors.hpp"

namespace casimir {
namespace {

using Rule = boost::math::quadrature::gauss_kronrod<double, 15>;
constexpr double pi = std::numbers::pi;

void check_gap(double z, const SphereGeometry& geom) {
  if (!(z > 0.0)) throw DomainError("separation must be positive");
  if (!(geom.radius > 0.0)) throw DomainError("sphere radius must be positive");
  if (!(z / geom.radius < kMaxGapOverRadius)) throw GeometryError("z/R outside the proximity regime (>= 0.05)");
}

}  // namespace

void QuadratureParams::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2)) throw DomainError("quadrature rel_tol must lie in (0, 1e-2]");
  if (!(abs_tol >= 0.0)) throw DomainError("quadrature abs_tol must be non-negative");
  if (!(xi_cut_multiplier >= 20.0)) throw DomainError("xi cut multiplier must be >= 20");
  if (!(p_cut >= 20.0)) throw DomainError("p cut must be >= 20");
  if (max_refinements < 1) throw DomainError("max_refinements must be >= 1");
}

ReflectionTerms reflection_terms(double eps, double p) {
  if (!(eps >= 1.0)) throw DomainError("permittivity on the imaginary axis must be >= 1");
  if (!(p >= 1.0)) throw DomainError("p must be >= 1");
  if (std::isinf(eps)) return {eps, 1.0, -1.0};
  const double em1 = eps - 1.0;
  const double s = std::sqrt(em1 + p * p);
  // Rationalized forms; they stay accurate when eps -> 1 or p >> eps.
  const double r_te = em1 / ((s + p) * (s + p));
  const double d = s + eps * p;
  const double r_tm = em1 * (1.0 - p * p * (eps + 1.0)) / (d * d);
  return {s, r_te, r_tm};
}

LifshitzResult casimir_force_sphere_plate_detailed(double z, const SphereGeometry& geom,
                                                   const DielectricModel& model, const QuadratureParams& q) {
  check_gap(z, geom);
  q.validate();

  // F = (hbar R / 2 pi c^2) int xi^2 dxi int_1^inf p dp sum_pol ln(1 - r^2 e^{-2 p xi z / c}).
  // With t = 2 xi z / c and u = p t the xi^2 and p^-2 Jacobians cancel:
  // F = (hbar c R / 16 pi z^3) int_0^T dt int_t^U u sum_pol ln(1 - r^2(xi, u/t) e^{-u}) du.
  const double prefactor = phys::hbar * phys::c * geom.radius / (16.0 * pi * z * z * z);
  const double u_cut = q.p_cut;
  const double t_cut = std::min(q.xi_cut_multiplier, u_cut);
  const double xi_scale = phys::c / (2.0 * z);

  // Inner tolerance tighter than the outer one so inner noise stays below it.
  const double inner_tol = q.rel_tol * 0.1;
  double worst_inner = 0.0;
  double inner_scale = 0.0;

  auto outer = [&](double t) {
    if (t >= u_cut) return 0.0;
    const double eps = eps_imag_axis(model, t * xi_scale);
    if (eps == 1.0) return 0.0;
    auto inner = [&](double u) {
      const auto r = reflection_terms(eps, u / t);
      const double e = std::exp(-u);
      return u * (std::log1p(-r.r_te * r.r_te * e) + std::log1p(-r.r_tm * r.r_tm * e));
    };
    // u ln u behaviour at small u: integrate [t, 1] in ln u.
    const double split = std::max(t, 1.0);
    double err = 0.0;
    double l1 = 0.0;
    double v = Rule::integrate(inner, split, u_cut, q.max_refinements, inner_tol, &err, &l1);
    if (t < 1.0) {
      auto inner_log = [&](double w) {
        const double u = std::exp(w);
        return u * inner(u);
      };
      double err_lo = 0.0;
      v += Rule::integrate(inner_log, std::log(t), 0.0, q.max_refinements, inner_tol, &err_lo, &l1);
      err += err_lo;
    }
    worst_inner = std::max(worst_inner, err);
    inner_scale = std::max(inner_scale, std::abs(v));
    return v;
  };

  // t = tau^2 removes the sqrt(t) behaviour of the finite-conductivity terms at t -> 0.
  auto outer_tau = [&](double tau) { return 2.0 * tau * outer(tau * tau); };
  double err = 0.0;
  double l1 = 0.0;
  const double integral =
      Rule::integrate(outer_tau, 0.0, std::sqrt(t_cut), q.max_refinements, q.rel_tol, &err, &l1);
  const double force = prefactor * integral;
  const double force_err = std::abs(prefactor) * err;
  if (!(std::isfinite(force))) throw ConvergenceError("Lifshitz integral produced a non-finite value", force, force_err);
  const double allowed = std::max(q.rel_tol * std::abs(force), q.abs_tol);
  if (force_err > allowed || worst_inner > 10.0 * inner_tol * inner_scale) {
    throw ConvergenceError("Lifshitz integral did not converge within max_refinements", force, force_err);
  }
  return {force, force_err};
}

double casimir_force_sphere_plate(double z, const SphereGeometry& geom, const DielectricModel& model,
                                  const QuadratureParams& q) {
  return casimir_force_sphere_plate_detailed(z, geom, model, q).force;
}

std::vector<double> casimir_force_grid(std::span<const double> z, const SphereGeometry& geom,
                                       const DielectricModel& model, const QuadratureParams& q,
                                       unsigned threads) {
  std::vector<double> out(z.size());
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(1, z.size())));
  if (threads <= 1) {
    for (std::size_t i = 0; i < z.size(); ++i) out[i] = casimir_force_sphere_plate(z[i], geom, model, q);
    return out;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < z.size(); i += threads)
            out[i] = casimir_force_sphere_plate(z[i], geom, model, q);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

double ideal_casimir_sphere_plate(double z, const SphereGeometry& geom) {
  if (!(z > 0.0)) throw DomainError("separation must be positive");
  if (!(geom.radius > 0.0)) throw DomainError("sphere radius must be positive");
  return -pi * pi * pi * phys::hbar * phys::c * geom.radius / (360.0 * z * z * z);
}

double ideal_casimir_parallel_plates(double z) {
  if (!(z > 0.0)) throw DomainError("separation must be positive");
  return -pi * pi * phys::hbar * phys::c / (240.0 * z * z * z * z);
}

}  // namespace casimir
