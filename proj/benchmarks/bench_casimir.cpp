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

#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>
#include <vector>

#include "casimir/analysis.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/electrostatics.hpp"
#include "casimir/lifshitz.hpp"
#include "casimir/synth.hpp"

using namespace casimir;

namespace {

const DielectricModel& drude_al() {
  static const auto m = DielectricModel::drude(DrudeParams::aluminum());
  return m;
}

const DielectricModel& tabulated_al() {
  static const auto m = [] {
    std::vector<OpticalPoint> pts;
    for (int i = 0; i < 400; ++i) {
      const double e = 0.04 * std::pow(1e4 / 0.04, i / 399.0);
      pts.push_back({e, 12.398 * 12.398 * 0.063 / (e * (e * e + 0.063 * 0.063))});
    }
    return DielectricModel::tabulated(std::make_shared<const OpticalTable>(pts, "bench"), DrudeParams::aluminum());
  }();
  return m;
}

const TheoryCurve& curve() {
  static const TheoryCurve tc(TheoryParams{});
  return tc;
}

void BM_EpsDrude(benchmark::State& st) {
  double xi = 1e14;
  for (auto _ : st) {
    benchmark::DoNotOptimize(eps_imag_axis(drude_al(), xi));
    xi = xi * 1.0001;
  }
}
BENCHMARK(BM_EpsDrude);

void BM_EpsTabulated(benchmark::State& st) {
  double xi = 1e14;
  for (auto _ : st) {
    benchmark::DoNotOptimize(eps_imag_axis(tabulated_al(), xi));
    xi = xi * 1.0001;
  }
}
BENCHMARK(BM_EpsTabulated);

void BM_LifshitzDrude(benchmark::State& st) {
  const double z = static_cast<double>(st.range(0)) * 1e-9;
  for (auto _ : st) benchmark::DoNotOptimize(casimir_force_sphere_plate(z, SphereGeometry::reference(), drude_al()));
}
BENCHMARK(BM_LifshitzDrude)->Arg(100)->Arg(500)->Unit(benchmark::kMillisecond);

void BM_TheoryCurveBuild(benchmark::State& st) {
  for (auto _ : st) benchmark::DoNotOptimize(TheoryCurve(TheoryParams{}).node_forces().size());
}
BENCHMARK(BM_TheoryCurveBuild)->Unit(benchmark::kMillisecond)->Iterations(3);

void BM_TheoryCurveLookup(benchmark::State& st) {
  double s = 100e-9;
  for (auto _ : st) {
    benchmark::DoNotOptimize(curve().at_separation(s));
    s = s < 3000e-9 ? s * 1.001 : 100e-9;
  }
}
BENCHMARK(BM_TheoryCurveLookup);

void BM_ElectroSeries(benchmark::State& st) {
  ElectrostaticConfig e;
  e.v1 = 0.5;
  const double z = static_cast<double>(st.range(0)) * 1e-9;
  for (auto _ : st) benchmark::DoNotOptimize(sphere_plane_force_exact(z, e));
}
BENCHMARK(BM_ElectroSeries)->Arg(50)->Arg(500)->Arg(3000);

void BM_FitContactSeparation(benchmark::State& st) {
  const auto truth = default_truth();
  const auto scans = generate_electrostatic_scans(truth, curve());
  ElectrostaticConfig residual;
  const GapForce th = [](double g) { return curve().at_gap(g); };
  for (auto _ : st)
    benchmark::DoNotOptimize(fit_contact_separation(scans.front(), th, residual, {}, truth.C_true).z0);
}
BENCHMARK(BM_FitContactSeparation)->Unit(benchmark::kMillisecond);

void BM_Campaign(benchmark::State& st) {
  auto truth = default_truth();
  truth.seed = 7;
  const auto campaign = generate_campaign(truth, curve());
  CalibrationParams cal;
  for (auto _ : st) benchmark::DoNotOptimize(run_campaign(campaign, curve(), cal).z0);
}
BENCHMARK(BM_Campaign)->Unit(benchmark::kMillisecond)->Iterations(3);

}  // namespace

BENCHMARK_MAIN();
