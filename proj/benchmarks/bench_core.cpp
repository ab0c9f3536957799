// Copyright 2026 The zoll-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <benchmark/benchmark.h>

#include "zoll/bottkol.hpp"
#include "zoll/orbits.hpp"
#include "zoll/squeeze.hpp"
#include "zoll/symplin.hpp"

namespace zoll {
namespace {

void BM_ReebFlowPeriod(benchmark::State& state) {
  const RadialProfile f = RadialProfile::random(2, 4, 0.02, 1);
  Vec z = Vec::Zero(4);
  z[0] = 1.0;
  z = radial_map(f, z);
  for (auto _ : state) benchmark::DoNotOptimize(reeb_flow(f, z, kPi));
}
BENCHMARK(BM_ReebFlowPeriod)->Unit(benchmark::kMillisecond);

void BM_BottkolFiber(benchmark::State& state) {
  const RadialProfile f = RadialProfile::random(2, 4, 0.02, 1);
  const FiberOps ops(static_cast<int>(state.range(0)));
  Vec rep = Vec::Zero(4);
  rep[0] = 0.6;
  rep[3] = 0.8;
  for (auto _ : state) benchmark::DoNotOptimize(solve_bottkol_fiber(f, ops, rep));
}
BENCHMARK(BM_BottkolFiber)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_BottkolLinearSolve(benchmark::State& state) {
  HopfGridOptions o;
  o.polar_nodes = static_cast<int>(state.range(0));
  const GridPtr g = HopfGrid::make(o);
  const TangentField W = TangentField::sample(g, [](const Vec& x) {
    Vec v(4);
    v << x[1] * x[2], x[3] - x[0], x[0] * x[0], x[2];
    return Vec(v - v.dot(x) * x);
  });
  for (auto _ : state) benchmark::DoNotOptimize(bottkol_linear_solve(W));
}
BENCHMARK(BM_BottkolLinearSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_ShadowMonteCarlo(benchmark::State& state) {
  const LinearSymplectomorphism Phi = random_symplectic(3, 0.5, 1);
  Mat B = Mat::Identity(6, 2);
  const Subspace2k V = Subspace2k::from_basis(B);
  for (auto _ : state) benchmark::DoNotOptimize(shadow_volume_mc(Phi, V, state.range(0), 1));
}
BENCHMARK(BM_ShadowMonteCarlo)->Arg(100000)->Arg(1000000)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace zoll

BENCHMARK_MAIN();
