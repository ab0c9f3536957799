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

// Experiment drivers shared by the command line tool and the acceptance
// binary. Each returns plain measurements; pass/fail decisions are made by
// the caller.

#ifndef ZOLL_CLI_EXPERIMENTS_HPP_
#define ZOLL_CLI_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "zoll/bottkol.hpp"
#include "zoll/contact.hpp"
#include "zoll/genfun.hpp"
#include "zoll/normalform.hpp"
#include "zoll/orbits.hpp"
#include "zoll/squeeze.hpp"
#include "zoll/symplin.hpp"
#include "zoll/volume_identity.hpp"

namespace zoll::cli {

// ---- systolic ratio ----

struct SystolicOptions {
  double halfwidth = 1.0;
  // Base seeds added when the first-order S^ is constant (no critical fibers).
  int fallback_base_seeds = 16;
  SpectrumOptions spectrum;
};

struct SystolicCase {
  double t_min = 0.0;
  double t_max = 0.0;  // largest period found in the window
  double volume = 0.0;
  double rho = 0.0;
  double s_min = 0.0;  // first-order S^ extremes
  double s_max = 0.0;
  bool zoll_flag = false;
  int orbits = 0;
  int seeds = 0;
};

// Seeds: critical fibers of the first-order S^, plus `extra`.
SystolicCase run_systolic_case(const RadialProfile& f, GridPtr grid,
                               const SystolicOptions& options = {},
                               const std::vector<OrbitSeed>& extra = {});

// ---- variational principle ----

struct SpectrumCase {
  NormalFormResult normal;
  CriticalReport criticals;
  VariationalReport report;
  double lift_residual = 0.0;
};

SpectrumCase run_spectrum_case(const RadialProfile& f, GridPtr grid, bool first_order,
                               const ShootingOptions& shooting = {});

// ---- linear non-squeezing ----

// Span of 2k Gaussian random vectors.
Subspace2k random_subspace(int n, int k, std::uint64_t seed);

struct ShadowCase {
  int n = 0;
  int k = 0;
  std::uint64_t seed = 0;
  ShadowReport report;
  double relative_gap = 0.0;  // |mc - exact| / exact
  double allowed_gap = 0.0;   // max(3 stderr, 1.5%) relative
};

ShadowCase run_shadow_case(int n, int k, std::uint64_t seed, long samples);

struct CoercivityProbe {
  double angle = 0.0;          // tilt towards an isotropic plane
  double wirtinger = 0.0;      // w(Phi^{-1} V)
  double exact = 0.0;
  double mc = 0.0;
  double mc_stderr = 0.0;
};

// V_t = Phi(W_t), where W_t tilts the y-axes of the first k complex lines
// by the angle t towards the (k+1)-th line; W_t becomes degenerate at
// t = pi/2, so the shadow volume blows up.
std::vector<CoercivityProbe> coercivity_probe(int n, int k, std::uint64_t seed, long samples,
                                              const std::vector<double>& angles);

// ---- generating functions ----

struct GenfunCheck {
  double rotation_error = 0.0;     // phi of c|z|^2 against its closed form
  double roundtrip_error = 0.0;    // sup |S - S'| on probes
  double roundtrip_audit = 0.0;    // loop audit of genfun_from_phi
  double straighten_error = 0.0;   // sup_t |phi(gamma(t)) - gamma0(t)|
  double symplecticity = 0.0;      // max FD residual of the straightening map
  double hessian_bound = 0.0;      // of the straightening generating function
  double curve_distance = 0.0;     // C^2 distance of gamma from gamma0
};

GenfunCheck run_genfun_check(std::uint64_t seed, double curve_amplitude = 0.002);

// A smooth generating function with small Hessian used by the round trip.
ScalarField2n sample_generating_function(int n, double amplitude);

// gamma0 plus a random degree-3 perturbation, rescaled to action pi.
LoopR2n perturbed_circle(int n, double amplitude, std::uint64_t seed);

// ---- Bottkol ----

// Band-limited tangent field: polynomial vector field of degree <= 3 with
// random coefficients, projected to the sphere.
TangentField random_band_limited_field(GridPtr grid, std::uint64_t seed);

struct BottkolCheck {
  // W = X0.
  double x0_u = 0.0;          // max |U|
  double x0_v = 0.0;          // max |V|
  double x0_h = 0.0;          // max |h + 1|
  double x0_residual = 0.0;
  // Random band-limited W.
  double random_residual = 0.0;
  double perturbed_residual = 0.0;  // residual after perturbing U by 1e-6
  double rotation_symmetry = 0.0;   // solve(rotated W) against rotated solve(W)
};

BottkolCheck run_bottkol_check(GridPtr grid, std::uint64_t seed);

// ---- volume identity ----

struct VolumeCase {
  std::uint64_t seed = 0;
  VolumeIdentityReport report;
};

std::vector<VolumeCase> run_volume_cases(GridPtr grid, std::uint64_t seed, int count,
                                         double amplitude = 0.1);

// Least-squares slope of log y against log x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace zoll::cli

#endif  // ZOLL_CLI_EXPERIMENTS_HPP_
