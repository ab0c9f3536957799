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

// Reeb dynamics on dA_f: trajectories, closed-orbit shooting and the short
// part of the prime period spectrum.

#ifndef ZOLL_ORBITS_HPP_
#define ZOLL_ORBITS_HPP_

#include <limits>
#include <string>
#include <vector>

#include "zoll/contact.hpp"
#include "zoll/sphere.hpp"
#include "zoll/types.hpp"

namespace zoll {

struct IntegratorOptions {
  double abs_tol = 1e-13;
  double rel_tol = 1e-13;
  double initial_step = 1e-2;
  double min_step = 1e-12;
  long max_steps = 2000000;
  // Abort when |H - 1| exceeds this after projection.
  double drift_bound = 1e-10;
};

struct Trajectory {
  std::vector<double> times;  // filled only when recording
  std::vector<Vec> points;
  Vec end;
  double max_energy_drift = 0.0;
  long steps = 0;
};

// Integrates z' = J grad H from z0 for time T (T < 0 runs backwards),
// projecting back onto {H = 1} along grad H after every accepted step.
// Throws PreconditionError when z0 is off the hypersurface and
// ConvergenceError on step underflow or excessive drift.
Trajectory integrate_reeb(const RadialProfile& f, const Vec& z0, double T,
                          const IntegratorOptions& options = {},
                          bool record = false);

// End point of integrate_reeb.
Vec reeb_flow(const RadialProfile& f, const Vec& z0, double T,
              const IntegratorOptions& options = {});

// Orbit sampled at `count` equally spaced times over one period.
std::vector<Vec> sample_orbit(const RadialProfile& f, const Vec& z0, double T,
                              int count, const IntegratorOptions& options = {});

struct OrbitResult {
  Vec seed;
  double period = 0.0;
  double closure_residual = std::numeric_limits<double>::infinity();
  Mat monodromy;  // D phi^T at the seed (finite differences)
  int newton_iterations = 0;
  bool converged = false;
  std::string message;
};

struct ShootingOptions {
  double fd_step = 1e-6;
  double tol = 1e-10;      // stop once the closure residual is below this
  double accept = 1e-8;    // closure needed to report convergence
  int max_iter = 30;
  double max_step = 0.2;   // cap on |dz| per Newton step (relative to |z|)
  IntegratorOptions integrator;
};

// Newton on (z, T) for phi^T(z) = z, with the hyperplane through the
// current iterate orthogonal to the Reeb direction as section and H = 1
// as constraint. The seed is projected radially onto dA_f first.
OrbitResult find_closed_orbit(const RadialProfile& f, const Vec& z_guess,
                              double T_guess, const ShootingOptions& options = {});

struct OrbitSeed {
  Vec point;
  double period_guess = kPi;
};

struct SpectrumOptions {
  double lower = 0.0;   // open window (lower, upper]
  double upper = kPi;
  // Fibonacci points on the base S^2 used as extra seeds (n = 2); zero
  // disables base seeding.
  int base_seeds = 0;
  double dedup_tol = 1e-4;
  int dedup_samples = 64;
  // More than this many distinct orbits at one period flags a Zoll-like,
  // degenerate spectrum.
  int zoll_max = 8;
  double zoll_period_tol = 1e-6;
  ShootingOptions shooting;
};

struct SpectrumWindow {
  double lower = 0.0;
  double upper = 0.0;
  std::vector<OrbitResult> orbits;  // distinct, sorted by period
  std::vector<int> group;           // dedup group id for each orbit
  bool zoll_degenerate = false;
  int seeds_tried = 0;
  int seeds_converged = 0;
  int seeds_in_window = 0;
};

// Shoots from every seed, keeps converged orbits with period in the window
// and removes duplicates by Hausdorff distance between sampled images.
SpectrumWindow scan_spectrum(const RadialProfile& f,
                             const std::vector<OrbitSeed>& seeds,
                             const SpectrumOptions& options);

// Window (pi - halfwidth, pi + halfwidth).
SpectrumWindow scan_short_spectrum(const RadialProfile& f, double halfwidth,
                                   const std::vector<OrbitSeed>& seeds,
                                   SpectrumOptions options = {});

// Seeds over Fibonacci base points: the point rho(rep) with period guess
// pi times the fiber average of f^2.
std::vector<OrbitSeed> base_seeds(const RadialProfile& f, int count);

// Hausdorff distance between two closed orbits given by equally spaced
// samples; distances to curves use cubic Hermite segments built from the
// Reeb vectors at the samples.
double orbit_hausdorff(const RadialProfile& f, const std::vector<Vec>& a,
                       const std::vector<Vec>& b);

struct SystolicEstimate {
  double t_min = 0.0;
  double volume = 0.0;
  double rho = 0.0;
};

// T_min from the window, contact volume from the grid. Throws
// PreconditionError on an empty window.
SystolicEstimate systolic_ratio(const RadialProfile& f,
                                const SpectrumWindow& window,
                                const HopfGrid& grid);

// Largest period in the window; throws PreconditionError when empty.
double t_max_short(const SpectrumWindow& window);

// Window (0, tau].
SpectrumWindow scan_up_to(const RadialProfile& f, double tau,
                          const std::vector<OrbitSeed>& seeds,
                          SpectrumOptions options = {});

}  // namespace zoll

#endif  // ZOLL_ORBITS_HPP_
