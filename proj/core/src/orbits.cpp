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

#include "zoll/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/numeric/odeint.hpp>

#include "zoll/parallel.hpp"

namespace zoll {

namespace {

namespace odeint = boost::numeric::odeint;
using State = std::vector<double>;

struct ReebSystem {
  const HomogeneousHamiltonian* H;
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    const Eigen::Map<const Vec> z(x.data(), static_cast<Eigen::Index>(x.size()));
    const Vec g = H->gradient(z);
    dxdt.resize(x.size());
    for (std::size_t j = 0; j + 1 < x.size(); j += 2) {
      dxdt[j] = -g[j + 1];
      dxdt[j + 1] = g[j];
    }
  }
};

// Moves z back onto {H = level} along grad H.
double project_level(const HomogeneousHamiltonian& H, Eigen::Map<Vec> z,
                     double level) {
  double v = 0.0;
  Vec g;
  for (int it = 0; it < 3; ++it) {
    H.value_and_gradient(z, &v, &g);
    const double d = v - level;
    if (std::abs(d) < 1e-15 * level) break;
    z -= (d / g.squaredNorm()) * g;
  }
  return std::abs(H.value(z) - level);
}

// Flow on the level set through z0 (which need not be H = 1).
Trajectory integrate_level(const HomogeneousHamiltonian& H, const Vec& z0,
                           double T, const IntegratorOptions& opt, bool record) {
  Trajectory tr;
  const double level = H.value(z0);
  State x(z0.data(), z0.data() + z0.size());
  if (record) {
    tr.times.push_back(0.0);
    tr.points.push_back(z0);
  }
  if (T == 0.0) {
    tr.end = z0;
    return tr;
  }
  auto stepper = odeint::make_controlled(
      opt.abs_tol, opt.rel_tol, odeint::runge_kutta_fehlberg78<State>());
  ReebSystem sys{&H};
  const double dir = T > 0 ? 1.0 : -1.0;
  double t = 0.0;
  double dt = dir * std::min(opt.initial_step, std::abs(T));
  const double end_tol = 1e-14 * std::max(1.0, std::abs(T));
  while (dir * (T - t) > end_tol) {
    if (tr.steps >= opt.max_steps) {
      throw ConvergenceError("integrate_reeb: step budget exhausted");
    }
    if (dir * (t + dt - T) > 0) dt = T - t;
    const auto result = stepper.try_step(sys, x, t, dt);
    if (result == odeint::fail) {
      if (std::abs(dt) < opt.min_step) {
        throw ConvergenceError("integrate_reeb: step size underflow");
      }
      continue;
    }
    ++tr.steps;
    Eigen::Map<Vec> z(x.data(), static_cast<Eigen::Index>(x.size()));
    const double drift = project_level(H, z, level);
    tr.max_energy_drift = std::max(tr.max_energy_drift, drift);
    if (drift > opt.drift_bound * std::max(1.0, level)) {
      throw ConvergenceError("integrate_reeb: energy drift beyond bound");
    }
    if (record) {
      tr.times.push_back(t);
      tr.points.push_back(z);
    }
  }
  tr.end = Eigen::Map<const Vec>(x.data(), static_cast<Eigen::Index>(x.size()));
  return tr;
}

Vec flow_level(const HomogeneousHamiltonian& H, const Vec& z0, double T,
               const IntegratorOptions& opt) {
  return integrate_level(H, z0, T, opt, false).end;
}

Vec onto_surface(const HomogeneousHamiltonian& H, const Vec& z) {
  return z / std::sqrt(H.value(z));
}

// Point of a cubic Hermite segment and its parameter derivative.
struct Hermite {
  Vec p0, p1, m0, m1;
  Vec at(double s) const {
    const double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 +
           (-2 * s3 + 3 * s2) * p1 + (s3 - s2) * m1;
  }
  Vec d(double s) const {
    const double s2 = s * s;
    return (6 * s2 - 6 * s) * p0 + (3 * s2 - 4 * s + 1) * m0 +
           (-6 * s2 + 6 * s) * p1 + (3 * s2 - 2 * s) * m1;
  }
};

double segment_distance(const Hermite& c, const Vec& p) {
  double best_s = 0.0;
  double best = (c.at(0.0) - p).squaredNorm();
  for (int k = 1; k <= 8; ++k) {
    const double s = k / 8.0;
    const double d = (c.at(s) - p).squaredNorm();
    if (d < best) {
      best = d;
      best_s = s;
    }
  }
  // Newton on d/ds |c(s) - p|^2 with a numerical second derivative.
  double s = best_s;
  for (int it = 0; it < 20; ++it) {
    const double h = 1e-6;
    auto g = [&](double t) { return 2.0 * (c.at(t) - p).dot(c.d(t)); };
    const double g0 = g(s);
    const double gp = (g(s + h) - g(s - h)) / (2 * h);
    if (gp <= 0) break;
    const double sn = std::clamp(s - g0 / gp, 0.0, 1.0);
    if (std::abs(sn - s) < 1e-14) break;
    s = sn;
  }
  return std::sqrt(std::min(best, (c.at(s) - p).squaredNorm()));
}

double directed_distance(const HomogeneousHamiltonian& H,
                         const std::vector<Vec>& a, const std::vector<Vec>& b,
                         double period_b) {
  const int m = static_cast<int>(b.size());
  const double h = period_b / m;
  std::vector<Vec> vel(m);
  for (int k = 0; k < m; ++k) vel[k] = apply_J(H.gradient(b[k])) * h;
  double worst = 0.0;
  for (const Vec& p : a) {
    int nearest = 0;
    double nd = std::numeric_limits<double>::infinity();
    for (int k = 0; k < m; ++k) {
      const double d = (b[k] - p).squaredNorm();
      if (d < nd) {
        nd = d;
        nearest = k;
      }
    }
    double best = std::sqrt(nd);
    for (int k : {(nearest + m - 1) % m, nearest}) {
      const int k1 = (k + 1) % m;
      Hermite c{b[k], b[k1], vel[k], vel[k1]};
      best = std::min(best, segment_distance(c, p));
    }
    worst = std::max(worst, best);
  }
  return worst;
}

// Equally spaced samples of one period of an orbit.
struct SampledOrbit {
  std::vector<Vec> points;
  double period;
};

}  // namespace

//---------------------------------------------------------------------------//
// Trajectories
//---------------------------------------------------------------------------//

Trajectory integrate_reeb(const RadialProfile& f, const Vec& z0, double T,
                          const IntegratorOptions& options, bool record) {
  const HomogeneousHamiltonian H(f);
  if (z0.size() != 2 * f.n()) throw DimensionError("integrate_reeb: wrong point size");
  if (std::abs(H.value(z0) - 1.0) >= 1e-9) {
    throw PreconditionError("integrate_reeb: initial point is off the hypersurface");
  }
  return integrate_level(H, z0, T, options, record);
}

Vec reeb_flow(const RadialProfile& f, const Vec& z0, double T,
              const IntegratorOptions& options) {
  return integrate_reeb(f, z0, T, options, false).end;
}

std::vector<Vec> sample_orbit(const RadialProfile& f, const Vec& z0, double T,
                              int count, const IntegratorOptions& options) {
  const HomogeneousHamiltonian H(f);
  std::vector<Vec> pts;
  pts.reserve(count);
  Vec z = z0;
  for (int k = 0; k < count; ++k) {
    pts.push_back(z);
    if (k + 1 < count) z = flow_level(H, z, T / count, options);
  }
  return pts;
}

double orbit_hausdorff(const RadialProfile& f, const std::vector<Vec>& a,
                       const std::vector<Vec>& b) {
  // Periods are recovered from the sample spacing along the flow.
  const HomogeneousHamiltonian H(f);
  auto period_of = [&](const std::vector<Vec>& s) {
    double len = 0.0;
    for (std::size_t k = 0; k < s.size(); ++k) {
      len += (s[(k + 1) % s.size()] - s[k]).norm() /
             apply_J(H.gradient(s[k])).norm();
    }
    return len;
  };
  return std::max(directed_distance(H, a, b, period_of(b)),
                  directed_distance(H, b, a, period_of(a)));
}

//---------------------------------------------------------------------------//
// Shooting
//---------------------------------------------------------------------------//

OrbitResult find_closed_orbit(const RadialProfile& f, const Vec& z_guess,
                              double T_guess, const ShootingOptions& opt) {
  const HomogeneousHamiltonian H(f);
  const int d = 2 * f.n();
  if (z_guess.size() != d) throw DimensionError("find_closed_orbit: wrong point size");
  if (!(T_guess > 0)) throw PreconditionError("find_closed_orbit: period guess must be positive");

  OrbitResult out;
  Vec z = onto_surface(H, z_guess);
  double T = T_guess;
  Vec zT = flow_level(H, z, T, opt.integrator);
  double res = (zT - z).norm();
  int it = 0;
  for (; it < opt.max_iter && res >= opt.tol; ++it) {
    Mat A = Mat::Zero(d + 2, d + 1);
    Vec F = Vec::Zero(d + 2);
    Mat M(d, d);
    for (int k = 0; k < d; ++k) {
      Vec zp = z;
      zp[k] += opt.fd_step;
      M.col(k) = (flow_level(H, zp, T, opt.integrator) - zT) / opt.fd_step;
    }
    out.monodromy = M;
    A.topLeftCorner(d, d) = M - Mat::Identity(d, d);
    A.col(d).head(d) = apply_J(H.gradient(zT));
    const Vec g0 = H.gradient(z);
    A.row(d).head(d) = g0.transpose();
    A.row(d + 1).head(d) = apply_J(g0).transpose();
    F.head(d) = zT - z;
    F[d] = H.value(z) - 1.0;

    Eigen::CompleteOrthogonalDecomposition<Mat> cod(A);
    cod.setThreshold(1e-9);
    Vec delta = -cod.solve(F);
    Vec dz = delta.head(d);
    double dT = delta[d];
    const double cap = opt.max_step * z.norm();
    if (dz.norm() > cap) {
      const double s = cap / dz.norm();
      dz *= s;
      dT *= s;
    }
    // Backtracking on the closure residual.
    double lam = 1.0;
    bool accepted = false;
    for (int ls = 0; ls < 8; ++ls, lam *= 0.5) {
      const double Tn = T + lam * dT;
      if (!(Tn > 0)) continue;
      const Vec zn = onto_surface(H, z + lam * dz);
      Vec zTn;
      try {
        zTn = flow_level(H, zn, Tn, opt.integrator);
      } catch (const ConvergenceError&) {
        continue;
      }
      const double rn = (zTn - zn).norm();
      if (rn < res || ls == 7) {
        z = zn;
        T = Tn;
        zT = zTn;
        res = rn;
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      out.message = "line search failed";
      break;
    }
  }
  out.seed = z;
  out.period = T;
  out.closure_residual = res;
  out.newton_iterations = it;
  out.converged = res < opt.accept;
  if (!out.converged && out.message.empty()) out.message = "closure residual above tolerance";
  return out;
}

//---------------------------------------------------------------------------//
// Spectrum
//---------------------------------------------------------------------------//

std::vector<OrbitSeed> base_seeds(const RadialProfile& f, int count) {
  if (f.n() != 2) throw PreconditionError("base_seeds: only n = 2 is supported");
  std::vector<OrbitSeed> seeds;
  const FiberOps ops(8);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double u = 1.0 - (2.0 * i + 1.0) / count;
    const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
    const double phi = golden * i;
    const Vec rep = base_rep({s * std::cos(phi), s * std::sin(phi), u});
    double avg = 0.0;
    for (int j = 0; j < ops.samples(); ++j) {
      const double v = f.value(rotate(rep, 2.0 * ops.angle(j)));
      avg += v * v;
    }
    avg /= ops.samples();
    seeds.push_back({radial_map(f, rep), kPi * avg});
  }
  return seeds;
}

SpectrumWindow scan_spectrum(const RadialProfile& f,
                             const std::vector<OrbitSeed>& seeds_in,
                             const SpectrumOptions& opt) {
  std::vector<OrbitSeed> seeds = seeds_in;
  if (opt.base_seeds > 0) {
    const std::vector<OrbitSeed> extra = base_seeds(f, opt.base_seeds);
    seeds.insert(seeds.end(), extra.begin(), extra.end());
  }
  SpectrumWindow win;
  win.lower = opt.lower;
  win.upper = opt.upper;
  win.seeds_tried = static_cast<int>(seeds.size());

  std::vector<OrbitResult> results(seeds.size());
  parallel_for(static_cast<int>(seeds.size()), [&](int i) {
    try {
      results[i] = find_closed_orbit(f, seeds[i].point, seeds[i].period_guess, opt.shooting);
    } catch (const Error& e) {
      results[i].converged = false;
      results[i].message = e.what();
    }
  });

  std::vector<int> candidates;
  for (int i = 0; i < static_cast<int>(results.size()); ++i) {
    if (!results[i].converged) continue;
    ++win.seeds_converged;
    if (results[i].period > opt.lower && results[i].period <= opt.upper) {
      ++win.seeds_in_window;
      candidates.push_back(i);
    }
  }
  std::stable_sort(candidates.begin(), candidates.end(), [&](int a, int b) {
    return results[a].closure_residual < results[b].closure_residual;
  });

  std::vector<SampledOrbit> kept;
  for (int i : candidates) {
    const OrbitResult& r = results[i];
    SampledOrbit s{sample_orbit(f, r.seed, r.period, opt.dedup_samples,
                                opt.shooting.integrator),
                   r.period};
    bool duplicate = false;
    for (const SampledOrbit& k : kept) {
      if (std::abs(k.period - s.period) > 1e-6 * std::max(1.0, s.period)) continue;
      if (orbit_hausdorff(f, k.points, s.points) < opt.dedup_tol) {
        duplicate = true;
        break;
      }
    }
    if (duplicate) continue;
    kept.push_back(std::move(s));
    win.orbits.push_back(r);
  }
  std::stable_sort(win.orbits.begin(), win.orbits.end(),
                   [](const OrbitResult& a, const OrbitResult& b) { return a.period < b.period; });
  win.group.resize(win.orbits.size());
  std::iota(win.group.begin(), win.group.end(), 0);

  // Largest cluster of equal periods.
  int run = 1;
  for (std::size_t i = 1; i < win.orbits.size(); ++i) {
    if (win.orbits[i].period - win.orbits[i - 1].period < opt.zoll_period_tol) {
      ++run;
    } else {
      run = 1;
    }
    if (run > opt.zoll_max) win.zoll_degenerate = true;
  }
  return win;
}

SpectrumWindow scan_short_spectrum(const RadialProfile& f, double halfwidth,
                                   const std::vector<OrbitSeed>& seeds,
                                   SpectrumOptions options) {
  if (!(halfwidth > 0)) throw PreconditionError("scan_short_spectrum: halfwidth must be positive");
  options.lower = kPi - halfwidth;
  options.upper = kPi + halfwidth;
  SpectrumWindow w = scan_spectrum(f, seeds, options);
  // The window is open on both sides.
  std::vector<OrbitResult> kept;
  for (const OrbitResult& r : w.orbits) {
    if (r.period < options.upper) kept.push_back(r);
  }
  w.orbits = std::move(kept);
  w.group.resize(w.orbits.size());
  std::iota(w.group.begin(), w.group.end(), 0);
  return w;
}

SpectrumWindow scan_up_to(const RadialProfile& f, double tau,
                          const std::vector<OrbitSeed>& seeds,
                          SpectrumOptions options) {
  if (!(tau > 0)) throw PreconditionError("scan_up_to: tau must be positive");
  options.lower = 0.0;
  options.upper = tau;
  return scan_spectrum(f, seeds, options);
}

SystolicEstimate systolic_ratio(const RadialProfile& f,
                                const SpectrumWindow& window,
                                const HopfGrid& grid) {
  if (window.orbits.empty()) throw PreconditionError("systolic_ratio: empty spectrum window");
  SystolicEstimate e;
  e.t_min = window.orbits.front().period;
  for (const OrbitResult& r : window.orbits) e.t_min = std::min(e.t_min, r.period);
  e.volume = contact_volume(f, grid);
  e.rho = std::pow(e.t_min, f.n()) / e.volume;
  return e;
}

double t_max_short(const SpectrumWindow& window) {
  if (window.orbits.empty()) throw PreconditionError("t_max_short: empty spectrum window");
  double t = 0.0;
  for (const OrbitResult& r : window.orbits) t = std::max(t, r.period);
  return t;
}

}  // namespace zoll
