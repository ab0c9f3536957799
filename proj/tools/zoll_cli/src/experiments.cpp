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

#include "zoll_cli/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace zoll::cli {

SystolicCase run_systolic_case(const RadialProfile& f, GridPtr grid,
                               const SystolicOptions& options,
                               const std::vector<OrbitSeed>& extra) {
  CriticalReport crit;
  std::vector<OrbitSeed> seeds = critical_fiber_seeds(f, grid, &crit);
  seeds.insert(seeds.end(), extra.begin(), extra.end());
  SpectrumOptions so = options.spectrum;
  if (crit.degenerate || crit.points.empty()) {
    so.base_seeds = std::max(so.base_seeds, options.fallback_base_seeds);
  }
  const SpectrumWindow win = scan_short_spectrum(f, options.halfwidth, seeds, so);
  const SystolicEstimate est = systolic_ratio(f, win, *grid);
  const BaseFunction shat = BaseFunction::from_field(pullback_to_sphere(f, grid));

  SystolicCase out;
  out.t_min = est.t_min;
  out.t_max = t_max_short(win);
  out.volume = est.volume;
  out.rho = est.rho;
  out.s_min = shat.inf();
  out.s_max = shat.sup();
  out.zoll_flag = win.zoll_degenerate;
  out.orbits = static_cast<int>(win.orbits.size());
  out.seeds = win.seeds_tried;
  return out;
}

SpectrumCase run_spectrum_case(const RadialProfile& f, GridPtr grid, bool first_order,
                               const ShootingOptions& shooting) {
  NormalFormOptions no;
  no.first_order = first_order;
  SpectrumCase out{normal_form(f, grid, no), {}, {}, 0.0};
  const BaseFunction shat = BaseFunction::from_field(out.normal.split.S);
  out.lift_residual = shat.lift_residual();
  out.criticals = critical_fibers(shat);
  out.report = verify_variational_principle(f, out.normal.u, out.criticals, shooting);
  return out;
}

Subspace2k random_subspace(int n, int k, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat B(2 * n, 2 * k);
  for (int c = 0; c < 2 * k; ++c) {
    for (int r = 0; r < 2 * n; ++r) B(r, c) = g(rng);
  }
  return Subspace2k::from_basis(B);
}

ShadowCase run_shadow_case(int n, int k, std::uint64_t seed, long samples) {
  const LinearSymplectomorphism Phi = random_symplectic(n, 0.5, seed);
  const Subspace2k V = random_subspace(n, k, seed + 7777);
  ShadowCase out;
  out.n = n;
  out.k = k;
  out.seed = seed;
  out.report = shadow_volume_mc(Phi, V, samples, seed);
  out.relative_gap =
      std::abs(out.report.mc_volume - out.report.exact_volume) / out.report.exact_volume;
  out.allowed_gap = std::max(3.0 * out.report.mc_stderr / out.report.exact_volume, 0.015);
  return out;
}

std::vector<CoercivityProbe> coercivity_probe(int n, int k, std::uint64_t seed, long samples,
                                              const std::vector<double>& angles) {
  if (k >= n) throw PreconditionError("coercivity_probe needs k < n");
  const LinearSymplectomorphism Phi = random_symplectic(n, 0.5, seed);
  // Tilt directions from the (k+1)-th complex coordinate.
  const int tilt[2] = {2 * k, 2 * k + 1};
  std::vector<CoercivityProbe> out;
  for (double t : angles) {
    Mat W = Mat::Zero(2 * n, 2 * k);
    for (int i = 0; i < k; ++i) {
      W(2 * i, 2 * i) = 1.0;
      W(2 * i + 1, 2 * i + 1) = std::cos(t);
      W(tilt[i % 2], 2 * i + 1) = std::sin(t);
    }
    const Subspace2k Wt = Subspace2k::from_basis(W);
    const Subspace2k Vt = transform(Phi.matrix(), Wt);
    CoercivityProbe p;
    p.angle = t;
    p.wirtinger = wirtinger(Wt);
    p.exact = shadow_volume_exact(Phi, Vt);
    const ShadowReport r = shadow_volume_mc(Phi, Vt, samples, seed);
    p.mc = r.mc_volume;
    p.mc_stderr = r.mc_stderr;
    out.push_back(p);
  }
  return out;
}

ScalarField2n sample_generating_function(int n, double amplitude) {
  if (n < 2) throw PreconditionError("sample_generating_function needs n >= 2");
  auto q = [](const Vec& z) { return z[0] + 0.5 * z[1] * z[2] + 0.3 * z[3] * z[3]; };
  auto value = [=](const Vec& z) {
    return amplitude * std::exp(-0.5 * z.squaredNorm()) * q(z);
  };
  auto grad = [=](const Vec& z) {
    Vec dq = Vec::Zero(z.size());
    dq[0] = 1.0;
    dq[1] = 0.5 * z[2];
    dq[2] = 0.5 * z[1];
    dq[3] = 0.6 * z[3];
    return Vec(amplitude * std::exp(-0.5 * z.squaredNorm()) * (dq - q(z) * z));
  };
  return ScalarField2n(n, value, grad);
}

LoopR2n perturbed_circle(int n, double amplitude, std::uint64_t seed) {
  LoopR2n g(n, 3);
  g.cos_coeff(1)[0] = 1.0;
  g.sin_coeff(1)[1] = 1.0;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  for (int k = 0; k <= 3; ++k) {
    for (int r = 0; r < 2 * n; ++r) {
      g.cos_coeff(k)[r] += u(rng);
      if (k > 0) g.sin_coeff(k)[r] += u(rng);
    }
  }
  return g.scaled(std::sqrt(kPi / g.action()));
}

GenfunCheck run_genfun_check(std::uint64_t seed, double curve_amplitude) {
  GenfunCheck out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;

  // Rotation: S = c|z|^2 gives phi(z) = (i - c)/(i + c) z.
  const double c = 0.4;
  const NonlinearSymplectomorphism rot = phi_from_genfun(ScalarField2n::quadratic(2, c));
  const Complex factor = (Complex(0, 1) - c) / (Complex(0, 1) + c);
  for (int p = 0; p < 50; ++p) {
    Vec z(4);
    for (int r = 0; r < 4; ++r) z[r] = g(rng);
    CVec w = to_complex(z) * factor;
    out.rotation_error = std::max(out.rotation_error, (rot(z) - from_complex(w)).norm());
  }

  // Round trip S -> phi -> S'.
  const ScalarField2n S = sample_generating_function(2, 0.3);
  const NonlinearSymplectomorphism phi = phi_from_genfun(S);
  GenfunAudit audit;
  const ScalarField2n S2 = genfun_from_phi(phi, Vec::Zero(4), {}, &audit);
  out.roundtrip_audit = audit.loop_residual;
  const double s0 = S.value(Vec::Zero(4));
  for (int p = 0; p < 100; ++p) {
    Vec z(4);
    for (int r = 0; r < 4; ++r) z[r] = g(rng);
    z *= 1.5 * std::pow(std::uniform_real_distribution<double>(0, 1)(rng), 0.25) / z.norm();
    out.roundtrip_error = std::max(out.roundtrip_error, std::abs(S.value(z) - s0 - S2.value(z)));
  }

  // Straightening of a perturbed circle.
  const LoopR2n gamma = perturbed_circle(2, curve_amplitude, seed);
  const LoopR2n gamma0 = LoopR2n::gamma0(2);
  out.curve_distance = c2_distance(gamma, gamma0);
  const NonlinearSymplectomorphism st = straighten_curve(gamma);
  out.hessian_bound = st.provenance().hessian_bound;
  for (int j = 0; j < 200; ++j) {
    const double t = j / 200.0;
    out.straighten_error = std::max(out.straighten_error, (st(gamma(t)) - gamma0(t)).norm());
  }
  const double R = st.provenance().support_radius;
  for (int p = 0; p < 40; ++p) {
    Vec z;
    if (p < 20) {
      z = gamma(p / 20.0);
    } else {
      z = Vec(4);
      for (int r = 0; r < 4; ++r) z[r] = g(rng);
      z *= std::min(R, 3.0) * std::uniform_real_distribution<double>(0, 1)(rng) / z.norm();
    }
    out.symplecticity = std::max(out.symplecticity, symplecticity_residual(st, z, true));
  }
  return out;
}

TangentField random_band_limited_field(GridPtr grid, std::uint64_t seed) {
  const int dim = 2 * grid->n();
  std::vector<SpherePolynomial> comps;
  for (int k = 0; k < dim; ++k) comps.push_back(SpherePolynomial::random(grid->n(), 3, seed * 31 + k));
  return TangentField::sample(grid, [comps, dim](const Vec& x) {
    Vec v(dim);
    for (int k = 0; k < dim; ++k) v[k] = comps[k].value(x);
    return v;
  });
}

namespace {

// (phi_t)_* Z for t one fiber step: e^{2it} Z(e^{-2it} x).
TangentField hopf_rotate(const TangentField& Z) {
  const HopfGrid& grid = Z.grid();
  const int N = grid.fiber_samples();
  TangentField out = Z;
  const double a = 2.0 * grid.fiber().angle(1);
  for (int b = 0; b < grid.base_size(); ++b) {
    for (int j = 0; j < N; ++j) {
      out.values().col(b * N + j) = rotate(Z.values().col(b * N + (j + N - 1) % N), a);
    }
  }
  return out;
}

}  // namespace

BottkolCheck run_bottkol_check(GridPtr grid, std::uint64_t seed) {
  BottkolCheck out;
  const TangentField X0 = TangentField::sample(grid, [](const Vec& x) { return Vec(2.0 * apply_J(x)); });
  const BottkolTriple t0 = bottkol_linear_solve(X0);
  out.x0_u = t0.U.max_norm();
  out.x0_v = t0.V.max_norm();
  out.x0_h = (t0.h.values().array() + 1.0).abs().maxCoeff();
  out.x0_residual = t0.residual;

  const TangentField W = random_band_limited_field(grid, seed);
  BottkolTriple t = bottkol_linear_solve(W);
  out.random_residual = t.residual;

  BottkolTriple tp = t;
  tp.U.values() += 1e-6 * random_band_limited_field(grid, seed + 1).values();
  // Keep the perturbation tangent and of zero fiber mean.
  const TangentField Ubar = fiber_average_vector(tp.U);
  tp.U.values() -= Ubar.values();
  out.perturbed_residual = bottkol_linear_residual(tp, W);

  const BottkolTriple tr = bottkol_linear_solve(hopf_rotate(W));
  const TangentField Ur = hopf_rotate(t.U);
  const TangentField Vr = hopf_rotate(t.V);
  out.rotation_symmetry =
      std::max({(tr.U.values() - Ur.values()).cwiseAbs().maxCoeff(),
                (tr.V.values() - Vr.values()).cwiseAbs().maxCoeff(),
                (tr.h.values() - t.h.values()).cwiseAbs().maxCoeff()});
  return out;
}

std::vector<VolumeCase> run_volume_cases(GridPtr grid, std::uint64_t seed, int count,
                                         double amplitude) {
  std::vector<VolumeCase> out;
  for (int s = 0; s < count; ++s) {
    const std::uint64_t cs = seed + static_cast<std::uint64_t>(s);
    out.push_back({cs, volume_identity_check(random_form_triple(cs, amplitude), *grid)});
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t m = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < m; ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace zoll::cli
