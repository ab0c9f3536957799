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

#include "zoll/normalform.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "zoll/parallel.hpp"

namespace zoll {

namespace {

void require_n2(int n, const char* who) {
  if (n != 2) throw DimensionError(std::string(who) + " is implemented for n = 2");
}

// Distance from p to the closed polyline through pts.
double polyline_distance(const Vec& p, const std::vector<Vec>& pts) {
  double best = std::numeric_limits<double>::infinity();
  const std::size_t m = pts.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Vec& a = pts[k];
    const Vec d = pts[(k + 1) % m] - a;
    const double len2 = d.squaredNorm();
    const double t = len2 > 0.0 ? std::clamp((p - a).dot(d) / len2, 0.0, 1.0) : 0.0;
    best = std::min(best, (a + t * d - p).norm());
  }
  return best;
}

// Re-expresses a chart point in the chart where |w| <= 1.
ChartPoint rechart(int chart, Complex w) { return base_chart(chart_point(chart, w)); }

// Backtracking gradient descent (sign -1) or ascent (sign +1).
ChartPoint gradient_flow(const BaseFunction& S, ChartPoint cp, int sign) {
  double t = 1.0;
  for (int it = 0; it < 200; ++it) {
    const Eigen::Vector2d g = S.chart_gradient(cp.chart, cp.w);
    if (g.norm() < 1e-5) break;
    const double v0 = S.value_chart(cp.chart, cp.w);
    Eigen::Vector2d d = sign * g;
    if (d.norm() * t > 0.2) t = 0.2 / d.norm();
    bool moved = false;
    for (int ls = 0; ls < 30; ++ls, t *= 0.5) {
      const Complex w = cp.w + t * Complex(d[0], d[1]);
      if (sign * (S.value_chart(cp.chart, w) - v0) >= 0.5 * t * g.squaredNorm()) {
        cp = rechart(cp.chart, w);
        moved = true;
        t *= 2.0;
        break;
      }
    }
    if (!moved) break;
  }
  return cp;
}

// Damped Newton on the chart gradient.
bool newton_polish(const BaseFunction& S, ChartPoint* cp, const CriticalOptions& options) {
  for (int it = 0; it < options.max_iter; ++it) {
    const Eigen::Vector2d g = S.chart_gradient(cp->chart, cp->w);
    if (g.norm() < options.tol) return true;
    const Eigen::Matrix2d H = S.chart_hessian(cp->chart, cp->w);
    Eigen::Vector2d d = -H.colPivHouseholderQr().solve(g);
    if (!d.allFinite()) return false;
    if (d.norm() > 0.2) d *= 0.2 / d.norm();
    double t = 1.0;
    bool moved = false;
    for (int ls = 0; ls < 20; ++ls, t *= 0.5) {
      const Complex w = cp->w + t * Complex(d[0], d[1]);
      if (S.chart_gradient(cp->chart, w).norm() < (1.0 - 1e-4 * t) * g.norm()) {
        *cp = rechart(cp->chart, w);
        moved = true;
        break;
      }
    }
    if (!moved) return false;
  }
  return S.chart_gradient(cp->chart, cp->w).norm() < options.tol;
}

}  // namespace

//---------------------------------------------------------------------------//
// One-forms
//---------------------------------------------------------------------------//

Vec FiberOneForm::reeb_contraction(const Vec& rep, const FiberOps& ops) const {
  const Mat C = covectors(rep, ops);
  Vec r(ops.samples());
  for (int j = 0; j < ops.samples(); ++j) {
    const Vec x = rotate(rep, 2.0 * ops.angle(j));
    r[j] = C.row(j).dot(2.0 * apply_J(x));
  }
  return r;
}

FunctionOneForm::FunctionOneForm(int n, std::function<Vec(const Vec&)> covector)
    : n_(n), c_(std::move(covector)) {}

FunctionOneForm FunctionOneForm::scaled_contact(int n, std::function<double(const Vec&)> g) {
  return FunctionOneForm(n, [g = std::move(g)](const Vec& x) -> Vec {
    return 0.5 * g(x) * apply_J(x);
  });
}

Mat FunctionOneForm::covectors(const Vec& rep, const FiberOps& ops) const {
  Mat C(ops.samples(), rep.size());
  for (int j = 0; j < ops.samples(); ++j) {
    const Vec x = rotate(rep, 2.0 * ops.angle(j));
    const Vec c = c_(x);
    C.row(j) = (c - c.dot(x) * x).transpose();
  }
  return C;
}

Vec FunctionOneForm::reeb_contraction(const Vec& rep, const FiberOps& ops) const {
  Vec r(ops.samples());
  for (int j = 0; j < ops.samples(); ++j) {
    const Vec x = rotate(rep, 2.0 * ops.angle(j));
    r[j] = c_(x).dot(2.0 * apply_J(x));
  }
  return r;
}

PullbackOneForm::PullbackOneForm(std::shared_ptr<const DisplacementMap> u, double fd_step)
    : u_(std::move(u)), h_(fd_step) {
  require_n2(u_->n(), "PullbackOneForm");
}

Vec PullbackOneForm::reeb_contraction(const Vec& rep, const FiberOps& ops) const {
  if (ops.samples() != u_->fiber_ops().samples()) {
    throw DimensionError("PullbackOneForm: fiber resolution differs from the displacement");
  }
  const auto sol = u_->solve(rep);
  const Mat Up = ops.derivative() * sol->U;
  Vec r(ops.samples());
  for (int j = 0; j < ops.samples(); ++j) {
    const Vec Uj = sol->U.row(j).transpose();
    const Vec uj = sphere_exp(rep, Uj);
    // Corotated frame: alpha0 is invariant under the rotation, f is not.
    const Vec du = 2.0 * apply_J(uj) + sphere_exp_differential(rep, Uj, Up.row(j).transpose());
    const double fv = u_->profile().value(rotate(uj, 2.0 * ops.angle(j)));
    r[j] = fv * fv * 0.5 * apply_J(uj).dot(du);
  }
  return r;
}

Mat PullbackOneForm::covectors(const Vec& rep, const FiberOps& ops) const {
  const Vec rR = reeb_contraction(rep, ops);
  const auto sol = u_->solve(rep);
  const auto nbrs = fiber_neighbors(rep, h_);
  std::array<std::shared_ptr<const FiberSolution>, 4> ns;
  for (int k = 0; k < 4; ++k) ns[k] = u_->solve(nbrs[k]);
  const auto frame = contact_frame(rep);
  Mat C(ops.samples(), rep.size());
  for (int j = 0; j < ops.samples(); ++j) {
    // Work in the corotated frame; rotate the covector at the end.
    const Vec uj = sphere_exp(rep, sol->U.row(j).transpose());
    std::array<Vec, 4> y;
    for (int k = 0; k < 4; ++k) y[k] = sphere_exp(nbrs[k], ns[k]->U.row(j).transpose());
    const double fv = u_->profile().value(rotate(uj, 2.0 * ops.angle(j)));
    const Vec a0 = 0.5 * fv * fv * apply_J(uj);
    const double b2 = a0.dot(y[0] - y[1]) / (2.0 * h_);
    const double b3 = a0.dot(y[2] - y[3]) / (2.0 * h_);
    const Vec R0 = 2.0 * apply_J(rep);
    const Vec c = 0.25 * rR[j] * R0 + b2 * frame[0] + b3 * frame[1];
    C.row(j) = rotate(c, 2.0 * ops.angle(j)).transpose();
  }
  return C;
}

//---------------------------------------------------------------------------//
// Splitting
//---------------------------------------------------------------------------//

SplitForm split_form(const FiberOneForm& beta, GridPtr grid, double fd_step) {
  require_n2(grid->n(), "split_form");
  const int N = grid->fiber_samples();
  const int B = grid->base_size();
  const FiberOps& ops = grid->fiber();
  SplitForm out{ScalarField::zeros(grid), TangentField::zeros(grid), ScalarField::zeros(grid),
                TangentField::zeros(grid), TangentField::zeros(grid)};

  parallel_for(B, [&](int b) {
    const Vec& rep = grid->rep(b);
    const Vec r = beta.reeb_contraction(rep, ops);
    const double S = r.mean();
    const Vec fv = ops.primitive() * (r.array() - S).matrix();
    const Vec dfR = ops.derivative() * fv;
    const Mat C = beta.covectors(rep, ops);
    const auto nbrs = fiber_neighbors(rep, fd_step);
    std::array<Vec, 4> fn;
    for (int k = 0; k < 4; ++k) {
      const Vec rn = beta.reeb_contraction(nbrs[k], ops);
      fn[k] = ops.primitive() * (rn.array() - rn.mean()).matrix();
    }
    const auto frame = contact_frame(rep);
    out.S.fiber(b).setConstant(S);
    out.f.fiber(b) = fv;
    for (int j = 0; j < N; ++j) {
      const double a = 2.0 * ops.angle(j);
      const Vec x = rotate(rep, a);
      const Vec R0 = 2.0 * apply_J(x);
      const Vec e2 = rotate(frame[0], a);
      const Vec e3 = rotate(frame[1], a);
      const Vec c = C.row(j).transpose();
      const double df2 = (fn[0][j] - fn[1][j]) / (2.0 * fd_step);
      const double df3 = (fn[2][j] - fn[3][j]) / (2.0 * fd_step);
      const Vec df = 0.25 * dfR[j] * R0 + df2 * e2 + df3 * e3;
      const Vec eta = 0.25 * (r[j] - S - dfR[j]) * R0 + (c.dot(e2) - df2) * e2 +
                      (c.dot(e3) - df3) * e3;
      const int col = b * N + j;
      out.beta.values().col(col) = c;
      out.df.values().col(col) = df;
      out.eta.values().col(col) = eta;
    }
  });

  out.s_invariance = (out.S.values() - fiber_average_scalar(out.S).values()).cwiseAbs().maxCoeff();
  out.f_mean = max_abs(fiber_average_scalar(out.f));
  for (int b = 0; b < B; ++b) {
    for (int j = 0; j < N; ++j) {
      const int col = b * N + j;
      const Vec x = grid->point(b, j);
      const Vec eta = out.eta.values().col(col);
      out.eta_reeb = std::max(out.eta_reeb, std::abs(eta.dot(2.0 * apply_J(x))));
      const Vec rec = out.S.values()[col] * 0.5 * apply_J(x) + eta +
                      out.df.values().col(col) - out.beta.values().col(col);
      out.reconstruction = std::max(out.reconstruction, rec.norm());
    }
  }
  return out;
}

//---------------------------------------------------------------------------//
// Base function
//---------------------------------------------------------------------------//

BaseFunction BaseFunction::from_field(const ScalarField& S) {
  const HopfGrid& grid = S.grid();
  require_n2(grid.n(), "BaseFunction");
  Vec samples(grid.base_size());
  for (int b = 0; b < grid.base_size(); ++b) samples[b] = S.fiber(b).mean();
  BaseFunction out;
  out.sh_ = SphericalHarmonics::analyze(grid.polar_u(), grid.polar_weights(),
                                        grid.azimuth_count(), samples);
  out.sup_ = samples.maxCoeff();
  out.inf_ = samples.minCoeff();
  for (int b = 0; b < grid.base_size(); ++b) {
    out.lift_residual_ =
        std::max(out.lift_residual_, std::abs(out.value_at(grid.rep(b)) - samples[b]));
  }
  return out;
}

double BaseFunction::value(const std::array<double, 3>& p) const {
  const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  return sh_.evaluate(std::clamp(p[2] / norm, -1.0, 1.0), std::atan2(p[1], p[0]));
}

double BaseFunction::value_chart(int chart, Complex w) const {
  return value(base_point(chart_point(chart, w)));
}

Eigen::Vector2d BaseFunction::chart_gradient(int chart, Complex w, double h) const {
  Eigen::Vector2d g;
  g[0] = (value_chart(chart, w + Complex(h, 0)) - value_chart(chart, w - Complex(h, 0))) / (2 * h);
  g[1] = (value_chart(chart, w + Complex(0, h)) - value_chart(chart, w - Complex(0, h))) / (2 * h);
  return g;
}

Eigen::Matrix2d BaseFunction::chart_hessian(int chart, Complex w, double h) const {
  Eigen::Matrix2d H;
  const Complex dirs[2] = {Complex(h, 0), Complex(0, h)};
  for (int k = 0; k < 2; ++k) {
    H.col(k) = (chart_gradient(chart, w + dirs[k]) - chart_gradient(chart, w - dirs[k])) / (2 * h);
  }
  return 0.5 * (H + H.transpose());
}

double BaseFunction::chart_overlap_residual(int probes, std::uint64_t seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.5, 2.0), angle(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int k = 0; k < probes; ++k) {
    const Complex w = std::polar(radius(rng), angle(rng));
    worst = std::max(worst, std::abs(value_chart(0, w) - value_chart(1, 1.0 / w)));
  }
  return worst;
}

//---------------------------------------------------------------------------//
// Critical fibers
//---------------------------------------------------------------------------//

CriticalReport critical_fibers(const BaseFunction& Shat, const CriticalOptions& options) {
  CriticalReport out;
  out.starts = options.starts;
  if (Shat.sup() - Shat.inf() < options.degenerate_tol) {
    out.degenerate = true;
    return out;
  }
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  auto add = [&](const ChartPoint& cp) {
    const Vec rep = chart_point(cp.chart, cp.w);
    const auto base = base_point(rep);
    for (const auto& c : out.points) {
      const double d = std::hypot(std::hypot(c.base[0] - base[0], c.base[1] - base[1]),
                                  c.base[2] - base[2]);
      if (d < options.dedup) return;
    }
    CriticalFiber c;
    c.chart = cp.chart;
    c.w = cp.w;
    c.base = base;
    c.rep = rep;
    c.value = Shat.value(base);
    c.grad_norm = Shat.chart_gradient(cp.chart, cp.w).norm();
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Shat.chart_hessian(cp.chart, cp.w));
    c.index = static_cast<int>((es.eigenvalues().array() < 0.0).count());
    out.points.push_back(c);
  };
  for (int k = 0; k < options.starts; ++k) {
    const double zc = 1.0 - (2.0 * k + 1.0) / options.starts;
    const double rc = std::sqrt(std::max(0.0, 1.0 - zc * zc));
    const std::array<double, 3> p0{rc * std::cos(golden * k), rc * std::sin(golden * k), zc};
    const ChartPoint start = base_chart(base_rep(p0));
    bool any = false;
    for (int mode : {0, -1, 1}) {
      ChartPoint cp = mode == 0 ? start : gradient_flow(Shat, start, mode);
      if (newton_polish(Shat, &cp, options)) {
        add(cp);
        any = true;
      }
    }
    if (!any) ++out.failures;
  }
  std::sort(out.points.begin(), out.points.end(),
            [](const CriticalFiber& a, const CriticalFiber& b) { return a.value < b.value; });
  return out;
}

//---------------------------------------------------------------------------//
// Normal form
//---------------------------------------------------------------------------//

NormalFormResult normal_form(const RadialProfile& f, GridPtr grid,
                             const NormalFormOptions& options) {
  require_n2(f.n(), "normal_form");
  std::optional<BottkolResult> bk;
  std::shared_ptr<const DisplacementMap> u;
  auto split = [&]() {
    if (options.first_order) {
      const auto beta = FunctionOneForm::scaled_contact(2, [&f](const Vec& x) {
        const double v = f.value(x);
        return v * v;
      });
      return split_form(beta, grid, options.fd_step);
    }
    bk = bottkol_newton(f, grid, options.bottkol);
    if (!bk->converged) {
      throw ConvergenceError("normal_form: Bottkol iteration did not converge (residual " +
                             sci(bk->triple.residual) + ")");
    }
    u = bk->u;
    return split_form(PullbackOneForm(u, options.fd_step), grid, options.fd_step);
  }();
  NormalFormResult out{std::move(split), std::move(bk), std::move(u)};
  out.first_order = options.first_order;
  out.s_deviation = (out.split.S.values().array() - 1.0).abs().maxCoeff();
  out.eta_norm = out.split.eta.max_norm();
  out.f_norm = max_abs(out.split.f);
  return out;
}

//---------------------------------------------------------------------------//
// Variational principle
//---------------------------------------------------------------------------//

VariationalReport verify_variational_principle(const RadialProfile& f,
                                               const std::shared_ptr<const DisplacementMap>& u,
                                               const CriticalReport& criticals,
                                               const ShootingOptions& options) {
  VariationalReport out;
  out.entries.resize(criticals.points.size());
  parallel_for(static_cast<int>(criticals.points.size()), [&](int k) {
    const CriticalFiber& c = criticals.points[k];
    VariationalEntry& e = out.entries[k];
    e.critical = c;
    e.predicted = kPi * c.value;
    std::vector<Vec> image;
    if (u) {
      // Trigonometric interpolation of U~ keeps the polyline error below
      // the orbit tolerances.
      const auto sol = u->solve(c.rep);
      const FiberOps& ops = u->fiber_ops();
      for (int j = 0; j < 512; ++j) {
        const double theta = kPi * j / 512;
        const Vec Ut = sol->U.transpose() * ops.interpolation_weights(theta);
        image.push_back(radial_map(f, rotate(sphere_exp(c.rep, Ut), 2.0 * theta)));
      }
    } else {
      for (int j = 0; j < 512; ++j) image.push_back(radial_map(f, rotate(c.rep, 2.0 * kPi * j / 512)));
    }
    const OrbitResult orbit = find_closed_orbit(f, image[0], e.predicted, options);
    e.converged = orbit.converged;
    e.message = orbit.message;
    if (!orbit.converged) return;
    e.found = orbit.period;
    e.error = std::abs(e.found - e.predicted);
    for (const Vec& p : sample_orbit(f, orbit.seed, orbit.period, 256, options.integrator)) {
      e.fiber_distance = std::max(e.fiber_distance, polyline_distance(p, image));
    }
  });
  for (const auto& e : out.entries) {
    if (!e.converged) continue;
    ++out.converged;
    out.max_error = std::max(out.max_error, e.error);
  }
  return out;
}

std::vector<OrbitSeed> critical_fiber_seeds(const RadialProfile& f, GridPtr grid,
                                            CriticalReport* report) {
  const BaseFunction Shat = BaseFunction::from_field(pullback_to_sphere(f, grid));
  CriticalReport crit = critical_fibers(Shat);
  std::vector<OrbitSeed> seeds;
  for (const auto& c : crit.points) seeds.push_back({radial_map(f, c.rep), kPi * c.value});
  if (report) *report = std::move(crit);
  return seeds;
}

}  // namespace zoll
