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

#include "zoll/bottkol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zoll/parallel.hpp"

namespace zoll {

namespace {

// Unit direction of U and its length; direction is zero when U = 0.
double split_direction(const Vec& U, Vec* e) {
  const double r = U.norm();
  *e = r > 0.0 ? Vec(U / r) : Vec::Zero(U.size());
  return r;
}

double sinc(double r) { return r < 1e-8 ? 1.0 - r * r / 6.0 : std::sin(r) / r; }

}  // namespace

Vec sphere_exp(const Vec& x, const Vec& U) {
  Vec e;
  const double r = split_direction(U, &e);
  return std::cos(r) * x + std::sin(r) * e;
}

Vec sphere_exp_differential(const Vec& x, const Vec& U, const Vec& v) {
  Vec e;
  const double r = split_direction(U, &e);
  const double par = v.dot(e);
  const Vec perp = v - par * e;
  return par * (std::cos(r) * e - std::sin(r) * x) + sinc(r) * perp;
}

Vec sphere_exp_differential_inverse(const Vec& x, const Vec& U, const Vec& w) {
  Vec e;
  const double r = split_direction(U, &e);
  const Vec y = std::cos(r) * x + std::sin(r) * e;
  const Vec e_t = std::cos(r) * e - std::sin(r) * x;  // transported direction
  const double par = w.dot(e_t);
  const Vec perp = w - par * e_t - w.dot(y) * y;
  return par * e + perp / sinc(r);
}

//---------------------------------------------------------------------------//
// Linear solve
//---------------------------------------------------------------------------//

BottkolTriple bottkol_linear_solve(const TangentField& W) {
  const HopfGrid& grid = W.grid();
  const int N = grid.fiber_samples();
  const Mat& A = grid.fiber().primitive();
  TangentField U = TangentField::zeros(W.grid_ptr());
  TangentField V = TangentField::zeros(W.grid_ptr());
  ScalarField h = ScalarField::zeros(W.grid_ptr());
  for (int b = 0; b < grid.base_size(); ++b) {
    const Mat rows = W.corotated(b);
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    const Vec X0 = 2.0 * apply_J(grid.rep(b));
    const double hb = -mean.dot(X0.transpose()) / X0.squaredNorm();
    const Eigen::RowVectorXd Vb = -mean - hb * X0.transpose();
    U.set_from_corotated(b, A * (rows.rowwise() - mean));
    V.set_from_corotated(b, Vb.replicate(N, 1));
    h.fiber(b).setConstant(hb);
  }
  BottkolTriple out{std::move(U), std::move(V), std::move(h), 0.0};
  out.residual = bottkol_linear_residual(out, W);
  return out;
}

double bottkol_linear_residual(const BottkolTriple& triple, const TangentField& W) {
  const HopfGrid& grid = W.grid();
  const int N = grid.fiber_samples();
  const TangentField LU = reeb_lie_derivative(triple.U);
  double worst = 0.0;
  for (int b = 0; b < grid.base_size(); ++b) {
    for (int j = 0; j < N; ++j) {
      const int c = b * N + j;
      const Vec X0 = 2.0 * apply_J(grid.point(b, j));
      const Vec r = LU.values().col(c) - triple.h.values()[c] * X0 -
                    triple.V.values().col(c) - W.values().col(c);
      worst = std::max(worst, r.norm());
    }
  }
  return worst;
}

//---------------------------------------------------------------------------//
// Fiber Newton
//---------------------------------------------------------------------------//

Mat FiberSolution::images(const FiberOps& ops) const {
  Mat out(U.rows(), U.cols());
  for (int j = 0; j < U.rows(); ++j) {
    const Vec u = sphere_exp(rep, U.row(j).transpose());
    out.row(j) = rotate(u, 2.0 * ops.angle(j)).transpose();
  }
  return out;
}

Mat bottkol_fiber_residual(const RadialProfile& f, const FiberOps& ops,
                           const Vec& rep, const Mat& U, const Vec& V, double h) {
  const int N = ops.samples();
  const Mat Up = ops.derivative() * U;
  Mat Phi(N, U.cols());
  for (int j = 0; j < N; ++j) {
    const double a = 2.0 * ops.angle(j);
    const Vec Uj = U.row(j).transpose();
    const Vec u = sphere_exp(rep, Uj);
    const Vec X = rotate(sphere_reeb_field(f, rotate(u, a)), -a);
    const Vec X0u = 2.0 * apply_J(u);
    Phi.row(j) = (Up.row(j).transpose() +
                  sphere_exp_differential_inverse(rep, Uj, X0u - h * X) - V)
                     .transpose();
  }
  return Phi;
}

FiberSolution solve_bottkol_fiber(const RadialProfile& f, const FiberOps& ops,
                                  const Vec& rep, const BottkolOptions& options) {
  const int N = ops.samples();
  const int dim = static_cast<int>(rep.size());
  if (dim != 2 * f.n()) throw DimensionError("solve_bottkol_fiber: dimension mismatch");
  FiberSolution s;
  s.rep = rep;
  s.U = Mat::Zero(N, dim);
  s.V = Vec::Zero(dim);
  s.h = 1.0;
  const Vec X0 = 2.0 * apply_J(rep);
  const double x0_sq = X0.squaredNorm();
  int stalls = 0;
  for (int k = 0;; ++k) {
    const Mat Phi = bottkol_fiber_residual(f, ops, rep, s.U, s.V, s.h);
    const double res = Phi.rowwise().norm().maxCoeff();
    if (!s.residuals.empty() && res >= s.residuals.back()) {
      if (k > 1) s.monotone = false;
      ++stalls;
    } else {
      stalls = 0;
    }
    s.residuals.push_back(res);
    if (res < options.tol) {
      s.converged = true;
      break;
    }
    if (stalls >= options.stall_limit || k >= options.max_iter) {
      s.converged = res < options.accept;
      if (!s.converged && stalls >= options.stall_limit) {
        throw ConvergenceError("Bottkol iteration stalled at residual " +
                               sci(res));
      }
      break;
    }
    const Eigen::RowVectorXd mean = Phi.colwise().mean();
    const double dh = -mean.dot(X0.transpose()) / x0_sq;
    const Vec dV = -mean.transpose() - dh * X0;
    s.U -= ops.primitive() * (Phi.rowwise() - mean);
    s.V -= dV;
    s.h -= dh;
    s.iterations = k + 1;
    const double umax = s.U.rowwise().norm().maxCoeff();
    if (umax >= 0.5 * kPi) {
      throw PreconditionError("Bottkol displacement reached the injectivity bound (|U| = " +
                              sci(umax) + ")");
    }
  }
  return s;
}

//---------------------------------------------------------------------------//
// DisplacementMap
//---------------------------------------------------------------------------//

DisplacementMap::DisplacementMap(RadialProfile f, int fiber_modes, BottkolOptions options)
    : f_(std::move(f)), ops_(fiber_modes), options_(options) {}

std::shared_ptr<const FiberSolution> DisplacementMap::solve(const Vec& rep) const {
  std::vector<double> key(rep.data(), rep.data() + rep.size());
  {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  auto sol = std::make_shared<const FiberSolution>(solve_bottkol_fiber(f_, ops_, rep, options_));
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.emplace(std::move(key), std::move(sol)).first->second;
}

Vec DisplacementMap::operator()(const Vec& x) const {
  const auto sol = solve(x);
  return sphere_exp(x, sol->U.row(0).transpose());
}

std::size_t DisplacementMap::cache_size() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return cache_.size();
}

//---------------------------------------------------------------------------//
// Grid Newton
//---------------------------------------------------------------------------//

BottkolResult bottkol_newton(const RadialProfile& f, GridPtr grid,
                             const BottkolOptions& options) {
  const int N = grid->fiber_samples();
  const int B = grid->base_size();
  auto u = std::make_shared<DisplacementMap>(f, grid->fiber_modes(), options);
  std::vector<std::shared_ptr<const FiberSolution>> sols(B);
  parallel_for(B, [&](int b) { sols[b] = u->solve(grid->rep(b)); });

  BottkolResult out{BottkolTriple{TangentField::zeros(grid), TangentField::zeros(grid),
                                  ScalarField::zeros(grid), 0.0},
                    u, {}, 0, true, true, 0.0, 0.0, 0.0, 0.0};
  std::size_t steps = 0;
  for (const auto& s : sols) steps = std::max(steps, s->residuals.size());
  out.residual_history.assign(steps, 0.0);
  for (int b = 0; b < B; ++b) {
    const FiberSolution& s = *sols[b];
    for (std::size_t k = 0; k < steps; ++k) {
      const double r = s.residuals[std::min(k, s.residuals.size() - 1)];
      out.residual_history[k] = std::max(out.residual_history[k], r);
    }
    out.iterations = std::max(out.iterations, s.iterations);
    out.converged = out.converged && s.converged;
    out.monotone = out.monotone && s.monotone;
    out.triple.U.set_from_corotated(b, s.U);
    out.triple.V.set_from_corotated(b, s.V.transpose().replicate(N, 1));
    out.triple.h.fiber(b).setConstant(s.h);
    out.max_displacement = std::max(out.max_displacement, s.U.rowwise().norm().maxCoeff());
  }
  out.triple.residual = out.residual_history.empty() ? 0.0 : out.residual_history.back();

  const TangentField Ubar = fiber_average_vector(out.triple.U);
  out.zero_average_residual = Ubar.max_norm();
  const TangentField Vbar = fiber_average_vector(out.triple.V);
  const ScalarField hbar = fiber_average_scalar(out.triple.h);
  out.invariance_residual =
      std::max((out.triple.V.values() - Vbar.values()).cwiseAbs().maxCoeff(),
               (out.triple.h.values() - hbar.values()).cwiseAbs().maxCoeff());
  for (int b = 0; b < B; ++b) {
    for (int j = 0; j < N; ++j) {
      const Vec X0 = 2.0 * apply_J(grid->point(b, j));
      out.orthogonality_residual = std::max(
          out.orthogonality_residual, std::abs(out.triple.V.values().col(b * N + j).dot(X0)));
    }
  }
  return out;
}

}  // namespace zoll
