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

// Conjugating a Reeb field X on the unit sphere to a time change of the
// Hopf field X0 = 2iz, up to an equivariant transverse term:
//
//   Phi(U, V, h) = P(U)^{-1} du[X0] - h P(U)^{-1} X(u) - V = 0,
//
// where u = exp(U) for the round metric and P(U) is the vertical
// differential of exp. The linearization at (0, 0, 1) for X = X0 is
// L(U, V, h) = L_{X0} U - h X0 - V, which is inverted fiber by fiber.
// Everything is solved in the corotated frame of each fiber: U(e^{2it} z)
// = e^{2it} U~(t) with U~ tangent at z, while V and h are constants.

#ifndef ZOLL_BOTTKOL_HPP_
#define ZOLL_BOTTKOL_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "zoll/contact.hpp"
#include "zoll/sphere.hpp"
#include "zoll/types.hpp"

namespace zoll {

// cos|U| x + sin|U| U/|U| for U tangent at x.
Vec sphere_exp(const Vec& x, const Vec& U);

// P(U) v = d/ds exp_x(U + s v) at s = 0, in closed form.
Vec sphere_exp_differential(const Vec& x, const Vec& U, const Vec& v);

// Inverse of P(U): tangent vectors at exp_x(U) back to T_x. Valid for
// |U| < pi.
Vec sphere_exp_differential_inverse(const Vec& x, const Vec& U, const Vec& w);

// Displacement U, equivariant transverse V and time change h.
struct BottkolTriple {
  TangentField U;
  TangentField V;
  ScalarField h;
  double residual = 0.0;
};

// Exact inverse of L on grid fields: h = -<W_bar, X0>/|X0|^2,
// V = -W_bar - h X0, U = zero-mean fiber primitive of W - W_bar.
BottkolTriple bottkol_linear_solve(const TangentField& W);

// max |L_{X0} U - h X0 - V - W| over the grid.
double bottkol_linear_residual(const BottkolTriple& triple, const TangentField& W);

struct BottkolOptions {
  int max_iter = 40;
  double tol = 1e-12;     // stop once max |Phi| is below this
  double accept = 1e-9;   // residual that still counts as converged
  // Consecutive non-decreasing steps tolerated before giving up.
  int stall_limit = 3;
};

struct FiberSolution {
  Vec rep;
  Mat U;   // corotated U~, N x 2n, rows tangent at rep
  Vec V;   // corotated V~
  double h = 1.0;
  std::vector<double> residuals;  // max |Phi| before each update
  int iterations = 0;
  bool converged = false;
  bool monotone = true;           // residual decreased after the first step

  // u at the fiber samples, exp_{x_j}(U(x_j)) with x_j = e^{2 i theta_j} rep.
  Mat images(const FiberOps& ops) const;
};

// Frozen-Jacobian Newton on one fiber. Throws PreconditionError when |U|
// reaches pi/2 and ConvergenceError when the residual stalls above
// `accept`.
FiberSolution solve_bottkol_fiber(const RadialProfile& f, const FiberOps& ops,
                                  const Vec& rep, const BottkolOptions& options = {});

// Phi in the corotated frame for the given iterate (rows per sample).
Mat bottkol_fiber_residual(const RadialProfile& f, const FiberOps& ops,
                           const Vec& rep, const Mat& U, const Vec& V, double h);

// The displacement u = exp(U), solved lazily fiber by fiber and cached by
// representative. Thread safe.
class DisplacementMap {
 public:
  DisplacementMap(RadialProfile f, int fiber_modes, BottkolOptions options = {});

  int n() const { return f_.n(); }
  const RadialProfile& profile() const { return f_; }
  const FiberOps& fiber_ops() const { return ops_; }
  const BottkolOptions& options() const { return options_; }

  std::shared_ptr<const FiberSolution> solve(const Vec& rep) const;
  // u(x), using x as the representative of its fiber.
  Vec operator()(const Vec& x) const;
  std::size_t cache_size() const;

 private:
  RadialProfile f_;
  FiberOps ops_;
  BottkolOptions options_;
  mutable std::mutex mutex_;
  mutable std::map<std::vector<double>, std::shared_ptr<const FiberSolution>> cache_;
};

struct BottkolResult {
  BottkolTriple triple;
  std::shared_ptr<const DisplacementMap> u;
  // Max over fibers of max |Phi| before update k (fibers that stopped
  // earlier contribute their final value).
  std::vector<double> residual_history;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
  double zero_average_residual = 0.0;   // max |fiber mean of U|
  double orthogonality_residual = 0.0;  // max |<V, 2ix>|
  double invariance_residual = 0.0;     // V and h against their fiber averages
  double max_displacement = 0.0;        // max |U|
};

// Solves every base fiber of the grid. The grid's fiber resolution is used.
BottkolResult bottkol_newton(const RadialProfile& f, GridPtr grid,
                             const BottkolOptions& options = {});

}  // namespace zoll

#endif  // ZOLL_BOTTKOL_HPP_
