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

// Splitting a one-form on S^3 as beta = S alpha0 + eta + df with S
// constant on Hopf fibers, eta(R0) = 0 and f of zero fiber mean; the base
// function S^ on CP^1 and its critical fibers.

#ifndef ZOLL_NORMALFORM_HPP_
#define ZOLL_NORMALFORM_HPP_

#include <array>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zoll/bottkol.hpp"
#include "zoll/contact.hpp"
#include "zoll/orbits.hpp"
#include "zoll/spherical_harmonics.hpp"
#include "zoll/sphere.hpp"
#include "zoll/types.hpp"

namespace zoll {

// A one-form that can be evaluated fiber by fiber. Covectors are returned
// as ambient vectors tangent to the sphere, one row per fiber sample
// x_j = e^{2 i theta_j} rep.
class FiberOneForm {
 public:
  virtual ~FiberOneForm() = default;
  virtual int n() const = 0;
  virtual Mat covectors(const Vec& rep, const FiberOps& ops) const = 0;
  // beta(R0) at the samples, R0 = 2ix. Defaults to contracting covectors().
  virtual Vec reeb_contraction(const Vec& rep, const FiberOps& ops) const;
};

// beta_x(v) = <c(x), v> for an ambient covector function c.
class FunctionOneForm : public FiberOneForm {
 public:
  FunctionOneForm(int n, std::function<Vec(const Vec&)> covector);
  // g alpha0.
  static FunctionOneForm scaled_contact(int n, std::function<double(const Vec&)> g);

  int n() const override { return n_; }
  Mat covectors(const Vec& rep, const FiberOps& ops) const override;
  Vec reeb_contraction(const Vec& rep, const FiberOps& ops) const override;

 private:
  int n_;
  std::function<Vec(const Vec&)> c_;
};

// u^*(f^2 alpha0) for the displacement u of a Bottkol solve (n = 2).
// Derivatives of u along the fiber are spectral; across fibers they are
// central differences between neighbouring fiber solves.
class PullbackOneForm : public FiberOneForm {
 public:
  explicit PullbackOneForm(std::shared_ptr<const DisplacementMap> u, double fd_step = 1e-5);

  int n() const override { return u_->n(); }
  Mat covectors(const Vec& rep, const FiberOps& ops) const override;
  Vec reeb_contraction(const Vec& rep, const FiberOps& ops) const override;

 private:
  std::shared_ptr<const DisplacementMap> u_;
  double h_;
};

struct SplitForm {
  ScalarField S;
  TangentField eta;
  ScalarField f;
  TangentField beta;  // the sampled input covectors
  TangentField df;    // differential of f (fiber: spectral, base: differences)
  double s_invariance = 0.0;    // max |S - fiber mean of S|
  double eta_reeb = 0.0;        // max |eta(R0)|
  double f_mean = 0.0;          // max |fiber mean of f|
  double reconstruction = 0.0;  // max |S alpha0 + eta + df - beta|
};

// n = 2. Neighbour fibers at distance fd_step supply df across fibers.
SplitForm split_form(const FiberOneForm& beta, GridPtr grid, double fd_step = 1e-5);

// S^ on CP^1 = S^2, interpolated by spherical harmonics from the fiber
// means of S on a grid with the Gauss-Legendre x uniform base layout.
class BaseFunction {
 public:
  static BaseFunction from_field(const ScalarField& S);

  double value(const std::array<double, 3>& p) const;
  // S^ at the base point of z.
  double value_at(const Vec& z) const { return value(base_point(z)); }
  double value_chart(int chart, Complex w) const;
  // Central differences in (Re w, Im w).
  Eigen::Vector2d chart_gradient(int chart, Complex w, double h = 1e-5) const;
  Eigen::Matrix2d chart_hessian(int chart, Complex w, double h = 1e-4) const;

  // Extremes over the grid base nodes.
  double sup() const { return sup_; }
  double inf() const { return inf_; }
  // max |S^(base(rep_b)) - mean S on fiber b|.
  double lift_residual() const { return lift_residual_; }
  // max |S^ via chart 0 - S^ via chart 1| on random overlap points.
  double chart_overlap_residual(int probes, std::uint64_t seed) const;

 private:
  SphericalHarmonics sh_;
  double sup_ = 0.0;
  double inf_ = 0.0;
  double lift_residual_ = 0.0;
};

struct CriticalFiber {
  int chart = 0;
  Complex w;
  std::array<double, 3> base{};
  Vec rep;             // unit representative of the fiber
  double value = 0.0;  // S^(b)
  double grad_norm = 0.0;
  int index = 0;       // number of negative Hessian eigenvalues
};

struct CriticalOptions {
  double tol = 1e-9;            // |grad S^| in chart coordinates
  int starts = 64;              // Fibonacci start points
  int max_iter = 60;
  double dedup = 1e-5;          // base-point distance
  double degenerate_tol = 1e-8; // sup - inf below this flags constant S^
};

struct CriticalReport {
  std::vector<CriticalFiber> points;
  bool degenerate = false;
  int starts = 0;
  int failures = 0;  // starts that did not converge
};

CriticalReport critical_fibers(const BaseFunction& Shat, const CriticalOptions& options = {});

struct NormalFormOptions {
  // Skip the Bottkol step and split f^2 alpha0 directly.
  bool first_order = false;
  double fd_step = 1e-5;
  BottkolOptions bottkol;
};

struct NormalFormResult {
  SplitForm split;
  std::optional<BottkolResult> bottkol;
  std::shared_ptr<const DisplacementMap> u;  // null in first-order mode
  double s_deviation = 0.0;  // max |S - 1|
  double eta_norm = 0.0;     // max |eta|
  double f_norm = 0.0;       // max |f|
  bool first_order = false;
};

// n = 2 only.
NormalFormResult normal_form(const RadialProfile& f, GridPtr grid,
                             const NormalFormOptions& options = {});

struct VariationalEntry {
  CriticalFiber critical;
  double predicted = 0.0;       // pi S^(b)
  double found = 0.0;
  double error = 0.0;           // |found - predicted|
  double fiber_distance = 0.0;  // max distance from orbit samples to the fiber image
  bool converged = false;
  std::string message;
};

struct VariationalReport {
  std::vector<VariationalEntry> entries;
  double max_error = 0.0;
  int converged = 0;
};

// Shoots from rho(u(pi^{-1}(b))) for every critical b with period guess
// pi S^(b); u is the identity when `u` is null.
VariationalReport verify_variational_principle(const RadialProfile& f,
                                               const std::shared_ptr<const DisplacementMap>& u,
                                               const CriticalReport& criticals,
                                               const ShootingOptions& options = {});

// Orbit seeds at the critical fibers of the first-order S^ (fiber means of
// f^2), with period guesses pi S^(b).
std::vector<OrbitSeed> critical_fiber_seeds(const RadialProfile& f, GridPtr grid,
                                            CriticalReport* report = nullptr);

}  // namespace zoll

#endif  // ZOLL_NORMALFORM_HPP_
