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

// Symplectomorphisms of C^n near the identity through midpoint generating
// functions: i (z - phi(z)) = grad S((z + phi(z)) / 2).

#ifndef ZOLL_GENFUN_HPP_
#define ZOLL_GENFUN_HPP_

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "zoll/symplin.hpp"
#include "zoll/types.hpp"

namespace zoll {

class ScalarField2n {
 public:
  using ValueFn = std::function<double(const Vec&)>;
  using GradFn = std::function<Vec(const Vec&)>;

  ScalarField2n() = default;
  ScalarField2n(int n, ValueFn value, GradFn gradient = nullptr);

  static ScalarField2n zero(int n);
  // c |z|^2.
  static ScalarField2n quadratic(int n, double c);

  int n() const { return n_; }
  double value(const Vec& z) const;
  Vec gradient(const Vec& z) const;
  // Central differences of gradient() with step h_fd(z), symmetrized.
  Mat hessian(const Vec& z) const;
  bool has_analytic_gradient() const { return static_cast<bool>(grad_); }

  ScalarField2n& with_support(double radius);
  bool compact_support() const { return support_radius_ < std::numeric_limits<double>::infinity(); }
  // S vanishes outside the ball of this radius (infinity when unknown).
  double support_radius() const { return support_radius_; }

  // max |analytic - finite difference gradient| / (1 + |grad|) over random
  // probes in the ball of the given radius.
  double gradient_consistency(int probes, double radius, std::uint64_t seed) const;

  static double fd_step(const Vec& z) { return 1e-5 * (1.0 + z.norm()); }

 private:
  int n_ = 0;
  ValueFn value_;
  GradFn grad_;
  double support_radius_ = std::numeric_limits<double>::infinity();
};

struct GenfunOptions {
  double tol = 1e-14;    // Picard increment tolerance
  int max_iter = 200;
  // Hessian / Jacobian bound checks: probes uniform in this ball (or in
  // the support ball of S when smaller), or the explicit list below.
  double probe_radius = 2.0;
  int probes = 200;
  std::uint64_t probe_seed = 7;
  std::vector<Vec> probe_points;
};

struct GenfunProvenance {
  std::string kind;
  double tol = 0.0;
  int max_iter = 0;
  double hessian_bound = 0.0;
  double support_radius = std::numeric_limits<double>::infinity();
};

class NonlinearSymplectomorphism {
 public:
  using MapFn = std::function<Vec(const Vec&)>;
  using JacFn = std::function<Mat(const Vec&)>;

  NonlinearSymplectomorphism() = default;
  NonlinearSymplectomorphism(int n, MapFn map, JacFn jacobian = nullptr,
                             MapFn inverse = nullptr, GenfunProvenance provenance = {});
  static NonlinearSymplectomorphism from_linear(const LinearSymplectomorphism& phi);

  int n() const { return n_; }
  Vec operator()(const Vec& z) const;
  // Analytic Jacobian when available, central differences otherwise.
  Mat jacobian(const Vec& z) const;
  Mat fd_jacobian(const Vec& z) const;
  bool has_inverse() const { return static_cast<bool>(inverse_); }
  Vec inverse(const Vec& w) const;
  const GenfunProvenance& provenance() const { return provenance_; }

 private:
  int n_ = 0;
  MapFn map_;
  JacFn jac_;
  MapFn inverse_;
  GenfunProvenance provenance_;
};

// |D^T J D - J| (max entry) at z, with D the finite-difference Jacobian
// when `finite_difference` is set and jacobian() otherwise.
double symplecticity_residual(const NonlinearSymplectomorphism& phi, const Vec& z,
                              bool finite_difference = true);

// sup |Hess S|_2 over the probe set of `options`.
double hessian_bound(const ScalarField2n& S, const GenfunOptions& options);

// Solves i(z - w) = grad S((z + w) / 2) for w = phi(z) by Picard iteration.
// Throws PreconditionError when the Hessian bound is >= 2.
NonlinearSymplectomorphism phi_from_genfun(const ScalarField2n& S,
                                           const GenfunOptions& options = {});

// Picard increments |w_{k+1} - w_k| at one point.
std::vector<double> genfun_picard_trace(const ScalarField2n& S, const Vec& z,
                                        const GenfunOptions& options = {});

struct GenfunAudit {
  double loop_residual = 0.0;       // max over audit triangles
  double inversion_residual = 0.0;  // max |(z + phi(z))/2 - q| seen
  double jacobian_bound = 0.0;      // sup |D phi - id| on probes
};

// Recovers S with S(basepoint) = 0 from phi. Throws PreconditionError when
// sup |D phi - id| >= 2 or when the loop audit exceeds 1e-8 (non-symplectic
// input), ConvergenceError when the midpoint inversion fails.
ScalarField2n genfun_from_phi(const NonlinearSymplectomorphism& phi,
                              const Vec& basepoint,
                              const GenfunOptions& options = {},
                              GenfunAudit* audit = nullptr);

// gamma(t) = a_0 + sum_k a_k cos(2 pi k t) + b_k sin(2 pi k t), t in R/Z.
class LoopR2n {
 public:
  LoopR2n(int n, int degree);
  static LoopR2n gamma0(int n);

  int n() const { return n_; }
  int degree() const { return static_cast<int>(cos_.size()) - 1; }
  Vec& constant() { return cos_[0]; }
  Vec& cos_coeff(int k) { return cos_.at(k); }
  Vec& sin_coeff(int k) { return sin_.at(k); }

  Vec operator()(double t) const { return derivative(t, 0); }
  Vec derivative(double t, int order) const;
  // Integral of lambda0 along the loop (exact trapezoidal rule).
  double action() const;
  LoopR2n scaled(double c) const;

 private:
  int n_;
  std::vector<Vec> cos_;
  std::vector<Vec> sin_;
};

// max over orders 0..2 of sup_t |d^k (a - b)|, on a fine time grid.
double c2_distance(const LoopR2n& a, const LoopR2n& b);

struct Cutoffs {
  // chi_1: 1 on [plateau_lo, plateau_hi], supported in [support_lo, support_hi].
  double support_lo = 0.25;
  double plateau_lo = 0.5;
  double plateau_hi = 1.5;
  double support_hi = 2.0;
  // chi_2: 1 on [0, w_plateau], supported in [0, w_support].
  double w_plateau = 1.0;
  double w_support = 2.0;
};

// C-infinity step: 0 for x <= 0, 1 for x >= 1, built from exp(-1/x).
double smoothstep(double x);
double smoothstep_derivative(double x);

// The generating function sending gamma to gamma0 with the given cutoffs.
// Throws PreconditionError when the action differs from pi by more than
// 1e-9 or when the first complex coordinate of (gamma + gamma0)/2 is not
// transverse to rays from the origin.
ScalarField2n straightening_genfun(const LoopR2n& gamma, const Cutoffs& cutoffs = {});

// phi_from_genfun of straightening_genfun; the Hessian bound is checked on
// probes spread over the support of S.
NonlinearSymplectomorphism straighten_curve(const LoopR2n& gamma,
                                            const Cutoffs& cutoffs = {},
                                            const GenfunOptions& options = {});

}  // namespace zoll

#endif  // ZOLL_GENFUN_HPP_
