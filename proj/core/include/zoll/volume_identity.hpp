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

// The volume of beta = S alpha0 + eta + df on S^3 with eta(R0) = 0, computed
// directly and through the expansion
//   beta ^ d beta = S^2 alpha0 ^ d alpha0 + 2 dS ^ alpha0 ^ eta
//                   + eta ^ d eta + (exact terms).

#ifndef ZOLL_VOLUME_IDENTITY_HPP_
#define ZOLL_VOLUME_IDENTITY_HPP_

#include <cstdint>
#include <functional>

#include "zoll/sphere.hpp"
#include "zoll/types.hpp"

namespace zoll {

// Ambient data for S, eta and f near the unit sphere of C^2. eta is an
// ambient covector whose pairing with 2ix vanishes on the sphere.
struct FormTriple {
  std::function<double(const Vec&)> S;
  std::function<Vec(const Vec&)> eta;
  std::function<double(const Vec&)> f;
  std::function<Vec(const Vec&)> grad_f;  // optional, differences of f otherwise

  Vec grad_f_at(const Vec& x) const;
  // S alpha0 + eta + df as an ambient covector.
  Vec beta(const Vec& x) const;
};

struct VolumeIdentityReport {
  double lhs = 0.0;            // integral of beta ^ d beta
  double rhs = 0.0;            // sum of the three terms below
  double s2_term = 0.0;        // integral of S^2 alpha0 ^ d alpha0
  double cross_term = 0.0;     // 2 * integral of dS ^ alpha0 ^ eta
  double eta_term = 0.0;       // integral of eta ^ d eta
  double relative_gap = 0.0;   // |lhs - rhs| / |lhs|
  double p1_integral = 0.0;    // integral of -2 d(alpha0 ^ eta), zero by Stokes
  double volume0 = 0.0;        // integral of alpha0 ^ d alpha0 (pi^2)
  double eta_contraction = 0.0;  // max |eta(R0)| on the grid
};

// Quadrature on the grid with exterior derivatives by central differences
// of step fd_step. Throws PreconditionError when |eta(R0)| > 1e-8.
VolumeIdentityReport volume_identity_check(const FormTriple& triple, const HopfGrid& grid,
                                           double fd_step = 1e-5);

// S = 1 + amplitude Re p, f = amplitude Re q, eta = xi - xi(R0) alpha0 with
// xi built from four further random polynomials; all of the given degree.
FormTriple random_form_triple(std::uint64_t seed, double amplitude = 0.1, int degree = 3);

}  // namespace zoll

#endif  // ZOLL_VOLUME_IDENTITY_HPP_
