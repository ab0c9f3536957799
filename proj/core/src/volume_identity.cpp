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

#include "zoll/volume_identity.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>
#include <vector>

#include "zoll/contact.hpp"

namespace zoll {

namespace {

constexpr double kGradStep = 1e-6;

// d omega (X, Y) for an ambient covector field, X and Y constant vectors.
double exterior_derivative(const std::function<Vec(const Vec&)>& c, const Vec& x,
                           const Vec& X, const Vec& Y, double h) {
  const Vec dX = (c(x + h * X) - c(x - h * X)) / (2.0 * h);
  const Vec dY = (c(x + h * Y) - c(x - h * Y)) / (2.0 * h);
  return dX.dot(Y) - dY.dot(X);
}

}  // namespace

Vec FormTriple::grad_f_at(const Vec& x) const {
  if (grad_f) return grad_f(x);
  Vec g(x.size());
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    Vec e = Vec::Zero(x.size());
    e[k] = kGradStep;
    g[k] = (f(x + e) - f(x - e)) / (2.0 * kGradStep);
  }
  return g;
}

Vec FormTriple::beta(const Vec& x) const {
  return 0.5 * S(x) * apply_J(x) + eta(x) + grad_f_at(x);
}

VolumeIdentityReport volume_identity_check(const FormTriple& triple, const HopfGrid& grid,
                                           double fd_step) {
  if (grid.n() != 2) throw DimensionError("volume_identity_check is implemented for n = 2");
  const int N = grid.fiber_samples();
  const auto beta = [&triple](const Vec& x) { return triple.beta(x); };
  const double dtheta = kPi / N;
  VolumeIdentityReport out;
  for (int b = 0; b < grid.base_size(); ++b) {
    double lhs = 0, s2 = 0, cross = 0, eterm = 0, p1 = 0, vol = 0;
    for (int j = 0; j < N; ++j) {
      const Vec x = grid.point(b, j);
      const auto frame = contact_frame(x);
      const Vec R0 = 2.0 * apply_J(x);
      const Vec& e2 = frame[0];
      const Vec& e3 = frame[1];

      const Vec eta = triple.eta(x);
      const double etaR = eta.dot(R0);
      out.eta_contraction = std::max(out.eta_contraction, std::abs(etaR));
      const double eta2 = eta.dot(e2), eta3 = eta.dot(e3);

      // The frame (R0, e2, e3) has alpha0 ^ d alpha0 = 1 on it.
      const Vec B = triple.beta(x);
      const double dB23 = exterior_derivative(beta, x, e2, e3, fd_step);
      const double dBR3 = exterior_derivative(beta, x, R0, e3, fd_step);
      const double dBR2 = exterior_derivative(beta, x, R0, e2, fd_step);
      lhs += B.dot(R0) * dB23 - B.dot(e2) * dBR3 + B.dot(e3) * dBR2;

      const double S = triple.S(x);
      s2 += S * S;
      const double dS2 = (triple.S(x + fd_step * e2) - triple.S(x - fd_step * e2)) / (2 * fd_step);
      const double dS3 = (triple.S(x + fd_step * e3) - triple.S(x - fd_step * e3)) / (2 * fd_step);
      cross += 2.0 * (dS3 * eta2 - dS2 * eta3);

      const double dE23 = exterior_derivative(triple.eta, x, e2, e3, fd_step);
      const double dER3 = exterior_derivative(triple.eta, x, R0, e3, fd_step);
      const double dER2 = exterior_derivative(triple.eta, x, R0, e2, fd_step);
      eterm += etaR * dE23 - eta2 * dER3 + eta3 * dER2;

      // -2 d(alpha0 ^ eta) = -2 (d alpha0 ^ eta - alpha0 ^ d eta).
      p1 += -2.0 * (etaR - dE23);
      vol += 1.0;
    }
    const double w = grid.weight(b) * dtheta;
    out.lhs += w * lhs;
    out.s2_term += w * s2;
    out.cross_term += w * cross;
    out.eta_term += w * eterm;
    out.p1_integral += w * p1;
    out.volume0 += w * vol;
  }
  if (out.eta_contraction > 1e-8) {
    throw PreconditionError("volume_identity_check: eta(R0) = " +
                            sci(out.eta_contraction) + " on the grid");
  }
  out.rhs = out.s2_term + out.cross_term + out.eta_term;
  out.relative_gap = std::abs(out.lhs - out.rhs) / std::abs(out.lhs);
  return out;
}

FormTriple random_form_triple(std::uint64_t seed, double amplitude, int degree) {
  auto p = std::make_shared<std::vector<SpherePolynomial>>();
  for (int k = 0; k < 6; ++k) {
    p->push_back(SpherePolynomial::random(2, degree, seed * 7919 + k).scaled(amplitude));
  }
  FormTriple t;
  t.S = [p](const Vec& x) { return 1.0 + (*p)[0].value(x); };
  t.f = [p](const Vec& x) { return (*p)[1].value(x); };
  t.grad_f = [p](const Vec& x) { return (*p)[1].gradient(x); };
  t.eta = [p](const Vec& x) {
    Vec xi(4);
    for (int k = 0; k < 4; ++k) xi[k] = (*p)[2 + k].value(x);
    const Vec jx = apply_J(x);
    return Vec(xi - xi.dot(jx) / x.squaredNorm() * jx);
  };
  return t;
}

}  // namespace zoll
