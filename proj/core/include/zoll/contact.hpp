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

// Starshaped domains A_f = { r z : 0 <= r < f(z) } and their boundary
// contact forms, which pull back to f^2 alpha0 on the unit sphere.

#ifndef ZOLL_CONTACT_HPP_
#define ZOLL_CONTACT_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "zoll/sphere.hpp"
#include "zoll/types.hpp"

namespace zoll {

// Re(coeff * z^a * conj(z)^b) for multi-indices a, b.
struct MonomialTerm {
  std::vector<int> z_exp;
  std::vector<int> zbar_exp;
  Complex coeff;

  int degree() const;
  // Fiber wavenumber |a| - |b|: the term picks up e^{2i(|a|-|b|) t}.
  int charge() const;
};

// Real polynomial in (z, conj z) given as a sum of MonomialTerm.
class SpherePolynomial {
 public:
  SpherePolynomial() = default;
  SpherePolynomial(int n, std::vector<MonomialTerm> terms);

  int n() const { return n_; }
  const std::vector<MonomialTerm>& terms() const { return terms_; }
  int degree() const { return degree_; }
  bool empty() const { return terms_.empty(); }

  double value(const Vec& z) const;
  // Ambient Euclidean gradient in R^{2n}.
  Vec gradient(const Vec& z) const;
  void value_and_gradient(const Vec& z, double* value, Vec* gradient) const;

  SpherePolynomial scaled(double s) const;

  // All monomials of total degree 1..degree with coefficients uniform in
  // the unit disc; `invariant_only` keeps |a| = |b|.
  static SpherePolynomial random(int n, int degree, std::uint64_t seed,
                                 bool invariant_only = false);

 private:
  int n_ = 0;
  int degree_ = 0;
  std::vector<MonomialTerm> terms_;
};

// Positive function f on S^{2n-1}, evaluated through its extension
// f(z / |z|), which is homogeneous of degree zero.
class RadialProfile {
 public:
  enum class Kind { kPolynomial, kEllipsoid };

  static RadialProfile round(int n);
  // f = 1 + p.
  static RadialProfile polynomial(const SpherePolynomial& p);
  // Boundary { sum |z_j|^2 / r_j^2 = 1 }.
  static RadialProfile ellipsoid(const std::vector<double>& radii);
  // f = 1 + eps * p / max|p|, p random of the given degree.
  static RadialProfile random(int n, int degree, double eps, std::uint64_t seed,
                              bool invariant_only = false);

  // JSON grammar: {"n": 2, "terms": [{"z": [..], "zbar": [..],
  // "coeff": [re, im]}, ...]} or {"n": 2, "ellipsoid": [r1, r2]}.
  static RadialProfile from_json(const std::string& text);
  std::string to_json() const;

  Kind kind() const { return kind_; }
  int n() const { return n_; }
  const SpherePolynomial& perturbation() const { return poly_; }
  const std::vector<double>& radii() const { return radii_; }
  bool is_round() const { return kind_ == Kind::kPolynomial && poly_.empty(); }

  double value(const Vec& z) const;
  Vec gradient(const Vec& z) const;
  void value_and_gradient(const Vec& z, double* value, Vec* gradient) const;

  // Bounds over a fixed deterministic probe set (cached at construction).
  double min_bound() const { return min_; }
  double max_bound() const { return max_; }

 private:
  RadialProfile() = default;
  void compute_bounds();

  Kind kind_ = Kind::kPolynomial;
  int n_ = 0;
  SpherePolynomial poly_;
  std::vector<double> radii_;
  double min_ = 1.0;
  double max_ = 1.0;
};

// H(z) = |z|^2 / f(z/|z|)^2, homogeneous of degree two; {H = 1} = dA_f.
class HomogeneousHamiltonian {
 public:
  explicit HomogeneousHamiltonian(RadialProfile f) : f_(std::move(f)) {}

  const RadialProfile& profile() const { return f_; }
  int n() const { return f_.n(); }
  double value(const Vec& z) const;
  Vec gradient(const Vec& z) const;
  void value_and_gradient(const Vec& z, double* value, Vec* gradient) const;
  // Central differences of the analytic gradient.
  Mat hessian(const Vec& z) const;

 private:
  RadialProfile f_;
};

// lambda0_z(v) = (1/2) omega0(z, v).
double lambda0(const Vec& z, const Vec& v);

// J grad H at z on dA_f. Throws PreconditionError if |H(z) - 1| >= 1e-9.
Vec reeb_field(const RadialProfile& f, const Vec& z);
Vec reeb_field(const HomogeneousHamiltonian& H, const Vec& z);

// Reeb field of f^2 alpha0 on the unit sphere (the boundary field carried
// back by the radial map): X = R0 / g - i P_xi grad g / g^2, g = f^2,
// R0 = 2 i x.
Vec sphere_reeb_field(const RadialProfile& f, const Vec& x);

// x -> f(x) x from the unit sphere to dA_f, and its inverse w -> w / |w|.
Vec radial_map(const RadialProfile& f, const Vec& x);
Vec radial_unmap(const Vec& w);

// Ratio of the round surface measure to alpha0 ^ (d alpha0)^{n-1}:
// 2 / (n-1)!.
double round_to_contact_measure(int n);

// (n! / 2n) * integral of f^{2n} d sigma over S^{2n-1}, evaluated as the
// grid quadrature of f^{2n} against the contact measure.
double contact_volume(const RadialProfile& f, const HopfGrid& grid);

// The coefficient field f^2 of rho^* alpha_{A_f} = f^2 alpha0.
ScalarField pullback_to_sphere(const RadialProfile& f, GridPtr grid);

struct EllipsoidOracle {
  double t_min = 0.0;
  double volume = 0.0;
  double rho = 0.0;
  // Coordinate circles: seed r_j e_{x_j} with period pi r_j^2.
  std::vector<Vec> seeds;
  std::vector<double> periods;
};

EllipsoidOracle ellipsoid_oracle(const std::vector<double>& radii);

}  // namespace zoll

#endif  // ZOLL_CONTACT_HPP_
