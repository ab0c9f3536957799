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

#include "zoll/contact.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "json.hpp"

namespace zoll {

namespace {

// Multi-indices of length `len` with total degree exactly `deg`.
void compositions(int len, int deg, std::vector<int>& cur,
                  std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == len - 1) {
    cur.push_back(deg);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int k = deg; k >= 0; --k) {
    cur.push_back(k);
    compositions(len, deg - k, cur, out);
    cur.pop_back();
  }
}

// Deterministic probe set on S^{2n-1} for sup/inf estimates.
const std::vector<Vec>& probe_points(int n) {
  static thread_local std::vector<std::vector<Vec>> cache;
  if (static_cast<int>(cache.size()) <= n) cache.resize(n + 1);
  if (cache[n].empty()) {
    std::mt19937_64 rng(0x2545F4914F6CDD1DULL + n);
    std::normal_distribution<double> normal;
    for (int j = 0; j < 2 * n; ++j) {
      Vec e = Vec::Zero(2 * n);
      e[j] = 1.0;
      cache[n].push_back(e);
    }
    for (int i = 0; i < 8192; ++i) {
      Vec v(2 * n);
      for (int j = 0; j < 2 * n; ++j) v[j] = normal(rng);
      cache[n].push_back(v / v.norm());
    }
  }
  return cache[n];
}

void require_size(const Vec& z, int n) {
  if (z.size() != 2 * n) {
    throw DimensionError("expected a point of R^" + std::to_string(2 * n) +
                         ", got length " + std::to_string(z.size()));
  }
}

}  // namespace

int MonomialTerm::degree() const {
  return std::accumulate(z_exp.begin(), z_exp.end(), 0) +
         std::accumulate(zbar_exp.begin(), zbar_exp.end(), 0);
}

int MonomialTerm::charge() const {
  return std::accumulate(z_exp.begin(), z_exp.end(), 0) -
         std::accumulate(zbar_exp.begin(), zbar_exp.end(), 0);
}

//---------------------------------------------------------------------------//
// SpherePolynomial
//---------------------------------------------------------------------------//

SpherePolynomial::SpherePolynomial(int n, std::vector<MonomialTerm> terms)
    : n_(n), terms_(std::move(terms)) {
  if (n < 1) throw PreconditionError("polynomial needs n >= 1");
  for (const MonomialTerm& t : terms_) {
    if (static_cast<int>(t.z_exp.size()) != n ||
        static_cast<int>(t.zbar_exp.size()) != n) {
      throw DimensionError("monomial multi-index length differs from n");
    }
    for (int j = 0; j < n; ++j) {
      if (t.z_exp[j] < 0 || t.zbar_exp[j] < 0) {
        throw PreconditionError("negative monomial exponent");
      }
    }
    degree_ = std::max(degree_, t.degree());
  }
}

double SpherePolynomial::value(const Vec& z) const {
  double v = 0.0;
  value_and_gradient(z, &v, nullptr);
  return v;
}

Vec SpherePolynomial::gradient(const Vec& z) const {
  Vec g;
  value_and_gradient(z, nullptr, &g);
  return g;
}

void SpherePolynomial::value_and_gradient(const Vec& z, double* value,
                                          Vec* gradient) const {
  require_size(z, n_);
  const int d = degree_;
  // pw[j][p] = z_j^p, pb[j][p] = conj(z_j)^p.
  std::vector<std::vector<Complex>> pw(n_, std::vector<Complex>(d + 1));
  std::vector<std::vector<Complex>> pb(n_, std::vector<Complex>(d + 1));
  for (int j = 0; j < n_; ++j) {
    const Complex zj(z[2 * j], z[2 * j + 1]);
    pw[j][0] = pb[j][0] = 1.0;
    for (int p = 1; p <= d; ++p) {
      pw[j][p] = pw[j][p - 1] * zj;
      pb[j][p] = pb[j][p - 1] * std::conj(zj);
    }
  }
  double v = 0.0;
  if (gradient) gradient->setZero(2 * n_);
  std::vector<Complex> factor(n_);
  for (const MonomialTerm& t : terms_) {
    Complex q = t.coeff;
    for (int j = 0; j < n_; ++j) {
      factor[j] = pw[j][t.z_exp[j]] * pb[j][t.zbar_exp[j]];
      q *= factor[j];
    }
    v += q.real();
    if (!gradient) continue;
    for (int j = 0; j < n_; ++j) {
      const int a = t.z_exp[j];
      const int b = t.zbar_exp[j];
      if (a == 0 && b == 0) continue;
      Complex rest = t.coeff;
      for (int k = 0; k < n_; ++k) {
        if (k != j) rest *= factor[k];
      }
      const Complex dz = a > 0 ? rest * double(a) * pw[j][a - 1] * pb[j][b] : 0.0;
      const Complex dzb = b > 0 ? rest * double(b) * pw[j][a] * pb[j][b - 1] : 0.0;
      (*gradient)[2 * j] += (dz + dzb).real();
      (*gradient)[2 * j + 1] += -(dz - dzb).imag();
    }
  }
  if (value) *value = v;
}

SpherePolynomial SpherePolynomial::scaled(double s) const {
  std::vector<MonomialTerm> terms = terms_;
  for (MonomialTerm& t : terms) t.coeff *= s;
  return SpherePolynomial(n_, std::move(terms));
}

SpherePolynomial SpherePolynomial::random(int n, int degree, std::uint64_t seed,
                                          bool invariant_only) {
  if (n < 1 || degree < 1) throw PreconditionError("random polynomial: bad n or degree");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<MonomialTerm> terms;
  for (int deg = 1; deg <= degree; ++deg) {
    std::vector<std::vector<int>> idx;
    std::vector<int> cur;
    compositions(2 * n, deg, cur, idx);
    for (const std::vector<int>& m : idx) {
      MonomialTerm t;
      t.z_exp.assign(m.begin(), m.begin() + n);
      t.zbar_exp.assign(m.begin() + n, m.end());
      // Coefficients are drawn before the invariance filter so that the
      // invariant part of a seed matches the full draw.
      double re, im;
      do {
        re = unit(rng);
        im = unit(rng);
      } while (re * re + im * im > 1.0);
      t.coeff = Complex(re, im);
      if (invariant_only && t.charge() != 0) continue;
      terms.push_back(std::move(t));
    }
  }
  return SpherePolynomial(n, std::move(terms));
}

//---------------------------------------------------------------------------//
// RadialProfile
//---------------------------------------------------------------------------//

RadialProfile RadialProfile::round(int n) {
  return polynomial(SpherePolynomial(n, {}));
}

RadialProfile RadialProfile::polynomial(const SpherePolynomial& p) {
  if (p.n() < 1) throw PreconditionError("profile needs n >= 1");
  RadialProfile f;
  f.kind_ = Kind::kPolynomial;
  f.n_ = p.n();
  f.poly_ = p;
  f.compute_bounds();
  return f;
}

RadialProfile RadialProfile::ellipsoid(const std::vector<double>& radii) {
  if (radii.empty()) throw PreconditionError("ellipsoid needs at least one radius");
  for (double r : radii) {
    if (!(r > 0.0)) throw PreconditionError("ellipsoid radii must be positive");
  }
  RadialProfile f;
  f.kind_ = Kind::kEllipsoid;
  f.n_ = static_cast<int>(radii.size());
  f.radii_ = radii;
  f.compute_bounds();
  return f;
}

RadialProfile RadialProfile::random(int n, int degree, double eps,
                                    std::uint64_t seed, bool invariant_only) {
  const SpherePolynomial p = SpherePolynomial::random(n, degree, seed, invariant_only);
  double sup = 0.0;
  for (const Vec& x : probe_points(n)) sup = std::max(sup, std::abs(p.value(x)));
  if (sup == 0.0) return round(n);
  return polynomial(p.scaled(eps / sup));
}

void RadialProfile::compute_bounds() {
  min_ = std::numeric_limits<double>::infinity();
  max_ = -min_;
  for (const Vec& x : probe_points(n_)) {
    const double v = value(x);
    min_ = std::min(min_, v);
    max_ = std::max(max_, v);
  }
  if (!(min_ > 0.0)) {
    throw PreconditionError("radial profile is not positive on the sphere (min " +
                            std::to_string(min_) + ")");
  }
}

double RadialProfile::value(const Vec& z) const {
  double v = 0.0;
  value_and_gradient(z, &v, nullptr);
  return v;
}

Vec RadialProfile::gradient(const Vec& z) const {
  Vec g;
  value_and_gradient(z, nullptr, &g);
  return g;
}

void RadialProfile::value_and_gradient(const Vec& z, double* value,
                                       Vec* gradient) const {
  require_size(z, n_);
  const double r = z.norm();
  if (r == 0.0) throw PreconditionError("radial profile evaluated at the origin");
  if (kind_ == Kind::kEllipsoid) {
    // f = |z| q^{-1/2}, q = sum |z_j|^2 / r_j^2.
    double q = 0.0;
    for (int j = 0; j < n_; ++j) {
      q += (z[2 * j] * z[2 * j] + z[2 * j + 1] * z[2 * j + 1]) / (radii_[j] * radii_[j]);
    }
    const double v = r / std::sqrt(q);
    if (value) *value = v;
    if (gradient) {
      Vec gq(2 * n_);
      for (int j = 0; j < n_; ++j) {
        const double s = 2.0 / (radii_[j] * radii_[j]);
        gq[2 * j] = s * z[2 * j];
        gq[2 * j + 1] = s * z[2 * j + 1];
      }
      *gradient = z / (r * std::sqrt(q)) - r * gq / (2.0 * q * std::sqrt(q));
    }
    return;
  }
  const Vec x = z / r;
  double p = 0.0;
  Vec gp;
  poly_.value_and_gradient(x, &p, gradient ? &gp : nullptr);
  if (value) *value = 1.0 + p;
  if (gradient) *gradient = (gp - x * x.dot(gp)) / r;
}

std::string RadialProfile::to_json() const {
  nlohmann::ordered_json j;
  j["n"] = n_;
  if (kind_ == Kind::kEllipsoid) {
    j["ellipsoid"] = radii_;
  } else {
    nlohmann::ordered_json terms = nlohmann::ordered_json::array();
    for (const MonomialTerm& t : poly_.terms()) {
      nlohmann::ordered_json e;
      e["z"] = t.z_exp;
      e["zbar"] = t.zbar_exp;
      e["coeff"] = {t.coeff.real(), t.coeff.imag()};
      terms.push_back(e);
    }
    j["terms"] = terms;
  }
  return j.dump();
}

RadialProfile RadialProfile::from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("profile: ") + e.what());
  }
  try {
    if (!j.is_object()) throw FormatError("profile: expected an object");
    if (!j.contains("n") || !j["n"].is_number_integer()) {
      throw FormatError("profile: missing integer field \"n\"");
    }
    const int n = j["n"].get<int>();
    if (n < 1) throw FormatError("profile: \"n\" must be >= 1");
    if (j.contains("ellipsoid")) {
      const auto radii = j["ellipsoid"].get<std::vector<double>>();
      if (static_cast<int>(radii.size()) != n) {
        throw FormatError("profile: \"ellipsoid\" needs n radii");
      }
      return ellipsoid(radii);
    }
    std::vector<MonomialTerm> terms;
    if (j.contains("terms")) {
      if (!j["terms"].is_array()) throw FormatError("profile: \"terms\" must be an array");
      for (const auto& e : j["terms"]) {
        MonomialTerm t;
        t.z_exp = e.value("z", std::vector<int>(n, 0));
        t.zbar_exp = e.value("zbar", std::vector<int>(n, 0));
        if (!e.contains("coeff")) throw FormatError("profile: term without \"coeff\"");
        const auto& c = e["coeff"];
        if (c.is_number()) {
          t.coeff = Complex(c.get<double>(), 0.0);
        } else if (c.is_array() && c.size() == 2) {
          t.coeff = Complex(c[0].get<double>(), c[1].get<double>());
        } else {
          throw FormatError("profile: \"coeff\" must be a number or [re, im]");
        }
        terms.push_back(std::move(t));
      }
    }
    return polynomial(SpherePolynomial(n, std::move(terms)));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("profile: ") + e.what());
  } catch (const DimensionError& e) {
    throw FormatError(std::string("profile: ") + e.what());
  }
}

//---------------------------------------------------------------------------//
// Hamiltonian and Reeb fields
//---------------------------------------------------------------------------//

double HomogeneousHamiltonian::value(const Vec& z) const {
  double v = 0.0;
  value_and_gradient(z, &v, nullptr);
  return v;
}

Vec HomogeneousHamiltonian::gradient(const Vec& z) const {
  Vec g;
  value_and_gradient(z, nullptr, &g);
  return g;
}

void HomogeneousHamiltonian::value_and_gradient(const Vec& z, double* value,
                                                Vec* gradient) const {
  double f = 0.0;
  Vec gf;
  f_.value_and_gradient(z, &f, gradient ? &gf : nullptr);
  const double r2 = z.squaredNorm();
  if (value) *value = r2 / (f * f);
  if (gradient) *gradient = 2.0 * z / (f * f) - 2.0 * r2 * gf / (f * f * f);
}

Mat HomogeneousHamiltonian::hessian(const Vec& z) const {
  const int d = static_cast<int>(z.size());
  const double h = 1e-5 * (1.0 + z.norm());
  Mat Hm(d, d);
  for (int k = 0; k < d; ++k) {
    Vec zp = z, zm = z;
    zp[k] += h;
    zm[k] -= h;
    Hm.col(k) = (gradient(zp) - gradient(zm)) / (2.0 * h);
  }
  return 0.5 * (Hm + Hm.transpose());
}

double lambda0(const Vec& z, const Vec& v) {
  return 0.5 * apply_J(z).dot(v);
}

Vec reeb_field(const HomogeneousHamiltonian& H, const Vec& z) {
  double v = 0.0;
  Vec g;
  H.value_and_gradient(z, &v, &g);
  if (std::abs(v - 1.0) >= 1e-9) {
    throw PreconditionError("reeb_field: point is off the hypersurface (H - 1 = " +
                            std::to_string(v - 1.0) + ")");
  }
  return apply_J(g);
}

Vec reeb_field(const RadialProfile& f, const Vec& z) {
  return reeb_field(HomogeneousHamiltonian(f), z);
}

Vec sphere_reeb_field(const RadialProfile& f, const Vec& x) {
  double fv = 0.0;
  Vec gf;
  f.value_and_gradient(x, &fv, &gf);
  const double g = fv * fv;
  const Vec ix = apply_J(x);
  Vec grad_g = 2.0 * fv * gf;
  grad_g -= x * x.dot(grad_g) + ix * ix.dot(grad_g);
  return (2.0 / g) * ix - apply_J(grad_g) / (g * g);
}

Vec radial_map(const RadialProfile& f, const Vec& x) { return f.value(x) * x; }

Vec radial_unmap(const Vec& w) {
  const double r = w.norm();
  if (r == 0.0) throw PreconditionError("radial_unmap at the origin");
  return w / r;
}

double round_to_contact_measure(int n) {
  double fact = 1.0;
  for (int k = 2; k < n; ++k) fact *= k;
  return 2.0 / fact;
}

double contact_volume(const RadialProfile& f, const HopfGrid& grid) {
  if (grid.n() != f.n()) throw DimensionError("contact_volume: grid and profile differ in n");
  const int N = grid.fiber_samples();
  const int two_n = 2 * f.n();
  double total = 0.0;
  for (int b = 0; b < grid.base_size(); ++b) {
    double s = 0.0;
    for (int j = 0; j < N; ++j) s += std::pow(f.value(grid.point(b, j)), two_n);
    total += grid.weight(b) * s;
  }
  return total * kPi / N;
}

ScalarField pullback_to_sphere(const RadialProfile& f, GridPtr grid) {
  if (grid->n() != f.n()) throw DimensionError("pullback: grid and profile differ in n");
  return ScalarField::sample(std::move(grid), [&](const Vec& x) {
    const double v = f.value(x);
    return v * v;
  });
}

EllipsoidOracle ellipsoid_oracle(const std::vector<double>& radii) {
  if (radii.empty()) throw PreconditionError("ellipsoid_oracle: no radii");
  const int n = static_cast<int>(radii.size());
  EllipsoidOracle o;
  double min_r2 = std::numeric_limits<double>::infinity();
  double prod = 1.0;
  for (double r : radii) {
    if (!(r > 0.0)) throw PreconditionError("ellipsoid_oracle: radii must be positive");
    min_r2 = std::min(min_r2, r * r);
    prod *= r * r;
  }
  o.t_min = kPi * min_r2;
  o.volume = std::pow(kPi, n) * prod;
  o.rho = std::pow(min_r2, n) / prod;
  for (int j = 0; j < n; ++j) {
    Vec s = Vec::Zero(2 * n);
    s[2 * j] = radii[j];
    o.seeds.push_back(s);
    o.periods.push_back(kPi * radii[j] * radii[j]);
  }
  return o;
}

}  // namespace zoll
