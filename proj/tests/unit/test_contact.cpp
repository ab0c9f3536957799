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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace zoll {
namespace {

GridPtr grid(int polar = 16, int modes = 8) {
  HopfGridOptions o;
  o.polar_nodes = polar;
  o.fiber_modes = modes;
  return HopfGrid::make(o);
}

Vec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Vec z(dim);
  for (int i = 0; i < dim; ++i) z[i] = g(rng);
  return z / z.norm();
}

// Oracle: n! times the Lebesgue volume of A_f by hit-or-miss in the box
// [-max f, max f]^4.
double mc_volume(const RadialProfile& f, int samples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const double R = 1.05 * f.max_bound();
  std::uniform_real_distribution<double> u(-R, R);
  long hits = 0;
  for (int i = 0; i < samples; ++i) {
    Vec z(4);
    for (int k = 0; k < 4; ++k) z[k] = u(rng);
    const double r = z.norm();
    if (r > 0.0 && r < f.value(z)) ++hits;
  }
  return 2.0 * std::pow(2.0 * R, 4) * double(hits) / samples;
}

TEST(SpherePolynomial, GradientAndCharge) {
  const SpherePolynomial p = SpherePolynomial::random(2, 3, 5);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const Vec z = random_unit(rng, 4);
    const Vec g = p.gradient(z);
    for (int k = 0; k < 4; ++k) {
      Vec a = z, b = z;
      a[k] += 1e-6;
      b[k] -= 1e-6;
      EXPECT_NEAR(g[k], (p.value(a) - p.value(b)) / 2e-6, 1e-7);
    }
  }
  const SpherePolynomial inv = SpherePolynomial::random(2, 4, 6, true);
  for (const auto& t : inv.terms()) EXPECT_EQ(t.charge(), 0);
  // Invariant polynomials are constant along Hopf fibers.
  const Vec z = random_unit(rng, 4);
  EXPECT_NEAR(inv.value(z), inv.value(hopf_flow(z, 0.7)), 1e-14);
}

TEST(RadialProfile, JsonRoundTripAndHomogeneity) {
  const RadialProfile f = RadialProfile::random(2, 3, 0.05, 9);
  const RadialProfile g = RadialProfile::from_json(f.to_json());
  std::mt19937_64 rng(2);
  for (int t = 0; t < 10; ++t) {
    const Vec z = random_unit(rng, 4);
    EXPECT_EQ(f.value(z), g.value(z));
    EXPECT_NEAR(f.value(3.0 * z), f.value(z), 1e-15);
  }
  EXPECT_LE(f.max_bound() - 1.0, 0.05 + 1e-12);
  EXPECT_LE(1.0 - f.min_bound(), 0.05 + 1e-12);
  const RadialProfile e = RadialProfile::from_json(R"({"n": 2, "ellipsoid": [1, 1.2]})");
  EXPECT_EQ(e.kind(), RadialProfile::Kind::kEllipsoid);
  EXPECT_THROW(RadialProfile::from_json("{\"n\": 2, \"terms\": 3}"), FormatError);
  EXPECT_THROW(RadialProfile::from_json("[1, 2"), FormatError);
  EXPECT_THROW(RadialProfile::ellipsoid({1.0, -1.0}), PreconditionError);
}

TEST(ReebField, RoundSphereIsHopf) {
  const RadialProfile f = RadialProfile::round(2);
  std::mt19937_64 rng(3);
  for (int t = 0; t < 20; ++t) {
    const Vec z = random_unit(rng, 4);
    EXPECT_LT((reeb_field(f, z) - 2.0 * apply_J(z)).norm(), 1e-14);
    EXPECT_LT((sphere_reeb_field(f, z) - 2.0 * apply_J(z)).norm(), 1e-14);
  }
  EXPECT_THROW(reeb_field(f, Vec(1.1 * random_unit(rng, 4))), PreconditionError);
}

TEST(ReebField, NormalizedAndRadiallyRelated) {
  const RadialProfile f = RadialProfile::random(2, 4, 0.1, 4);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 1000; ++t) {
    const Vec x = random_unit(rng, 4);
    const Vec w = radial_map(f, x);
    const Vec R = reeb_field(f, w);
    EXPECT_NEAR(lambda0(w, R), 1.0, 1e-12);
    if (t % 50 == 0) {
      // d rho_x (X) = R(rho(x)) with rho(x) = f(x) x.
      double fx;
      Vec gf;
      f.value_and_gradient(x, &fx, &gf);
      const Vec X = sphere_reeb_field(f, x);
      EXPECT_LT((fx * X + gf.dot(X) * x - R).norm(), 1e-12);
      EXPECT_LT((radial_unmap(w) - x).norm(), 1e-15);
    }
  }
}

TEST(ReebField, EllipsoidAxisIsLinear) {
  // H = |z1|^2 / r1^2 + |z2|^2 / r2^2 gives z_j -> e^{2it/r_j^2} z_j.
  const RadialProfile f = RadialProfile::ellipsoid({1.0, 1.2});
  Vec z = Vec::Zero(4);
  z[2] = 1.2;
  const Vec R = reeb_field(f, z);
  EXPECT_LT((R - 2.0 / 1.44 * apply_J(z)).norm(), 1e-13);
  const HomogeneousHamiltonian H(f);
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    const Vec y = random_unit(rng, 4);
    const double h = (y[0] * y[0] + y[1] * y[1]) + (y[2] * y[2] + y[3] * y[3]) / 1.44;
    EXPECT_NEAR(H.value(y), h, 1e-13);
    const Mat He = H.hessian(y);
    EXPECT_LT((He - He.transpose()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ContactVolume, RoundAndEllipsoid) {
  const GridPtr g = grid();
  EXPECT_NEAR(contact_volume(RadialProfile::round(2), *g), kPi * kPi, 1e-12);
  EXPECT_NEAR(contact_volume(RadialProfile::ellipsoid({1.0, 1.2}), *g) / (1.44 * kPi * kPi), 1.0, 1e-10);
  EXPECT_NEAR(mc_volume(RadialProfile::ellipsoid({1.0, 1.2}), 1000000, 7) / (1.44 * kPi * kPi), 1.0, 0.01);
}

TEST(ContactVolume, RandomProfileAgainstMonteCarlo) {
  const RadialProfile f = RadialProfile::random(2, 3, 0.1, 12);
  const double v = contact_volume(f, *grid(24, 12));
  EXPECT_NEAR(v / mc_volume(f, 1000000, 8), 1.0, 0.01);
}

TEST(ContactVolume, FirstOrderVariation) {
  // d/de vol(1 + e g) at e = 0 is 4 * integral of g.
  const GridPtr g = grid();
  const SpherePolynomial p = SpherePolynomial::random(2, 2, 21);
  const double mean = quadrature(ScalarField::sample(g, [&](const Vec& z) { return p.value(z); }));
  for (double eps : {1e-3, 1e-4}) {
    const double v = contact_volume(RadialProfile::polynomial(p.scaled(eps)), *g);
    EXPECT_NEAR((v - kPi * kPi) / eps, 4.0 * mean, 50.0 * eps * (1.0 + std::abs(mean)));
  }
}

TEST(Pullback, CoefficientIsFSquared) {
  const GridPtr g = grid();
  EXPECT_LT((pullback_to_sphere(RadialProfile::round(2), g).values().array() - 1.0).abs().maxCoeff(), 1e-15);
  const RadialProfile f = RadialProfile::random(2, 3, 0.05, 3);
  const ScalarField c = pullback_to_sphere(f, g);
  for (int b = 0; b < g->base_size(); b += 37) {
    for (int j = 0; j < g->fiber_samples(); j += 5) {
      EXPECT_NEAR(std::sqrt(c.at(b, j)), f.value(g->point(b, j)), 1e-14);
    }
  }
}

TEST(EllipsoidOracle, ClosedForms) {
  EllipsoidOracle o = ellipsoid_oracle({1.0, 1.0});
  EXPECT_NEAR(o.t_min, kPi, 1e-15);
  EXPECT_NEAR(o.volume, kPi * kPi, 1e-14);
  EXPECT_NEAR(o.rho, 1.0, 1e-15);
  o = ellipsoid_oracle({1.0, 1.2});
  EXPECT_NEAR(o.t_min, kPi, 1e-15);
  EXPECT_NEAR(o.volume, 1.44 * kPi * kPi, 1e-13);
  EXPECT_NEAR(o.rho, 1.0 / 1.44, 1e-15);
  ASSERT_EQ(o.periods.size(), 2u);
  EXPECT_NEAR(o.periods[1], 1.44 * kPi, 1e-14);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (int t = 0; t < 100; ++t) EXPECT_LE(ellipsoid_oracle({u(rng), u(rng), u(rng)}).rho, 1.0 + 1e-15);
}

}  // namespace
}  // namespace zoll
