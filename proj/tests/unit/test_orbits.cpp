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

#include "zoll/orbits.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace zoll {
namespace {

Vec random_unit(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g;
  Vec z(dim);
  for (int i = 0; i < dim; ++i) z[i] = g(rng);
  return z / z.norm();
}

GridPtr grid() {
  HopfGridOptions o;
  o.polar_nodes = 16;
  o.fiber_modes = 8;
  return HopfGrid::make(o);
}

// Linear flow oracle on the ellipsoid: z_j(t) = e^{2it/r_j^2} z_j(0).
Vec ellipsoid_flow(const Vec& z, const std::vector<double>& r, double t) {
  Vec out(z.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    const double a = 2.0 * t / (r[j] * r[j]);
    out[2 * j] = std::cos(a) * z[2 * j] - std::sin(a) * z[2 * j + 1];
    out[2 * j + 1] = std::sin(a) * z[2 * j] + std::cos(a) * z[2 * j + 1];
  }
  return out;
}

TEST(Integrate, RoundSphereHasPeriodPi) {
  const RadialProfile f = RadialProfile::round(2);
  std::mt19937_64 rng(1);
  for (int t = 0; t < 5; ++t) {
    const Vec z = random_unit(rng, 4);
    const Trajectory tr = integrate_reeb(f, z, kPi);
    EXPECT_LT((tr.end - z).norm(), 1e-9);
    EXPECT_LT(tr.max_energy_drift, 1e-12);
  }
}

TEST(Integrate, EllipsoidMatchesLinearFlow) {
  const std::vector<double> r{1.0, 1.2};
  const RadialProfile f = RadialProfile::ellipsoid(r);
  Vec axis = Vec::Zero(4);
  axis[0] = 1.0;
  EXPECT_LT((reeb_flow(f, axis, kPi) - axis).norm(), 1e-9);
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) {
    const Vec z = radial_map(f, random_unit(rng, 4));
    EXPECT_LT((reeb_flow(f, z, 2.3) - ellipsoid_flow(z, r, 2.3)).norm(), 1e-9);
  }
}

TEST(Integrate, TimeReversal) {
  const RadialProfile f = RadialProfile::random(2, 4, 0.05, 3);
  std::mt19937_64 rng(3);
  const Vec z = radial_map(f, random_unit(rng, 4));
  const Vec w = reeb_flow(f, z, 2.0);
  EXPECT_LT((reeb_flow(f, w, -2.0) - z).norm(), 1e-8);
  EXPECT_THROW(reeb_flow(f, Vec(1.5 * z), 1.0), PreconditionError);
}

TEST(Shooting, RoundSphereFromPerturbedGuess) {
  const RadialProfile f = RadialProfile::round(2);
  std::mt19937_64 rng(4);
  Vec z = random_unit(rng, 4);
  z += 0.01 * random_unit(rng, 4);
  const OrbitResult o = find_closed_orbit(f, z, 1.01 * kPi);
  ASSERT_TRUE(o.converged) << o.message;
  EXPECT_NEAR(o.period, kPi, 1e-8);
}

TEST(Shooting, EllipsoidShortCircle) {
  const RadialProfile f = RadialProfile::ellipsoid({1.0, 1.2});
  Vec z = Vec::Zero(4);
  z << 0.98, 0.05, 0.04, -0.03;
  const OrbitResult o = find_closed_orbit(f, z, 3.0);
  ASSERT_TRUE(o.converged) << o.message;
  EXPECT_NEAR(o.period, kPi, 1e-8);
  EXPECT_LT(std::hypot(o.seed[2], o.seed[3]), 1e-6);
}

TEST(Spectrum, RoundSphereIsFlaggedZoll) {
  const RadialProfile f = RadialProfile::round(2);
  SpectrumOptions so;
  so.base_seeds = 16;
  const SpectrumWindow w = scan_short_spectrum(f, 0.5, {}, so);
  EXPECT_TRUE(w.zoll_degenerate);
  for (const auto& o : w.orbits) EXPECT_NEAR(o.period, kPi, 1e-8);
  const SystolicEstimate s = systolic_ratio(f, w, *grid());
  EXPECT_NEAR(s.rho, 1.0, 2e-3);
  EXPECT_NEAR(t_max_short(scan_up_to(f, 4.0, {}, so)), kPi, 1e-8);
}

TEST(Spectrum, EllipsoidHasTwoCircles) {
  const RadialProfile f = RadialProfile::ellipsoid({1.0, 1.2});
  const EllipsoidOracle oracle = ellipsoid_oracle({1.0, 1.2});
  SpectrumOptions so;
  so.base_seeds = 16;
  const SpectrumWindow w = scan_short_spectrum(f, 1.5, {}, so);
  ASSERT_EQ(w.orbits.size(), 2u);
  EXPECT_FALSE(w.zoll_degenerate);
  EXPECT_NEAR(w.orbits[0].period, oracle.periods[0], 1e-8);
  EXPECT_NEAR(w.orbits[1].period, oracle.periods[1], 1e-8);
  EXPECT_NEAR(t_max_short(w), 1.44 * kPi, 1e-8);
  const SystolicEstimate s = systolic_ratio(f, w, *grid());
  EXPECT_NEAR(s.rho, oracle.rho, 2e-3);
  EXPECT_NEAR(s.volume / oracle.volume, 1.0, 1e-3);
}

TEST(Spectrum, GenericPerturbationHasTwoOrbits) {
  const RadialProfile f = RadialProfile::random(2, 4, 0.02, 5);
  SpectrumOptions so;
  so.base_seeds = 32;
  const SpectrumWindow w = scan_short_spectrum(f, 0.5, {}, so);
  EXPECT_GE(w.orbits.size(), 2u);
  EXPECT_FALSE(w.zoll_degenerate);
  const SystolicEstimate s = systolic_ratio(f, w, *grid());
  EXPECT_LE(s.rho, 1.0 + 1e-3);
}

TEST(Spectrum, EmptyWindowThrows) {
  SpectrumWindow w;
  EXPECT_THROW(t_max_short(w), PreconditionError);
}

TEST(Hausdorff, SameOrbitDifferentPhase) {
  const RadialProfile f = RadialProfile::ellipsoid({1.0, 1.2});
  Vec z = Vec::Zero(4);
  z[2] = 1.2;
  const auto a = sample_orbit(f, z, 1.44 * kPi, 128);
  const auto b = sample_orbit(f, reeb_flow(f, z, 0.37), 1.44 * kPi, 128);
  EXPECT_LT(orbit_hausdorff(f, a, b), 1e-6);
  Vec y = Vec::Zero(4);
  y[0] = 1.0;
  EXPECT_GT(orbit_hausdorff(f, a, sample_orbit(f, y, kPi, 32)), 0.5);
}

}  // namespace
}  // namespace zoll
