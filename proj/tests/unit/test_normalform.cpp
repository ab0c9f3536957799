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

#include "zoll/normalform.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace zoll {
namespace {

GridPtr grid(int polar = 16, int modes = 16) {
  HopfGridOptions o;
  o.polar_nodes = polar;
  o.fiber_modes = modes;
  return HopfGrid::make(o);
}

double z1_sq(const Vec& x) { return x[0] * x[0] + x[1] * x[1]; }

// Tangential part of an ambient covector at x.
Vec tangent(const Vec& x, const Vec& c) { return c - c.dot(x) * x; }

TEST(SplitForm, StandardFormSplitsTrivially) {
  const SplitForm s =
      split_form(FunctionOneForm::scaled_contact(2, [](const Vec&) { return 1.0; }), grid(8, 8));
  EXPECT_LT((s.S.values().array() - 1.0).abs().maxCoeff(), 1e-13);
  EXPECT_LT(s.eta.max_norm(), 1e-10);
  EXPECT_LT(max_abs(s.f), 1e-13);
  EXPECT_LT(s.reconstruction, 1e-12);
}

TEST(SplitForm, InvariantMultipleKeepsItsFactor) {
  auto g = [](const Vec& x) { return 1.0 + 0.3 * z1_sq(x); };
  const GridPtr G = grid(8, 8);
  const SplitForm s = split_form(FunctionOneForm::scaled_contact(2, g), G);
  const ScalarField expect = ScalarField::sample(G, g);
  EXPECT_LT((s.S.values() - expect.values()).cwiseAbs().maxCoeff(), 1e-13);
  EXPECT_LT(s.eta.max_norm(), 1e-10);
  EXPECT_LT(max_abs(s.f), 1e-13);
}

TEST(SplitForm, ExactTermGoesToF) {
  // h = Re z1^2 has fiber mean zero, so alpha0 + dh splits as (1, 0, h).
  auto h = [](const Vec& x) { return x[0] * x[0] - x[1] * x[1]; };
  const FunctionOneForm beta(2, [&](const Vec& x) {
    Vec dh = Vec::Zero(4);
    dh[0] = 2.0 * x[0];
    dh[1] = -2.0 * x[1];
    return Vec(tangent(x, 0.5 * apply_J(x)) + tangent(x, dh));
  });
  const GridPtr G = grid(8, 8);
  const SplitForm s = split_form(beta, G);
  const ScalarField expect = ScalarField::sample(G, h);
  EXPECT_LT((s.S.values().array() - 1.0).abs().maxCoeff(), 1e-12);
  EXPECT_LT((s.f.values() - expect.values()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(s.eta.max_norm(), 1e-7);
  EXPECT_LT(s.eta_reeb, 1e-12);
  EXPECT_LT(s.f_mean, 1e-13);
  EXPECT_LT(s.s_invariance, 1e-13);
}

TEST(BaseFunction, InterpolatesAndFindsCriticalFibers) {
  const GridPtr G = grid(12, 4);
  const BaseFunction shat = BaseFunction::from_field(ScalarField::sample(G, z1_sq));
  std::mt19937_64 rng(1);
  std::normal_distribution<double> nd;
  for (int t = 0; t < 20; ++t) {
    Vec z(4);
    for (int i = 0; i < 4; ++i) z[i] = nd(rng);
    z.normalize();
    EXPECT_NEAR(shat.value_at(z), z1_sq(z), 1e-12);
  }
  EXPECT_NEAR(shat.sup(), 1.0, 1e-2);
  EXPECT_NEAR(shat.inf(), 0.0, 1e-2);
  EXPECT_LT(shat.lift_residual(), 1e-12);
  EXPECT_LT(shat.chart_overlap_residual(50, 2), 1e-12);

  const CriticalReport r = critical_fibers(shat);
  EXPECT_FALSE(r.degenerate);
  ASSERT_EQ(r.points.size(), 2u);
  std::vector<double> values{r.points[0].value, r.points[1].value};
  std::sort(values.begin(), values.end());
  EXPECT_NEAR(values[0], 0.0, 1e-10);
  EXPECT_NEAR(values[1], 1.0, 1e-10);
  for (const CriticalFiber& c : r.points) {
    EXPECT_EQ(c.index, c.value > 0.5 ? 2 : 0);
    EXPECT_NEAR(z1_sq(c.rep), c.value, 1e-8);
  }
}

TEST(BaseFunction, ConstantIsDegenerate) {
  const BaseFunction shat =
      BaseFunction::from_field(ScalarField::sample(grid(8, 4), [](const Vec&) { return 2.0; }));
  const CriticalReport r = critical_fibers(shat);
  EXPECT_TRUE(r.degenerate);
  EXPECT_TRUE(r.points.empty());
}

TEST(NormalForm, RoundSphere) {
  const NormalFormResult nf = normal_form(RadialProfile::round(2), grid(8, 8));
  EXPECT_LT(nf.s_deviation, 1e-12);
  EXPECT_LT(nf.eta_norm, 1e-9);
  EXPECT_LT(nf.f_norm, 1e-12);
  ASSERT_TRUE(nf.bottkol.has_value());
  EXPECT_TRUE(nf.bottkol->converged);
}

TEST(NormalForm, RejectsOtherDimensions) {
  EXPECT_THROW(normal_form(RadialProfile::round(3), grid(8, 8)), DimensionError);
}

TEST(VariationalPrinciple, InvariantProfileIsExact) {
  const RadialProfile f = RadialProfile::random(2, 4, 0.02, 3, true);
  const GridPtr G = grid();
  const NormalFormResult nf = normal_form(f, G);
  const CriticalReport crit = critical_fibers(BaseFunction::from_field(nf.split.S));
  ASSERT_FALSE(crit.degenerate);
  const VariationalReport rep = verify_variational_principle(f, nf.u, crit);
  EXPECT_GE(rep.converged, 2);
  for (const VariationalEntry& e : rep.entries) {
    EXPECT_TRUE(e.converged) << e.message;
    EXPECT_LT(e.error, 1e-6);
    EXPECT_LT(e.fiber_distance, 1e-6);
  }
}

TEST(VariationalPrinciple, FirstOrderErrorIsQuadratic) {
  const double eps = 0.02;
  const RadialProfile f = RadialProfile::random(2, 4, eps, 1);
  NormalFormOptions o;
  o.first_order = true;
  const NormalFormResult nf = normal_form(f, grid(), o);
  EXPECT_EQ(nf.u, nullptr);
  const CriticalReport crit = critical_fibers(BaseFunction::from_field(nf.split.S));
  const VariationalReport rep = verify_variational_principle(f, nf.u, crit);
  EXPECT_GE(rep.converged, 2);
  for (const VariationalEntry& e : rep.entries) {
    EXPECT_TRUE(e.converged) << e.message;
    EXPECT_LT(e.error, 10.0 * eps * eps);
  }
}

TEST(CriticalSeeds, PeriodGuessesFollowFiberMeans) {
  const RadialProfile f = RadialProfile::random(2, 4, 0.03, 4);
  CriticalReport report;
  const auto seeds = critical_fiber_seeds(f, grid(), &report);
  ASSERT_EQ(seeds.size(), report.points.size());
  ASSERT_GE(seeds.size(), 2u);
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    EXPECT_NEAR(seeds[i].period_guess, kPi * report.points[i].value, 1e-12);
    EXPECT_LT((seeds[i].point - radial_map(f, report.points[i].rep)).norm(), 1e-15);
  }
}

}  // namespace
}  // namespace zoll
