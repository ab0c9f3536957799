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

#include "zoll/sphere.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace zoll {
namespace {

GridPtr small_grid(int n = 2, int polar = 12, int modes = 8) {
  HopfGridOptions o;
  o.n = n;
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

Vec c2(Complex a, Complex b) {
  Vec z(4);
  z << a.real(), a.imag(), b.real(), b.imag();
  return z;
}

TEST(HopfFlow, PeriodAndQuarterTurn) {
  const Vec e1 = c2(1.0, 0.0);
  EXPECT_LT((hopf_flow(e1, kPi) - e1).norm(), 1e-15);
  EXPECT_LT((hopf_flow(e1, kPi / 4) - c2(Complex(0, 1), 0.0)).norm(), 1e-15);
  std::mt19937_64 rng(1);
  const Vec z = random_unit(rng, 4);
  EXPECT_EQ(hopf_flow(z, 0.0), z);
  EXPECT_THROW(hopf_flow(2.0 * z, 1.0), PreconditionError);
}

TEST(FiberOps, SpectralCalculus) {
  const FiberOps ops(8);
  Vec f(ops.samples()), df(ops.samples());
  for (int j = 0; j < ops.samples(); ++j) {
    const double t = ops.angle(j);
    f[j] = std::sin(6.0 * t) + 0.5 * std::cos(2.0 * t);
    df[j] = 6.0 * std::cos(6.0 * t) - std::sin(2.0 * t);
  }
  EXPECT_LT((ops.derivative() * f - df).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((ops.primitive() * df - f).cwiseAbs().maxCoeff(), 1e-12);
  // Interpolation off the nodes.
  const double t = 0.123;
  EXPECT_NEAR(ops.interpolation_weights(t).dot(f), std::sin(6.0 * t) + 0.5 * std::cos(2.0 * t), 1e-12);
}

TEST(FiberAverage, ScalarExamples) {
  const GridPtr grid = small_grid();
  auto avg_err = [&](const std::function<double(const Vec&)>& F, double expect_zero) {
    const ScalarField s = ScalarField::sample(grid, F);
    const ScalarField a = fiber_average_scalar(s);
    return expect_zero ? max_abs(a) : (a.values() - s.values()).cwiseAbs().maxCoeff();
  };
  EXPECT_LT(avg_err([](const Vec& z) { return z[0] * z[0] + z[1] * z[1]; }, false), 1e-14);
  // Re(z1 conj z2) = x1 x2 + y1 y2 is invariant.
  EXPECT_LT(avg_err([](const Vec& z) { return z[0] * z[2] + z[1] * z[3]; }, false), 1e-14);
  // Re(z1^2) averages to zero.
  EXPECT_LT(avg_err([](const Vec& z) { return z[0] * z[0] - z[1] * z[1]; }, true), 1e-14);
}

TEST(FiberAverage, VectorAgainstBruteForce) {
  const GridPtr grid = small_grid();
  const Vec c = (Vec(4) << 0.3, -1.0, 0.7, 0.2).finished();
  const TangentField Z = TangentField::sample(grid, [&](const Vec&) { return c; });
  const TangentField A = fiber_average_vector(Z);
  // Oracle: (1/pi) int_0^pi e^{-2it} P_tan(c)(e^{2it} x) dt by a 400-point
  // rule, at a few grid points.
  for (int b : {0, 7, grid->base_size() / 2}) {
    for (int j : {0, 3}) {
      const Vec x = grid->point(b, j);
      Vec acc = Vec::Zero(4);
      const int m = 400;
      for (int q = 0; q < m; ++q) {
        const double t = kPi * q / m;
        const Vec y = rotate(x, 2.0 * t);
        acc += rotate(Vec(c - c.dot(y) * y), -2.0 * t);
      }
      EXPECT_LT((acc / m - A.at(b, j)).norm(), 1e-12);
    }
  }
  // The Hopf field is invariant.
  const TangentField R = TangentField::sample(grid, [](const Vec& x) { return apply_J(x); });
  EXPECT_LT((fiber_average_vector(R).values() - R.values()).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT(reeb_lie_derivative(R).max_norm(), 1e-12);
}

TEST(ZeroAvgPrimitive, InvertsFiberDerivative) {
  const GridPtr grid = small_grid();
  const ScalarField g = ScalarField::sample(grid, [](const Vec& z) {
    return z[0] * z[0] * z[2] - z[1] * z[3] * z[3] + 0.3 * z[0] * z[1];
  });
  const ScalarField dg = fiber_derivative(g);
  const ScalarField p = zero_avg_primitive(dg);
  const ScalarField gbar = fiber_average_scalar(g);
  EXPECT_LT((p.values() - (g.values() - gbar.values())).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(max_abs(zero_avg_primitive(ScalarField::zeros(grid))), 1e-300);
  // d/dtheta Re(z1^2) = -2 Im(z1^2) ... checked against the flow itself.
  const ScalarField h = ScalarField::sample(grid, [](const Vec& z) { return z[0] * z[0] - z[1] * z[1]; });
  const ScalarField f = zero_avg_primitive(h);
  EXPECT_LT((fiber_derivative(f).values() - h.values()).cwiseAbs().maxCoeff(), 1e-10);
  const ScalarField one = ScalarField::sample(grid, [](const Vec&) { return 1.0; });
  EXPECT_THROW(zero_avg_primitive(one), PreconditionError);
}

TEST(Quadrature, Moments) {
  const GridPtr grid = small_grid();
  EXPECT_NEAR(grid->calibration(), 1.0, 1e-12);
  EXPECT_NEAR(quadrature(ScalarField::sample(grid, [](const Vec&) { return 1.0; })), kPi * kPi, 1e-12);
  // |z1|^2 is uniform on [0, 1] under the round measure of S^3.
  EXPECT_NEAR(quadrature(ScalarField::sample(grid, [](const Vec& z) { return z[0] * z[0] + z[1] * z[1]; })),
              kPi * kPi / 2, 1e-12);
  EXPECT_NEAR(quadrature(ScalarField::sample(grid, [](const Vec& z) {
                return std::pow(z[0] * z[0] + z[1] * z[1], 2);
              })),
              kPi * kPi / 3, 1e-12);
  EXPECT_NEAR(quadrature(ScalarField::sample(grid, [](const Vec& z) { return z[0] * z[2] * z[3]; })), 0.0, 1e-13);
}

TEST(Quadrature, MonteCarloOracle) {
  const GridPtr grid = small_grid();
  auto F = [](const Vec& z) { return std::exp(z[0] - 0.5 * z[3]) * (1.0 + z[1] * z[2]); };
  std::mt19937_64 rng(9);
  double acc = 0.0;
  const int m = 400000;
  for (int i = 0; i < m; ++i) acc += F(random_unit(rng, 4));
  const double mc = kPi * kPi * acc / m;
  EXPECT_NEAR(quadrature(ScalarField::sample(grid, F)) / mc, 1.0, 5e-3);
}

TEST(Quadrature, ThreeSphereAndFiveSphere) {
  const GridPtr g3 = small_grid(3, 8, 4);
  EXPECT_NEAR(quadrature(ScalarField::sample(g3, [](const Vec&) { return 1.0; })), std::pow(kPi, 3), 1e-10);
  // Each |z_j|^2 has mean 1/3 on S^5.
  EXPECT_NEAR(quadrature(ScalarField::sample(g3, [](const Vec& z) { return z[4] * z[4] + z[5] * z[5]; })),
              std::pow(kPi, 3) / 3, 1e-10);
}

TEST(BaseChart, PolesAndInvariance) {
  ChartPoint c = base_chart(c2(1.0, 0.0));
  EXPECT_EQ(c.chart, 0);
  EXPECT_EQ(std::abs(c.w), 0.0);
  c = base_chart(c2(0.0, 1.0));
  EXPECT_EQ(c.chart, 1);
  EXPECT_EQ(std::abs(c.w), 0.0);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0, kPi);
  for (int i = 0; i < 1000; ++i) {
    const Vec z = random_unit(rng, 4);
    const double t = u(rng);
    const ChartPoint a = base_chart(z), b = base_chart(hopf_flow(z, t));
    const auto pa = base_point(z), pb = base_point(hopf_flow(z, t));
    EXPECT_LT(std::abs(pa[0] - pb[0]) + std::abs(pa[1] - pb[1]) + std::abs(pa[2] - pb[2]), 1e-13);
    if (a.chart == b.chart) EXPECT_LT(std::abs(a.w - b.w), 1e-12);
  }
}

TEST(BaseChart, RepresentativesAndFrames) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Vec z = random_unit(rng, 4);
    const auto p = base_point(z);
    EXPECT_NEAR(p[0] * p[0] + p[1] * p[1] + p[2] * p[2], 1.0, 1e-13);
    const auto q = base_point(base_rep(p));
    EXPECT_LT(std::abs(p[0] - q[0]) + std::abs(p[1] - q[1]) + std::abs(p[2] - q[2]), 1e-12);
    const ChartPoint c = base_chart(z);
    const auto r = base_point(chart_point(c.chart, c.w));
    EXPECT_LT(std::abs(p[0] - r[0]) + std::abs(p[1] - r[1]) + std::abs(p[2] - r[2]), 1e-12);

    const auto fr = contact_frame(z);
    EXPECT_NEAR(fr[0].norm(), 1.0, 1e-14);
    EXPECT_LT((fr[1] - apply_J(fr[0])).norm(), 1e-14);
    EXPECT_NEAR(fr[0].dot(z), 0.0, 1e-14);
    EXPECT_NEAR(fr[0].dot(apply_J(z)), 0.0, 1e-14);
    for (const Vec& nb : fiber_neighbors(z, 1e-3)) EXPECT_NEAR(nb.norm(), 1.0, 1e-14);
  }
}

TEST(Fields, TangencyAndCorotation) {
  const GridPtr grid = small_grid();
  const TangentField Z = TangentField::sample(grid, [](const Vec& x) { return Vec(x + apply_J(x)); });
  EXPECT_LT(Z.tangency_residual(), 1e-14);
  TangentField W = TangentField::zeros(grid);
  for (int b = 0; b < grid->base_size(); ++b) W.set_from_corotated(b, Z.corotated(b));
  EXPECT_LT((W.values() - Z.values()).cwiseAbs().maxCoeff(), 1e-15);
  // Band-limited fields have vanishing outermost modes.
  const ScalarField s = ScalarField::sample(grid, [](const Vec& z) { return z[0] * z[2]; });
  EXPECT_LT(s.truncation_estimate(), 1e-14);
}

}  // namespace
}  // namespace zoll
