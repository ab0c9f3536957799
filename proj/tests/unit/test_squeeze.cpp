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

#include "zoll/squeeze.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "zoll/genfun.hpp"
#include "zoll/symplin.hpp"

namespace zoll {
namespace {

Mat random_matrix(int r, int c, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Mat m(r, c);
  for (int i = 0; i < r; ++i) {
    for (int j = 0; j < c; ++j) m(i, j) = g(rng);
  }
  return m;
}

Subspace2k first_lines(int n, int k) {
  Mat B = Mat::Zero(2 * n, 2 * k);
  for (int i = 0; i < 2 * k; ++i) B(i, i) = 1.0;
  return Subspace2k::from_basis(B);
}

// Oracle: in Darboux coordinates a on V and c on the symplectic
// complement, the shadow is { a : min_c |Phi^{-1}(B a + C c)| <= 1 }, an
// ellipsoid whose form is the Schur complement of the Gram matrix of
// Phi^{-1} [B C]. Its omega0^k volume is k! * (pi^k / k!) / sqrt(det).
double shadow_oracle(const LinearSymplectomorphism& Phi, const Subspace2k& V) {
  const int k = V.k();
  const Mat B = symplectic_basis(V);
  const Mat C = symplectic_complement(V);
  Mat M(B.rows(), B.cols() + C.cols());
  M << B, C;
  const Mat A = Phi.inverse() * M;
  const Mat G = A.transpose() * A;
  const int m = 2 * k;
  const Mat Gaa = G.topLeftCorner(m, m), Gac = G.topRightCorner(m, G.cols() - m);
  const Mat Gcc = G.bottomRightCorner(G.cols() - m, G.cols() - m);
  const Mat Q = Gaa - Gac * Gcc.inverse() * Gac.transpose();
  return std::pow(kPi, k) / std::sqrt(Q.determinant());
}

TEST(ShadowExact, IdentityOnComplexLine) {
  const auto id = LinearSymplectomorphism::checked(Mat::Identity(4, 4));
  EXPECT_NEAR(shadow_volume_exact(id, first_lines(2, 1)), kPi, 1e-14);
}

TEST(ShadowExact, DiagonalStretch) {
  Mat D = Mat::Zero(4, 4);
  D.diagonal() << 2.0, 0.5, 0.5, 2.0;
  const auto Phi = LinearSymplectomorphism::checked(D);
  const Subspace2k V = first_lines(2, 1);
  EXPECT_NEAR(shadow_volume_exact(Phi, V), kPi, 1e-13);
  EXPECT_NEAR(shadow_oracle(Phi, V), kPi, 1e-12);
  const ShadowReport r = shadow_volume_mc(Phi, V, 1000000, 3);
  EXPECT_LT(std::abs(r.mc_volume - kPi), 3.0 * r.mc_stderr);
}

TEST(ShadowExact, MatchesSchurOracleAndWirtingerBound) {
  for (int t = 0; t < 50; ++t) {
    const int n = 2 + t % 2;
    const int k = (n == 3 && t % 4 == 1) ? 2 : 1;
    const auto Phi = random_symplectic(n, 0.6, 1000 + t);
    const Subspace2k V = Subspace2k::from_basis(random_matrix(2 * n, 2 * k, 2000 + t));
    const double exact = shadow_volume_exact(Phi, V);
    EXPECT_GE(exact, std::pow(kPi, k) - 1e-9);
    EXPECT_NEAR(exact / shadow_oracle(Phi, V), 1.0, 1e-9) << t;
  }
}

TEST(ShadowExact, LagrangianPreimageIsUnbounded) {
  const auto id = LinearSymplectomorphism::checked(Mat::Identity(4, 4));
  Mat B = Mat::Zero(4, 2);
  B(0, 0) = 1.0;
  B(2, 1) = 1.0;
  EXPECT_THROW(shadow_volume_exact(id, Subspace2k::from_basis(B)), DegenerateSubspaceError);
}

TEST(ShadowMc, DiscAndDeterminism) {
  const auto id = LinearSymplectomorphism::checked(Mat::Identity(4, 4));
  const ShadowReport a = shadow_volume_mc(id, first_lines(2, 1), 1000000, 9);
  EXPECT_LT(std::abs(a.mc_volume - kPi), 3.0 * a.mc_stderr);
  const ShadowReport b = shadow_volume_mc(id, first_lines(2, 1), 1000000, 9);
  EXPECT_EQ(a.mc_volume, b.mc_volume);
  EXPECT_THROW(shadow_volume_mc(id, first_lines(2, 1), 100, 9), PreconditionError);
}

TEST(ShadowMc, AgreesWithExactOnRandomPairs) {
  for (int t = 0; t < 6; ++t) {
    const int n = 2 + t % 2;
    const int k = (n == 3 && t % 3 == 1) ? 2 : 1;
    const auto Phi = random_symplectic(n, 0.5, 50 + t);
    const Subspace2k V = Subspace2k::from_basis(random_matrix(2 * n, 2 * k, 60 + t));
    const ShadowReport r = shadow_volume_mc(Phi, V, 400000, 70 + t);
    const double gap = std::abs(r.mc_volume - r.exact_volume);
    EXPECT_LT(gap, std::max(4.0 * r.mc_stderr, 0.015 * r.exact_volume)) << t;
  }
}

TEST(ShadowNonlinear, IdentityAndLinear) {
  const NonlinearSymplectomorphism id =
      NonlinearSymplectomorphism::from_linear(LinearSymplectomorphism::checked(Mat::Identity(4, 4)));
  const ShadowReport r = shadow_volume_nonlinear_mc(id, first_lines(2, 1), 200000, 4);
  EXPECT_NEAR(r.mc_volume / kPi, 1.0, 0.03);

  const auto Phi = random_symplectic(2, 0.4, 8);
  const Subspace2k V = Subspace2k::from_basis(random_matrix(4, 2, 12));
  const ShadowReport lin =
      shadow_volume_nonlinear_mc(NonlinearSymplectomorphism::from_linear(Phi), V, 200000, 5);
  EXPECT_NEAR(lin.mc_volume / shadow_volume_exact(Phi, V), 1.0, 0.03);
}

TEST(ShadowNonlinear, GeneratingFunctionMapStaysAbovePi) {
  // S = 0.05 sin(x1) |z2|^2 exp(-|z|^2 / 4).
  auto value = [](const Vec& z) {
    return 0.05 * std::sin(z[0]) * (z[2] * z[2] + z[3] * z[3]) * std::exp(-0.25 * z.squaredNorm());
  };
  auto grad = [value](const Vec& z) {
    const double e = std::exp(-0.25 * z.squaredNorm());
    const double q = z[2] * z[2] + z[3] * z[3];
    Vec g(4);
    g[0] = 0.05 * std::cos(z[0]) * q * e;
    g[1] = 0.0;
    g[2] = 0.05 * std::sin(z[0]) * 2.0 * z[2] * e;
    g[3] = 0.05 * std::sin(z[0]) * 2.0 * z[3] * e;
    return Vec(g - 0.5 * value(z) * z);
  };
  const NonlinearSymplectomorphism phi = phi_from_genfun(ScalarField2n(2, value, grad));
  const ShadowReport r = shadow_volume_nonlinear_mc(phi, first_lines(2, 1), 200000, 6);
  EXPECT_GE(r.mc_volume, kPi * (1.0 - 0.03));
}

TEST(EqualityCase, IdentityUnitaryAndConstructed) {
  const auto id = LinearSymplectomorphism::checked(Mat::Identity(4, 4));
  EqualityReport r = equality_case_check(id, first_lines(2, 1));
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.forward_error, 0.0);

  const auto U = LinearSymplectomorphism::checked(random_unitary(2, 3));
  r = equality_case_check(U, first_lines(2, 1), 1000, 2, 1e-10);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(std::max(r.forward_error, r.reverse_error), 1e-10);

  const auto Phi = random_symplectic(3, 0.5, 21);
  const Subspace2k V = transform(Phi.matrix(), first_lines(3, 2));
  r = equality_case_check(Phi, V);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(std::max(r.forward_error, r.reverse_error), 1e-8);
  EXPECT_LT(std::abs(r.exact_minus_pik), 1e-8);
}

TEST(EqualityCase, RejectsNonComplexPreimage) {
  const auto Phi = random_symplectic(2, 0.5, 22);
  EXPECT_THROW(equality_case_check(Phi, first_lines(2, 1)), PreconditionError);
}

}  // namespace
}  // namespace zoll
