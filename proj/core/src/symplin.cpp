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

#include "zoll/symplin.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

namespace zoll {
namespace {

constexpr double kGramTol = 1e-12;
constexpr double kSymplecticTol = 1e-10;

Mat modified_gram_schmidt(const Mat& B) {
  Mat Q = B;
  for (Eigen::Index j = 0; j < Q.cols(); ++j) {
    // Two passes: the second removes the error left by the first.
    for (int pass = 0; pass < 2; ++pass) {
      for (Eigen::Index i = 0; i < j; ++i) {
        Q.col(j) -= Q.col(i).dot(Q.col(j)) * Q.col(i);
      }
    }
    Q.col(j).normalize();
  }
  return Q;
}

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) f *= i;
  return f;
}

// Parity of a permutation by counting inversions.
int permutation_sign(const std::vector<int>& p) {
  int inversions = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      if (p[i] > p[j]) ++inversions;
    }
  }
  return (inversions % 2 == 0) ? 1 : -1;
}

}  // namespace

Subspace2k Subspace2k::from_basis(const Mat& basis) {
  if (basis.rows() % 2 != 0 || basis.cols() % 2 != 0 || basis.cols() == 0) {
    throw DimensionError("subspace basis must be 2n x 2k with k >= 1");
  }
  if (basis.cols() > basis.rows()) {
    throw DimensionError("more basis vectors than ambient dimension");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(basis.transpose() * basis);
  const double lmax = es.eigenvalues().maxCoeff();
  const double lmin = es.eigenvalues().minCoeff();
  if (!(lmax > 0.0) || lmin < kGramTol * lmax) {
    throw DegenerateBasisError("basis vectors are linearly dependent");
  }
  Subspace2k V;
  V.n_ = static_cast<int>(basis.rows() / 2);
  V.k_ = static_cast<int>(basis.cols() / 2);
  V.basis_ = basis;
  V.orthonormal_ = modified_gram_schmidt(basis);
  return V;
}

Mat Subspace2k::orthogonal_projector() const {
  return orthonormal_ * orthonormal_.transpose();
}

LinearSymplectomorphism LinearSymplectomorphism::checked(const Mat& M,
                                                         double tol) {
  if (M.rows() != M.cols() || M.rows() % 2 != 0) {
    throw DimensionError("symplectic matrix must be 2n x 2n");
  }
  LinearSymplectomorphism phi(M);
  if (phi.symplectic_residual() > tol) {
    throw PreconditionError("matrix is not symplectic");
  }
  return phi;
}

Mat LinearSymplectomorphism::inverse() const {
  const Mat J = J_matrix(n());
  return -J * matrix_.transpose() * J;
}

double LinearSymplectomorphism::symplectic_residual() const {
  const Mat J = J_matrix(n());
  return (matrix_.transpose() * J * matrix_ - J).cwiseAbs().maxCoeff();
}

double omega0(const Vec& u, const Vec& v) {
  if (u.size() != v.size()) {
    throw DimensionError("omega0: vectors of different length");
  }
  complex_dim(u);
  double s = 0.0;
  for (Eigen::Index j = 0; j < u.size(); j += 2) {
    s += u[j] * v[j + 1] - u[j + 1] * v[j];
  }
  return s;
}

Mat omega0_gram(const Mat& vectors) {
  const Eigen::Index m = vectors.cols();
  Mat W(m, m);
  for (Eigen::Index a = 0; a < m; ++a) {
    for (Eigen::Index b = 0; b < m; ++b) {
      W(a, b) = omega0(vectors.col(a), vectors.col(b));
    }
  }
  return W;
}

double omega0_power(const Mat& vectors) {
  const int m = static_cast<int>(vectors.cols());
  if (m % 2 != 0) throw DimensionError("omega0^k needs an even count");
  if (m > 10) throw DimensionError("omega0^k brute force limited to k <= 5");
  const Mat W = omega0_gram(vectors);
  std::vector<int> p(m);
  std::iota(p.begin(), p.end(), 0);
  double total = 0.0;
  do {
    double term = permutation_sign(p);
    for (int i = 0; i < m; i += 2) term *= W(p[i], p[i + 1]);
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total / std::pow(2.0, m / 2);
}

double wedge_norm(const Mat& vectors) {
  Eigen::ColPivHouseholderQR<Mat> qr(vectors);
  return std::abs(qr.matrixQR().diagonal().prod());
}

double wirtinger(const Subspace2k& V) {
  const double num = std::abs(omega0_power(V.basis()));
  return num / (factorial(V.k()) * wedge_norm(V.basis()));
}

Mat symplectic_projector(const Subspace2k& V) {
  if (wirtinger(V) < kSymplecticTol) {
    throw DegenerateSubspaceError("subspace is not symplectic");
  }
  const Mat& B = V.basis();
  const Mat J0 = -J_matrix(V.n());
  const Mat G = B.transpose() * J0 * B;
  return B * G.partialPivLu().solve(B.transpose() * J0);
}

Mat symplectic_basis(const Subspace2k& V) {
  std::vector<Vec> pool;
  for (Eigen::Index j = 0; j < V.orthonormal().cols(); ++j) {
    pool.push_back(V.orthonormal().col(j));
  }
  Mat out(2 * V.n(), 2 * V.k());
  for (int i = 0; i < V.k(); ++i) {
    std::size_t ia = 0, ib = 1;
    double best = -1.0;
    for (std::size_t a = 0; a < pool.size(); ++a) {
      for (std::size_t b = a + 1; b < pool.size(); ++b) {
        const double w = std::abs(omega0(pool[a], pool[b]));
        if (w > best) {
          best = w;
          ia = a;
          ib = b;
        }
      }
    }
    if (best < kSymplecticTol) {
      throw DegenerateSubspaceError("subspace is not symplectic");
    }
    const Vec e = pool[ia];
    const Vec f = pool[ib] / omega0(pool[ia], pool[ib]);
    out.col(2 * i) = e;
    out.col(2 * i + 1) = f;
    std::vector<Vec> rest;
    for (std::size_t c = 0; c < pool.size(); ++c) {
      if (c == ia || c == ib) continue;
      const Vec& v = pool[c];
      rest.push_back(v + omega0(v, e) * f - omega0(v, f) * e);
    }
    pool = std::move(rest);
  }
  return out;
}

Mat symplectic_complement(const Subspace2k& V) {
  const int dim = 2 * V.n();
  const int m = 2 * V.k();
  // The symplectic orthogonal of V is the Euclidean orthogonal of J V.
  const Mat JV = J_matrix(V.n()) * V.orthonormal();
  Eigen::HouseholderQR<Mat> qr(JV);
  const Mat Q = qr.householderQ() * Mat::Identity(dim, dim);
  return Q.rightCols(dim - m);
}

LinearSymplectomorphism random_symplectic(int n, double spread,
                                          std::uint64_t seed) {
  if (spread < 0.0) throw PreconditionError("spread must be non-negative");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-spread, spread);
  Mat S = Mat::Zero(2 * n, 2 * n);
  for (int i = 0; i < 2 * n; ++i) {
    for (int j = i; j < 2 * n; ++j) {
      const double s = (spread > 0.0) ? uni(rng) : 0.0;
      S(i, j) = s;
      S(j, i) = s;
    }
  }
  const Mat A = J_matrix(n) * S;
  Mat Phi = A.exp();
  return LinearSymplectomorphism::checked(Phi, 1e-10);
}

Mat random_unitary(int n, std::uint64_t seed, double spread) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  CMat A(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) A(i, j) = Complex(uni(rng), uni(rng));
  }
  const CMat K = 0.5 * spread * (A - A.adjoint());
  const CMat U = K.exp();
  return realify(U);
}

double complex_subspace_distance(const Subspace2k& V) {
  const int dim = 2 * V.n();
  const Mat Pi = V.orthogonal_projector();
  const Mat M = (Mat::Identity(dim, dim) - Pi) * J_matrix(V.n()) * Pi;
  Eigen::JacobiSVD<Mat> svd(M);
  return svd.singularValues()(0);
}

Subspace2k transform(const Mat& M, const Subspace2k& V) {
  return Subspace2k::from_basis(M * V.basis());
}

}  // namespace zoll
