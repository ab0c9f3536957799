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

// Linear symplectic algebra on R^{2n} with the standard form
// omega0 = sum dx_j ^ dy_j and complex structure J (multiplication by i).

#ifndef ZOLL_SYMPLIN_HPP_
#define ZOLL_SYMPLIN_HPP_

#include <cstdint>

#include "zoll/types.hpp"

namespace zoll {

// A 2k-dimensional linear subspace of R^{2n}, stored by a spanning basis
// together with an orthonormalized copy of the same span.
class Subspace2k {
 public:
  // Columns of `basis` span the subspace. Throws DegenerateBasisError when
  // the smallest Gram eigenvalue is below 1e-12 times the largest.
  static Subspace2k from_basis(const Mat& basis);

  int n() const { return n_; }
  int k() const { return k_; }
  const Mat& basis() const { return basis_; }
  const Mat& orthonormal() const { return orthonormal_; }

  // Euclidean orthogonal projector onto the subspace.
  Mat orthogonal_projector() const;

 private:
  Subspace2k() = default;

  int n_ = 0;
  int k_ = 0;
  Mat basis_;
  Mat orthonormal_;
};

class LinearSymplectomorphism {
 public:
  // Throws PreconditionError unless |M^T J M - J|_max <= tol.
  static LinearSymplectomorphism checked(const Mat& M, double tol = 1e-10);

  int n() const { return static_cast<int>(matrix_.rows() / 2); }
  const Mat& matrix() const { return matrix_; }

  // Exact inverse -J M^T J of a symplectic matrix.
  Mat inverse() const;

  // max |M^T J M - J|.
  double symplectic_residual() const;

 private:
  explicit LinearSymplectomorphism(Mat m) : matrix_(std::move(m)) {}

  Mat matrix_;
};

// omega0(u, v) = sum (u_x v_y - u_y v_x).
double omega0(const Vec& u, const Vec& v);

// Gram matrix of omega0 on the columns of `vectors`.
Mat omega0_gram(const Mat& vectors);

// omega0^k evaluated on 2k vectors by summing over all permutations.
double omega0_power(const Mat& vectors);

// Euclidean 2k-volume |v1 ^ ... ^ v2k| = sqrt(det Gram).
double wedge_norm(const Mat& vectors);

// Wirtinger function |omega0^k[v]| / (k! |v1 ^ ... ^ v2k|).
double wirtinger(const Subspace2k& V);

// Projector onto V along its symplectic orthogonal. Throws
// DegenerateSubspaceError when V is not symplectic.
Mat symplectic_projector(const Subspace2k& V);

// Columns (e1, f1, ..., ek, fk) spanning V with omega0(e_i, f_j) = delta_ij
// and all other pairings zero. Throws DegenerateSubspaceError.
Mat symplectic_basis(const Subspace2k& V);

// Orthonormal basis of the symplectic orthogonal of V (2n - 2k columns).
Mat symplectic_complement(const Subspace2k& V);

// exp(J S) with S symmetric, entries uniform in [-spread, spread].
LinearSymplectomorphism random_symplectic(int n, double spread,
                                          std::uint64_t seed);

// Real form of a random unitary exp(K), K anti-Hermitian with entries of
// size up to `spread`.
Mat random_unitary(int n, std::uint64_t seed, double spread = 3.0);

// Operator norm of (I - Pi) J Pi, Pi the orthogonal projector onto V.
double complex_subspace_distance(const Subspace2k& V);

// Image of a subspace under a linear map.
Subspace2k transform(const Mat& M, const Subspace2k& V);

}  // namespace zoll

#endif  // ZOLL_SYMPLIN_HPP_
