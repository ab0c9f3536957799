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

#ifndef ZOLL_TYPES_HPP_
#define ZOLL_TYPES_HPP_

#include <cmath>
#include <complex>
#include <cstdio>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace zoll {

// Points of R^{2n} = C^n use the interleaved layout (x1, y1, x2, y2, ...),
// with z_j = x_j + i y_j.
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input vectors or matrices have incompatible sizes.
class DimensionError : public Error {
 public:
  using Error::Error;
};

// Spanning vectors are (numerically) linearly dependent.
class DegenerateBasisError : public Error {
 public:
  using Error::Error;
};

// A subspace failed the symplectic non-degeneracy test.
class DegenerateSubspaceError : public Error {
 public:
  using Error::Error;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An iterative solver failed to reach its tolerance.
class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Malformed serialized input (profile files, configs).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Number of complex coordinates of a real vector; throws on odd length.
// %.3e, for error messages.
inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3e", x);
  return buf;
}

inline int complex_dim(const Vec& v) {
  if (v.size() % 2 != 0) {
    throw DimensionError("vector length " + std::to_string(v.size()) +
                         " is not even");
  }
  return static_cast<int>(v.size() / 2);
}

// Multiplication by i, i.e. the standard complex structure J.
inline Vec apply_J(const Vec& v) {
  Vec out(v.size());
  for (Eigen::Index j = 0; j + 1 < v.size(); j += 2) {
    out[j] = -v[j + 1];
    out[j + 1] = v[j];
  }
  return out;
}

// Multiplication of every complex coordinate by e^{i angle}.
inline Vec rotate(const Vec& v, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  Vec out(v.size());
  for (Eigen::Index j = 0; j + 1 < v.size(); j += 2) {
    out[j] = c * v[j] - s * v[j + 1];
    out[j + 1] = s * v[j] + c * v[j + 1];
  }
  return out;
}

// Matrix of J acting on R^{2n}.
inline Mat J_matrix(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  for (int j = 0; j < n; ++j) {
    J(2 * j + 1, 2 * j) = 1.0;
    J(2 * j, 2 * j + 1) = -1.0;
  }
  return J;
}

inline CVec to_complex(const Vec& v) {
  const int n = complex_dim(v);
  CVec z(n);
  for (int j = 0; j < n; ++j) z[j] = Complex(v[2 * j], v[2 * j + 1]);
  return z;
}

inline Vec from_complex(const CVec& z) {
  Vec v(2 * z.size());
  for (Eigen::Index j = 0; j < z.size(); ++j) {
    v[2 * j] = z[j].real();
    v[2 * j + 1] = z[j].imag();
  }
  return v;
}

// Real 2n x 2n matrix of a complex-linear map C^n -> C^n.
inline Mat realify(const CMat& A) {
  const Eigen::Index n = A.rows();
  Mat R(2 * n, 2 * A.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      const Complex a = A(i, j);
      R(2 * i, 2 * j) = a.real();
      R(2 * i, 2 * j + 1) = -a.imag();
      R(2 * i + 1, 2 * j) = a.imag();
      R(2 * i + 1, 2 * j + 1) = a.real();
    }
  }
  return R;
}

}  // namespace zoll

#endif  // ZOLL_TYPES_HPP_
