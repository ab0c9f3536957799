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

// S^{2n-1} as a circle bundle over CP^{n-1}. The circle acts by
// z -> e^{2 i theta} z with theta in [0, pi); fields are sampled on a
// product of base nodes and equispaced fiber angles, so that all fiber
// operations are exact discrete Fourier operations.

#ifndef ZOLL_SPHERE_HPP_
#define ZOLL_SPHERE_HPP_

#include <array>
#include <functional>
#include <memory>
#include <vector>

#include "zoll/types.hpp"

namespace zoll {

// e^{2it} z. Throws PreconditionError when ||z| - 1| > 1e-12.
Vec hopf_flow(const Vec& z, double t);

// Spectral operators on one fiber with 2M+1 equispaced samples
// theta_j = j pi / (2M+1), resolving the modes e^{2 i m theta}, |m| <= M.
class FiberOps {
 public:
  explicit FiberOps(int modes);

  int modes() const { return modes_; }
  int samples() const { return 2 * modes_ + 1; }
  double angle(int j) const { return kPi * j / samples(); }

  // d/dtheta on samples.
  const Mat& derivative() const { return derivative_; }
  // Zero-mean antiderivative: derivative() * primitive() = I - mean.
  const Mat& primitive() const { return primitive_; }

  // Complex coefficients c_m, m = -M..M (index m + M).
  CVec coefficients(const Eigen::Ref<const Vec>& samples) const;

  // Trigonometric interpolation weights at an arbitrary angle.
  Vec interpolation_weights(double theta) const;

 private:
  int modes_;
  Mat derivative_;
  Mat primitive_;
};

struct HopfGridOptions {
  int n = 2;
  // Gauss-Legendre nodes per simplex coordinate (|z_1|^2 for n = 2).
  int polar_nodes = 32;
  // Equispaced nodes per relative phase; 0 selects 2 * polar_nodes.
  int azimuth_nodes = 0;
  // Fiber resolution M (2M+1 samples per fiber).
  int fiber_modes = 16;
};

class HopfGrid {
 public:
  explicit HopfGrid(const HopfGridOptions& options);

  static std::shared_ptr<const HopfGrid> make(const HopfGridOptions& options) {
    return std::make_shared<const HopfGrid>(options);
  }

  int n() const { return options_.n; }
  const HopfGridOptions& options() const { return options_; }
  int base_size() const { return static_cast<int>(reps_.size()); }
  int fiber_samples() const { return fiber_.samples(); }
  int fiber_modes() const { return fiber_.modes(); }
  int size() const { return base_size() * fiber_samples(); }
  const FiberOps& fiber() const { return fiber_; }

  const Vec& rep(int b) const { return reps_[b]; }
  double weight(int b) const { return weights_[b]; }
  const std::vector<double>& weights() const { return weights_; }
  Vec point(int b, int j) const { return rotate(reps_[b], 2.0 * fiber_.angle(j)); }

  // pi^n divided by the raw quadrature of 1; applied to the weights.
  double calibration() const { return calibration_; }

  // Product structure for n = 2: node b = i * azimuth + j sits at
  // u = |z1|^2 - |z2|^2 = polar_u()[i] and phase arg(conj(z1) z2) = 2 pi j / azimuth.
  int polar_count() const { return polar_count_; }
  int azimuth_count() const { return azimuth_count_; }
  const Vec& polar_u() const { return polar_u_; }
  const Vec& polar_weights() const { return polar_w_; }

 private:
  HopfGridOptions options_;
  FiberOps fiber_;
  std::vector<Vec> reps_;
  std::vector<double> weights_;
  double calibration_ = 1.0;
  int polar_count_ = 0;
  int azimuth_count_ = 0;
  Vec polar_u_;
  Vec polar_w_;
};

using GridPtr = std::shared_ptr<const HopfGrid>;

// Scalar field sampled at the grid points (node index b * N + j).
class ScalarField {
 public:
  ScalarField(GridPtr grid, Vec values);
  static ScalarField zeros(GridPtr grid);
  static ScalarField sample(GridPtr grid,
                            const std::function<double(const Vec&)>& fn);

  const HopfGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Vec& values() const { return values_; }
  Vec& values() { return values_; }
  double at(int b, int j) const { return values_[b * grid_->fiber_samples() + j]; }
  Eigen::Map<const Vec> fiber(int b) const {
    const int N = grid_->fiber_samples();
    return Eigen::Map<const Vec>(values_.data() + b * N, N);
  }
  Eigen::Map<Vec> fiber(int b) {
    const int N = grid_->fiber_samples();
    return Eigen::Map<Vec>(values_.data() + b * N, N);
  }

  // Fiber Fourier coefficients, one row per base node.
  CMat coefficients() const;
  // Largest magnitude among the outermost modes +-M.
  double truncation_estimate() const;

 private:
  GridPtr grid_;
  Vec values_;
};

// Tangent (or covector) field in ambient coordinates: column b * N + j.
class TangentField {
 public:
  TangentField(GridPtr grid, Mat values);
  static TangentField zeros(GridPtr grid);
  // Samples fn and removes the normal component.
  static TangentField sample(GridPtr grid,
                             const std::function<Vec(const Vec&)>& fn);

  const HopfGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const Mat& values() const { return values_; }
  Mat& values() { return values_; }
  Vec at(int b, int j) const { return values_.col(b * grid_->fiber_samples() + j); }

  // max |<value, point>| over the grid.
  double tangency_residual() const;
  // max |value| over the grid.
  double max_norm() const;

  // Values pulled back to the base representative, e^{-2 i theta_j} Z(x_j),
  // as an N x 2n matrix.
  Mat corotated(int b) const;
  void set_from_corotated(int b, const Mat& rows);

 private:
  GridPtr grid_;
  Mat values_;
};

ScalarField fiber_average_scalar(const ScalarField& F);
TangentField fiber_average_vector(const TangentField& Z);

// f with df/dtheta = h along fibers and zero fiber mean. Throws
// PreconditionError when some fiber mean of h exceeds 1e-10.
ScalarField zero_avg_primitive(const ScalarField& h);

// Spectral d/dtheta along fibers.
ScalarField fiber_derivative(const ScalarField& F);

// Lie derivative along the Hopf generator 2iz: spectral derivative of the
// corotated field, rotated back.
TangentField reeb_lie_derivative(const TangentField& Z);

// Integral against alpha0 ^ (d alpha0)^{n-1}.
double quadrature(const ScalarField& F);

double max_abs(const ScalarField& F);

// Stereographic charts of CP^1 for n = 2.
struct ChartPoint {
  int chart = 0;  // 0: w = z2 / z1, used when |z1| >= |z2|; 1: w = z1 / z2
  Complex w;
};

ChartPoint base_chart(const Vec& z);

// A unit representative of the fiber over (chart, w).
Vec chart_point(int chart, Complex w);

// Point of S^2 = CP^1: (2 Re conj(z1) z2, 2 Im conj(z1) z2, |z1|^2 - |z2|^2).
std::array<double, 3> base_point(const Vec& z);

// Unit representative over a point of S^2, the inverse of base_point.
Vec base_rep(const std::array<double, 3>& p);

// Orthonormal frame (e2, e3 = i e2) of the contact plane at z in S^3.
std::array<Vec, 2> contact_frame(const Vec& z);

// The four unit representatives z +- h e2, z +- h e3 (normalized), in
// that order; used for central differences across fibers.
std::array<Vec, 4> fiber_neighbors(const Vec& z, double h);

}  // namespace zoll

#endif  // ZOLL_SPHERE_HPP_
