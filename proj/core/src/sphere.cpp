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

#include <string>

#include "zoll/quadrature.hpp"

namespace zoll {

Vec hopf_flow(const Vec& z, double t) {
  if (std::abs(z.norm() - 1.0) > 1e-12) {
    throw PreconditionError("hopf_flow: point is not on the unit sphere");
  }
  return rotate(z, 2.0 * t);
}

//---------------------------------------------------------------------------//
// FiberOps
//---------------------------------------------------------------------------//

FiberOps::FiberOps(int modes) : modes_(modes) {
  if (modes < 1) throw PreconditionError("fiber needs at least one mode");
  const int N = samples();
  derivative_.resize(N, N);
  primitive_.resize(N, N);
  for (int k = 0; k < N; ++k) {
    for (int j = 0; j < N; ++j) {
      const double d = 2.0 * (angle(k) - angle(j));
      double dsum = 0.0, psum = 0.0;
      for (int m = 1; m <= modes_; ++m) {
        dsum += m * std::sin(m * d);
        psum += std::sin(m * d) / m;
      }
      derivative_(k, j) = -4.0 * dsum / N;
      primitive_(k, j) = psum / N;
    }
  }
}

CVec FiberOps::coefficients(const Eigen::Ref<const Vec>& samples) const {
  const int N = this->samples();
  CVec c(N);
  for (int m = -modes_; m <= modes_; ++m) {
    Complex s = 0.0;
    for (int j = 0; j < N; ++j) {
      s += samples[j] * std::polar(1.0, -2.0 * m * angle(j));
    }
    c[m + modes_] = s / static_cast<double>(N);
  }
  return c;
}

Vec FiberOps::interpolation_weights(double theta) const {
  const int N = samples();
  Vec w(N);
  for (int j = 0; j < N; ++j) {
    const double d = 2.0 * (theta - angle(j));
    double s = 1.0;
    for (int m = 1; m <= modes_; ++m) s += 2.0 * std::cos(m * d);
    w[j] = s / N;
  }
  return w;
}

//---------------------------------------------------------------------------//
// HopfGrid
//---------------------------------------------------------------------------//

HopfGrid::HopfGrid(const HopfGridOptions& options)
    : options_(options), fiber_(options.fiber_modes) {
  const int n = options_.n;
  if (n < 2) throw PreconditionError("HopfGrid needs n >= 2");
  if (options_.polar_nodes < 1) throw PreconditionError("polar_nodes < 1");
  if (options_.azimuth_nodes == 0) options_.azimuth_nodes = 2 * options_.polar_nodes;
  polar_count_ = options_.polar_nodes;
  azimuth_count_ = options_.azimuth_nodes;

  // Simplex coordinates t_j = |z_j|^2 by the collapsed map
  // t_1 = s_1, t_2 = (1 - s_1) s_2, ..., whose Jacobian is
  // prod_j (1 - s_j)^{n - 1 - j}. Under the normalized contact measure
  // t is uniform on the simplex and the relative phases are uniform.
  const GaussRule g = gauss_legendre(polar_count_, 0.0, 1.0);
  polar_u_ = (2.0 * g.nodes.array() - 1.0).matrix();
  polar_w_ = 2.0 * g.weights;

  const int dims = n - 1;
  std::vector<int> si(dims, 0), pj(dims, 0);
  double factorial = 1.0;
  for (int j = 2; j <= dims; ++j) factorial *= j;
  const double phase_w = std::pow(1.0 / azimuth_count_, dims);
  const double base_total = std::pow(kPi, n - 1);

  bool done_s = false;
  while (!done_s) {
    Vec t(n);
    double rest = 1.0, jac = 1.0, w = 1.0;
    for (int j = 0; j < dims; ++j) {
      const double s = g.nodes[si[j]];
      t[j] = rest * s;
      w *= g.weights[si[j]];
      jac *= std::pow(1.0 - s, dims - 1 - j);
      rest *= (1.0 - s);
    }
    t[n - 1] = rest;
    const double wt = w * jac * factorial;

    std::fill(pj.begin(), pj.end(), 0);
    bool done_p = false;
    while (!done_p) {
      Vec z(2 * n);
      z[0] = std::sqrt(t[0]);
      z[1] = 0.0;
      for (int j = 1; j < n; ++j) {
        const double phi = 2.0 * kPi * pj[j - 1] / azimuth_count_;
        const double r = std::sqrt(std::max(t[j], 0.0));
        z[2 * j] = r * std::cos(phi);
        z[2 * j + 1] = r * std::sin(phi);
      }
      reps_.push_back(z / z.norm());
      weights_.push_back(base_total * wt * phase_w);
      int d = 0;
      while (d < dims && ++pj[d] == azimuth_count_) pj[d++] = 0;
      done_p = (d == dims);
    }
    int d = 0;
    while (d < dims && ++si[d] == polar_count_) si[d++] = 0;
    done_s = (d == dims);
  }

  double raw = 0.0;
  for (double w : weights_) raw += w * kPi;
  calibration_ = std::pow(kPi, n) / raw;
  for (double& w : weights_) w *= calibration_;
}

//---------------------------------------------------------------------------//
// Fields
//---------------------------------------------------------------------------//

ScalarField::ScalarField(GridPtr grid, Vec values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.size() != grid_->size()) {
    throw DimensionError("scalar field size does not match grid");
  }
}

ScalarField ScalarField::zeros(GridPtr grid) {
  const int size = grid->size();
  return ScalarField(std::move(grid), Vec::Zero(size));
}

ScalarField ScalarField::sample(GridPtr grid,
                                const std::function<double(const Vec&)>& fn) {
  Vec v(grid->size());
  const int N = grid->fiber_samples();
  for (int b = 0; b < grid->base_size(); ++b) {
    for (int j = 0; j < N; ++j) v[b * N + j] = fn(grid->point(b, j));
  }
  return ScalarField(std::move(grid), std::move(v));
}

CMat ScalarField::coefficients() const {
  const int N = grid_->fiber_samples();
  CMat c(grid_->base_size(), N);
  for (int b = 0; b < grid_->base_size(); ++b) {
    c.row(b) = grid_->fiber().coefficients(fiber(b)).transpose();
  }
  return c;
}

double ScalarField::truncation_estimate() const {
  const CMat c = coefficients();
  const int last = static_cast<int>(c.cols()) - 1;
  double e = 0.0;
  for (Eigen::Index b = 0; b < c.rows(); ++b) {
    e = std::max({e, std::abs(c(b, 0)), std::abs(c(b, last))});
  }
  return e;
}

TangentField::TangentField(GridPtr grid, Mat values)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (values_.cols() != grid_->size() || values_.rows() != 2 * grid_->n()) {
    throw DimensionError("tangent field size does not match grid");
  }
}

TangentField TangentField::zeros(GridPtr grid) {
  const int rows = 2 * grid->n();
  const int cols = grid->size();
  return TangentField(std::move(grid), Mat::Zero(rows, cols));
}

TangentField TangentField::sample(GridPtr grid,
                                  const std::function<Vec(const Vec&)>& fn) {
  Mat v(2 * grid->n(), grid->size());
  const int N = grid->fiber_samples();
  for (int b = 0; b < grid->base_size(); ++b) {
    for (int j = 0; j < N; ++j) {
      const Vec x = grid->point(b, j);
      Vec y = fn(x);
      y -= y.dot(x) * x;
      v.col(b * N + j) = y;
    }
  }
  return TangentField(std::move(grid), std::move(v));
}

double TangentField::tangency_residual() const {
  double r = 0.0;
  const int N = grid_->fiber_samples();
  for (int b = 0; b < grid_->base_size(); ++b) {
    for (int j = 0; j < N; ++j) {
      r = std::max(r, std::abs(values_.col(b * N + j).dot(grid_->point(b, j))));
    }
  }
  return r;
}

double TangentField::max_norm() const {
  return values_.colwise().norm().maxCoeff();
}

Mat TangentField::corotated(int b) const {
  const int N = grid_->fiber_samples();
  Mat rows(N, values_.rows());
  for (int j = 0; j < N; ++j) {
    rows.row(j) =
        rotate(values_.col(b * N + j), -2.0 * grid_->fiber().angle(j)).transpose();
  }
  return rows;
}

void TangentField::set_from_corotated(int b, const Mat& rows) {
  const int N = grid_->fiber_samples();
  for (int j = 0; j < N; ++j) {
    values_.col(b * N + j) =
        rotate(rows.row(j).transpose(), 2.0 * grid_->fiber().angle(j));
  }
}

//---------------------------------------------------------------------------//
// Fiber operations
//---------------------------------------------------------------------------//

ScalarField fiber_average_scalar(const ScalarField& F) {
  ScalarField out = F;
  for (int b = 0; b < F.grid().base_size(); ++b) {
    out.fiber(b).setConstant(F.fiber(b).mean());
  }
  return out;
}

TangentField fiber_average_vector(const TangentField& Z) {
  TangentField out = Z;
  const int N = Z.grid().fiber_samples();
  for (int b = 0; b < Z.grid().base_size(); ++b) {
    const Mat rows = Z.corotated(b);
    const Eigen::RowVectorXd mean = rows.colwise().mean();
    out.set_from_corotated(b, mean.replicate(N, 1));
  }
  return out;
}

ScalarField zero_avg_primitive(const ScalarField& h) {
  ScalarField out = h;
  const Mat& A = h.grid().fiber().primitive();
  for (int b = 0; b < h.grid().base_size(); ++b) {
    const double mean = h.fiber(b).mean();
    if (std::abs(mean) > 1e-10) {
      throw PreconditionError("zero_avg_primitive: fiber mean " +
                              std::to_string(mean) + " is not zero");
    }
    out.fiber(b) = A * h.fiber(b);
  }
  return out;
}

ScalarField fiber_derivative(const ScalarField& F) {
  ScalarField out = F;
  const Mat& D = F.grid().fiber().derivative();
  for (int b = 0; b < F.grid().base_size(); ++b) out.fiber(b) = D * F.fiber(b);
  return out;
}

TangentField reeb_lie_derivative(const TangentField& Z) {
  TangentField out = Z;
  const Mat& D = Z.grid().fiber().derivative();
  for (int b = 0; b < Z.grid().base_size(); ++b) {
    out.set_from_corotated(b, D * Z.corotated(b));
  }
  return out;
}

double quadrature(const ScalarField& F) {
  const HopfGrid& g = F.grid();
  const double dtheta = kPi / g.fiber_samples();
  double s = 0.0;
  for (int b = 0; b < g.base_size(); ++b) s += g.weight(b) * F.fiber(b).sum();
  return s * dtheta;
}

double max_abs(const ScalarField& F) { return F.values().cwiseAbs().maxCoeff(); }

//---------------------------------------------------------------------------//
// Base charts (n = 2)
//---------------------------------------------------------------------------//

namespace {

void require_c2(const Vec& z) {
  if (z.size() != 4) throw DimensionError("base charts are defined for n = 2");
}

}  // namespace

ChartPoint base_chart(const Vec& z) {
  require_c2(z);
  const Complex z1(z[0], z[1]);
  const Complex z2(z[2], z[3]);
  if (std::abs(z1) >= std::abs(z2)) return {0, z2 / z1};
  return {1, z1 / z2};
}

Vec chart_point(int chart, Complex w) {
  const double s = 1.0 / std::sqrt(1.0 + std::norm(w));
  Vec z(4);
  if (chart == 0) {
    z << s, 0.0, s * w.real(), s * w.imag();
  } else {
    z << s * w.real(), s * w.imag(), s, 0.0;
  }
  return z;
}

std::array<double, 3> base_point(const Vec& z) {
  require_c2(z);
  const Complex z1(z[0], z[1]);
  const Complex z2(z[2], z[3]);
  const Complex p = std::conj(z1) * z2;
  return {2.0 * p.real(), 2.0 * p.imag(), std::norm(z1) - std::norm(z2)};
}

Vec base_rep(const std::array<double, 3>& p) {
  const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  const double u = std::clamp(p[2] / norm, -1.0, 1.0);
  const double t = 0.5 * (1.0 + u);
  const double phi = std::atan2(p[1], p[0]);
  Vec z(4);
  z << std::sqrt(t), 0.0, std::sqrt(1.0 - t) * std::cos(phi),
      std::sqrt(1.0 - t) * std::sin(phi);
  return z / z.norm();
}

std::array<Vec, 2> contact_frame(const Vec& z) {
  require_c2(z);
  Vec e2(4);
  e2 << -z[2], z[3], z[0], -z[1];
  return {e2, apply_J(e2)};
}

std::array<Vec, 4> fiber_neighbors(const Vec& z, double h) {
  const auto frame = contact_frame(z);
  std::array<Vec, 4> out;
  out[0] = (z + h * frame[0]).normalized();
  out[1] = (z - h * frame[0]).normalized();
  out[2] = (z + h * frame[1]).normalized();
  out[3] = (z - h * frame[1]).normalized();
  return out;
}

}  // namespace zoll
