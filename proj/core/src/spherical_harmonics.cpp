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

#include "zoll/spherical_harmonics.hpp"

namespace zoll {

std::vector<double> SphericalHarmonics::legendre(int lmax, int mmax, double u) {
  const int stride = mmax + 1;
  std::vector<double> p((lmax + 1) * stride, 0.0);
  const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
  double pmm = std::sqrt(0.5);
  for (int m = 0; m <= std::min(lmax, mmax); ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    p[m * stride + m] = pmm;
    if (m + 1 <= lmax) p[(m + 1) * stride + m] = std::sqrt(2.0 * m + 3.0) * u * pmm;
    for (int l = m + 2; l <= lmax; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (1.0 * l * l - 1.0 * m * m));
      const double b = std::sqrt(((l - 1.0) * (l - 1.0) - 1.0 * m * m) /
                                 (4.0 * (l - 1.0) * (l - 1.0) - 1.0));
      p[l * stride + m] = a * (u * p[(l - 1) * stride + m] - b * p[(l - 2) * stride + m]);
    }
  }
  return p;
}

SphericalHarmonics SphericalHarmonics::analyze(const Vec& u_nodes,
                                               const Vec& u_weights,
                                               int phi_count,
                                               const Vec& samples) {
  const int nu = static_cast<int>(u_nodes.size());
  if (samples.size() != nu * phi_count) {
    throw DimensionError("spherical harmonic analysis: sample count mismatch");
  }
  SphericalHarmonics sh;
  sh.lmax_ = nu - 1;
  sh.mmax_ = std::min(sh.lmax_, (phi_count - 1) / 2);
  const int stride = sh.mmax_ + 1;
  sh.a_.assign((sh.lmax_ + 1) * stride, 0.0);
  sh.b_.assign((sh.lmax_ + 1) * stride, 0.0);
  const double dphi = 2.0 * kPi / phi_count;
  for (int i = 0; i < nu; ++i) {
    // Azimuthal Fourier sums for this ring.
    std::vector<double> cs(stride, 0.0), sn(stride, 0.0);
    for (int j = 0; j < phi_count; ++j) {
      const double f = samples[i * phi_count + j];
      const double phi = j * dphi;
      for (int m = 0; m <= sh.mmax_; ++m) {
        cs[m] += f * std::cos(m * phi) * dphi;
        sn[m] += f * std::sin(m * phi) * dphi;
      }
    }
    const std::vector<double> p = legendre(sh.lmax_, sh.mmax_, u_nodes[i]);
    for (int l = 0; l <= sh.lmax_; ++l) {
      for (int m = 0; m <= std::min(l, sh.mmax_); ++m) {
        const double norm = (m == 0) ? 2.0 * kPi : kPi;
        const double w = u_weights[i] * p[l * stride + m] / norm;
        sh.a_[l * stride + m] += w * cs[m];
        sh.b_[l * stride + m] += w * sn[m];
      }
    }
  }
  return sh;
}

double SphericalHarmonics::evaluate(double u, double phi) const {
  const int stride = mmax_ + 1;
  const std::vector<double> p = legendre(lmax_, mmax_, u);
  double s = 0.0;
  for (int m = 0; m <= mmax_; ++m) {
    const double c = std::cos(m * phi);
    const double sm = std::sin(m * phi);
    for (int l = m; l <= lmax_; ++l) {
      s += p[l * stride + m] * (a_[l * stride + m] * c + b_[l * stride + m] * sm);
    }
  }
  return s;
}

}  // namespace zoll
