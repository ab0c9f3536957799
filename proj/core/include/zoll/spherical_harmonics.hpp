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

#ifndef ZOLL_SPHERICAL_HARMONICS_HPP_
#define ZOLL_SPHERICAL_HARMONICS_HPP_

#include <vector>

#include "zoll/types.hpp"

namespace zoll {

// Real spherical harmonic expansion on S^2 in coordinates u = cos(polar),
// phi = azimuth:
//   F(u, phi) = sum_{l, m} P_l^m(u) (a_lm cos(m phi) + b_lm sin(m phi)),
// with P_l^m normalized to unit L2 norm on [-1, 1].
class SphericalHarmonics {
 public:
  // Analysis from samples on a Gauss-Legendre (u) x equispaced (phi) grid,
  // sample index i * phi_count + j. Exact for band limit lmax <= u_count - 1
  // and m < phi_count / 2.
  static SphericalHarmonics analyze(const Vec& u_nodes, const Vec& u_weights,
                                    int phi_count, const Vec& samples);

  int lmax() const { return lmax_; }
  int mmax() const { return mmax_; }
  double evaluate(double u, double phi) const;

  // Normalized associated Legendre values P_l^m(u) for l <= lmax, m <= mmax,
  // stored at index l * (mmax + 1) + m (zero when m > l).
  static std::vector<double> legendre(int lmax, int mmax, double u);

 private:
  int lmax_ = 0;
  int mmax_ = 0;
  std::vector<double> a_;
  std::vector<double> b_;
};

}  // namespace zoll

#endif  // ZOLL_SPHERICAL_HARMONICS_HPP_
