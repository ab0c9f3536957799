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

// Shadows P_V Phi(B^{2n}) of the unit ball on a symplectic subspace V,
// projected along the symplectic orthogonal of V and measured with
// omega0^k restricted to V.

#ifndef ZOLL_SQUEEZE_HPP_
#define ZOLL_SQUEEZE_HPP_

#include <cstdint>
#include <limits>
#include <string>

#include "zoll/genfun.hpp"
#include "zoll/symplin.hpp"

namespace zoll {

struct ShadowReport {
  double exact_volume = 0.0;
  double mc_volume = 0.0;
  double mc_stderr = 0.0;
  double wirtinger_value = 0.0;  // w(Phi^{-1} V)
  long sample_count = 0;
  std::uint64_t seed = 0;
  bool unbounded = false;
  std::string method;
};

inline constexpr double kUnboundedShadow = std::numeric_limits<double>::infinity();

// pi^k / w(Phi^{-1} V), or kUnboundedShadow when Phi^{-1} V is not
// symplectic. Throws DegenerateSubspaceError when V itself is not.
double shadow_volume_exact(const LinearSymplectomorphism& Phi, const Subspace2k& V);

// Hit-or-miss estimate in a symplectic basis of V. Samples are split into
// fixed chunks with their own seeded streams, so the result does not depend
// on the thread count. Throws PreconditionError for samples < 10^4.
ShadowReport shadow_volume_mc(const LinearSymplectomorphism& Phi, const Subspace2k& V,
                              long samples, std::uint64_t seed);

// Box counting of the projected image of samples drawn from the ball and
// from its boundary sphere (half each), at `resolution` cells per axis.
// mc_stderr carries half the volume of the occupied boundary cells.
ShadowReport shadow_volume_nonlinear_mc(const NonlinearSymplectomorphism& phi,
                                        const Subspace2k& V, long samples,
                                        std::uint64_t seed, int resolution = 200);

struct EqualityReport {
  bool holds = false;
  // max |P_V Phi(z) - Phi(z)| over z in B with Phi(z) in V.
  double forward_error = 0.0;
  // max over m in the shadow of (|Phi^{-1} m| - 1)_+ and of the distance
  // from Phi^{-1} m to Phi^{-1} V.
  double reverse_error = 0.0;
  double exact_minus_pik = 0.0;
  int probes = 0;
};

// Probes P_V Phi(B) = Phi(B cap Phi^{-1} V). Throws PreconditionError
// unless Phi^{-1} V is complex to within 1e-8.
EqualityReport equality_case_check(const LinearSymplectomorphism& Phi, const Subspace2k& V,
                                   int probes = 1000, std::uint64_t seed = 1,
                                   double tol = 1e-8);

}  // namespace zoll

#endif  // ZOLL_SQUEEZE_HPP_
