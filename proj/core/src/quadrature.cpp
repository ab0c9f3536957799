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

#include "zoll/quadrature.hpp"

namespace zoll {

GaussRule gauss_legendre(int count) {
  if (count < 1) throw PreconditionError("Gauss rule needs >= 1 node");
  GaussRule rule{Vec(count), Vec(count)};
  for (int i = 0; i < (count + 1) / 2; ++i) {
    // Chebyshev-like initial guess, then Newton on P_count.
    double x = std::cos(kPi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= count; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (count == 1) p0 = 1.0;
      const double pn = (count == 1) ? x : p1;
      const double pm = (count == 1) ? 1.0 : p0;
      dp = count * (x * pn - pm) / (x * x - 1.0);
      const double dx = pn / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    if (count == 1) {
      rule.nodes[0] = 0.0;
      rule.weights[0] = 2.0;
      return rule;
    }
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[count - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[count - 1 - i] = w;
  }
  return rule;
}

GaussRule gauss_legendre(int count, double a, double b) {
  GaussRule rule = gauss_legendre(count);
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  rule.nodes = (mid + half * rule.nodes.array()).matrix();
  rule.weights *= half;
  return rule;
}

}  // namespace zoll
