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

#ifndef ZOLL_QUADRATURE_HPP_
#define ZOLL_QUADRATURE_HPP_

#include "zoll/types.hpp"

namespace zoll {

struct GaussRule {
  Vec nodes;
  Vec weights;
};

// Gauss-Legendre rule with `count` nodes on [-1, 1].
GaussRule gauss_legendre(int count);

// The same rule mapped to [a, b].
GaussRule gauss_legendre(int count, double a, double b);

}  // namespace zoll

#endif  // ZOLL_QUADRATURE_HPP_
