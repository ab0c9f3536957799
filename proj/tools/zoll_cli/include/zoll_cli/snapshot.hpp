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

// JSON snapshots of grids and sampled fields:
//   {"n", "base_nodes": [[x_1..x_2n], ...], "weights", "fiber_modes",
//    "rank": "scalar" | "tangent",
//    "coefficients": [[[re, im] for m = -M..M], ...]}
// A scalar field has one coefficient row per base node; a tangent field has
// 2n rows per base node, one per ambient component, in node-major order.

#ifndef ZOLL_CLI_SNAPSHOT_HPP_
#define ZOLL_CLI_SNAPSHOT_HPP_

#include <string>

#include "zoll/sphere.hpp"

namespace zoll::cli {

std::string grid_snapshot(const HopfGrid& grid);
std::string field_snapshot(const ScalarField& F);
std::string field_snapshot(const TangentField& Z);

// Rebuild samples on `grid`. Throws PreconditionError when the snapshot's
// base nodes or fiber modes differ from the grid, or the rank is wrong.
ScalarField scalar_from_snapshot(GridPtr grid, const std::string& text);
TangentField tangent_from_snapshot(GridPtr grid, const std::string& text);

}  // namespace zoll::cli

#endif  // ZOLL_CLI_SNAPSHOT_HPP_
