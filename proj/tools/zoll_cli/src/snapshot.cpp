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

#include "zoll_cli/snapshot.hpp"

#include <cmath>

#include "json.hpp"

namespace zoll::cli {

namespace {

using json = nlohmann::json;

json grid_json(const HopfGrid& grid) {
  json nodes = json::array();
  for (int b = 0; b < grid.base_size(); ++b) {
    const Vec& r = grid.rep(b);
    nodes.push_back(std::vector<double>(r.data(), r.data() + r.size()));
  }
  return {{"n", grid.n()},
          {"base_nodes", nodes},
          {"weights", grid.weights()},
          {"fiber_modes", grid.fiber_modes()}};
}

json coefficient_row(const CVec& c) {
  json row = json::array();
  for (int i = 0; i < c.size(); ++i) row.push_back({c[i].real(), c[i].imag()});
  return row;
}

// Samples of sum_m c_m e^{2 i m theta_j}.
Vec synthesize(const FiberOps& ops, const json& row) {
  const int M = ops.modes();
  if (!row.is_array() || static_cast<int>(row.size()) != 2 * M + 1) {
    throw PreconditionError("snapshot: coefficient row has the wrong length");
  }
  Vec out(ops.samples());
  for (int j = 0; j < ops.samples(); ++j) {
    Complex s = 0.0;
    for (int m = -M; m <= M; ++m) {
      const json& c = row[m + M];
      s += Complex(c[0].get<double>(), c[1].get<double>()) * std::polar(1.0, 2.0 * m * ops.angle(j));
    }
    out[j] = s.real();
  }
  return out;
}

json check(const HopfGrid& grid, const std::string& text, const char* rank) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw PreconditionError(std::string("snapshot: ") + e.what());
  }
  if (doc.value("rank", "") != rank) {
    throw PreconditionError(std::string("snapshot: expected rank '") + rank + "'");
  }
  if (doc.at("n").get<int>() != grid.n() || doc.at("fiber_modes").get<int>() != grid.fiber_modes()) {
    throw PreconditionError("snapshot: grid dimension or fiber modes differ");
  }
  const json& nodes = doc.at("base_nodes");
  if (static_cast<int>(nodes.size()) != grid.base_size()) {
    throw PreconditionError("snapshot: base node count differs");
  }
  for (int b = 0; b < grid.base_size(); ++b) {
    const std::vector<double> x = nodes[b].get<std::vector<double>>();
    const Vec& r = grid.rep(b);
    if (static_cast<int>(x.size()) != r.size()) throw PreconditionError("snapshot: node size differs");
    for (int i = 0; i < r.size(); ++i) {
      if (std::abs(x[i] - r[i]) > 1e-14) throw PreconditionError("snapshot: base nodes differ");
    }
  }
  return doc;
}

}  // namespace

std::string grid_snapshot(const HopfGrid& grid) { return grid_json(grid).dump(); }

std::string field_snapshot(const ScalarField& F) {
  json doc = grid_json(F.grid());
  doc["rank"] = "scalar";
  json coeffs = json::array();
  const CMat c = F.coefficients();
  for (int b = 0; b < c.rows(); ++b) coeffs.push_back(coefficient_row(c.row(b).transpose()));
  doc["coefficients"] = coeffs;
  return doc.dump();
}

std::string field_snapshot(const TangentField& Z) {
  const HopfGrid& grid = Z.grid();
  const int N = grid.fiber_samples();
  json doc = grid_json(grid);
  doc["rank"] = "tangent";
  json coeffs = json::array();
  for (int b = 0; b < grid.base_size(); ++b) {
    for (int i = 0; i < Z.values().rows(); ++i) {
      const Vec s = Z.values().block(i, b * N, 1, N).transpose();
      coeffs.push_back(coefficient_row(grid.fiber().coefficients(s)));
    }
  }
  doc["coefficients"] = coeffs;
  return doc.dump();
}

ScalarField scalar_from_snapshot(GridPtr grid, const std::string& text) {
  const json doc = check(*grid, text, "scalar");
  const json& rows = doc.at("coefficients");
  if (static_cast<int>(rows.size()) != grid->base_size()) {
    throw PreconditionError("snapshot: coefficient row count differs");
  }
  ScalarField F = ScalarField::zeros(grid);
  for (int b = 0; b < grid->base_size(); ++b) F.fiber(b) = synthesize(grid->fiber(), rows[b]);
  return F;
}

TangentField tangent_from_snapshot(GridPtr grid, const std::string& text) {
  const json doc = check(*grid, text, "tangent");
  const json& rows = doc.at("coefficients");
  const int dim = 2 * grid->n();
  const int N = grid->fiber_samples();
  if (static_cast<int>(rows.size()) != grid->base_size() * dim) {
    throw PreconditionError("snapshot: coefficient row count differs");
  }
  TangentField Z = TangentField::zeros(grid);
  for (int b = 0; b < grid->base_size(); ++b) {
    for (int i = 0; i < dim; ++i) {
      Z.values().block(i, b * N, 1, N) = synthesize(grid->fiber(), rows[b * dim + i]).transpose();
    }
  }
  return Z;
}

}  // namespace zoll::cli
