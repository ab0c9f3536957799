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

// Experiment configuration: a JSON document validated against a fixed
// schema before anything runs. Command line flags override file values.

#ifndef ZOLL_CLI_CONFIG_HPP_
#define ZOLL_CLI_CONFIG_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zoll/sphere.hpp"

namespace zoll::cli {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(int line, const std::string& message)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// All pass/fail thresholds in one place.
struct Tolerances {
  double rho = 1e-3;              // rho <= 1 + rho
  double period = 1e-6;           // |found - pi S^(b)| in normal-form mode
  double first_order_c = 10.0;    // first-order mode: error <= c eps^2
  double volume_gap = 1e-3;       // relative lhs/rhs gap, and p1 / volume
  double linear_residual = 1e-9;
  double representation = 1e-13;  // W = X0 exactness
  double newton_drop = 1e4;
  double constraint = 1e-8;
  double shadow_floor = 0.015;    // relative MC agreement floor
  double genfun_rotation = 1e-8;
  double genfun_roundtrip = 1e-7;
  double straighten = 1e-6;
  double symplecticity = 1e-8;
};

struct GeneratorConfig {
  std::vector<double> eps{0.02};
  int degree = 4;
  int count = 1;
  bool invariant = false;
};

struct ExperimentConfig {
  std::string command;
  std::uint64_t seed = 1;
  std::string profile_json;        // inline profile, empty when absent
  GeneratorConfig generator;
  std::vector<double> ellipsoid_r2;  // systolic sweep over r2 with r1 = 1
  HopfGridOptions grid;
  double halfwidth = 1.0;
  bool first_order = false;
  int base_seeds = 0;
  long samples = 1000000;
  std::vector<std::pair<int, int>> shadow_dims{{2, 1}, {3, 1}, {3, 2}};
  int shadow_cases = 20;
  int volume_cases = 10;
  Tolerances tol;
  std::string out_dir = "out";
};

const std::vector<std::string>& known_commands();

// Throws ConfigError with the line of the offending key.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

}  // namespace zoll::cli

#endif  // ZOLL_CLI_CONFIG_HPP_
