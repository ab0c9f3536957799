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

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "zoll_cli/commands.hpp"
#include "zoll_cli/config.hpp"
#include "zoll_cli/snapshot.hpp"

namespace zoll::cli {
namespace {

namespace fs = std::filesystem;

const fs::path kFixtures = ZOLL_FIXTURE_DIR;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch_dir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("zoll_cli_test_" + name);
  fs::remove_all(d);
  return d;
}

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "zoll-lab");
  std::vector<char*> argv;
  for (auto& a : args) argv.push_back(a.data());
  return cli_main(static_cast<int>(argv.size()), argv.data());
}

int error_line(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.line();
  }
  return -1;
}

TEST(Config, Defaults) {
  const ExperimentConfig c = parse_config("{}");
  EXPECT_EQ(c.seed, 1u);
  EXPECT_EQ(c.generator.eps, std::vector<double>{0.02});
  EXPECT_EQ(c.samples, 1000000);
  EXPECT_EQ(c.tol.rho, 1e-3);
  EXPECT_FALSE(c.first_order);
}

TEST(Config, ReadsNestedKeys) {
  const ExperimentConfig c = parse_config(R"({
    "command": "spectrum",
    "seed": 7,
    "generator": {"eps": [0.01, 0.03], "degree": 3, "count": 2, "invariant": true},
    "grid": {"polar_nodes": 12, "fiber_modes": 8},
    "spectrum": {"mode": "first_order", "halfwidth": 0.5},
    "tolerances": {"period": 1e-7},
    "output": {"dir": "elsewhere"}
  })");
  EXPECT_EQ(c.command, "spectrum");
  EXPECT_EQ(c.seed, 7u);
  EXPECT_EQ(c.generator.eps, (std::vector<double>{0.01, 0.03}));
  EXPECT_EQ(c.generator.count, 2);
  EXPECT_TRUE(c.generator.invariant);
  EXPECT_EQ(c.grid.polar_nodes, 12);
  EXPECT_EQ(c.grid.fiber_modes, 8);
  EXPECT_TRUE(c.first_order);
  EXPECT_EQ(c.halfwidth, 0.5);
  EXPECT_EQ(c.tol.period, 1e-7);
  EXPECT_EQ(c.out_dir, "elsewhere");
}

TEST(Config, ErrorsCarryLineNumbers) {
  EXPECT_EQ(error_line("{\n  \"seed\": 1,\n  \"colour\": 3\n}"), 3);
  EXPECT_EQ(error_line("{\n  \"grid\": {\n    \"polar_nodes\": 1\n  }\n}"), 3);
  EXPECT_EQ(error_line("{\n  \"generator\": {\n    \"eps\": [0.1,\n      0.7]\n  }\n}"), 3);
  EXPECT_EQ(error_line("{\n  \"seed\": 1,\n  \"command\": \"plot\"\n}"), 3);
  EXPECT_EQ(error_line("{\n  \"seed\": 1\n  \"command\": \"shadow\"\n}"), 3);
  EXPECT_EQ(error_line(slurp(kFixtures / "configs" / "bad-tolerance.json")), 5);
  try {
    parse_config("{\n  \"tolerances\": {\"rho\": -1}\n}");
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_EQ(std::string(e.what()), "line 2: 'tolerances.rho': must be positive");
  }
}

TEST(Config, MissingFile) {
  EXPECT_THROW(load_config("/nonexistent/zoll.json"), ConfigError);
}

TEST(Cli, ExitCodes) {
  const fs::path out = scratch_dir("exit");
  const std::string cfg = (kFixtures / "configs" / "genfun-roundtrip.json").string();
  EXPECT_EQ(run({"genfun-roundtrip", "--config", cfg, "--out", out.string()}), kExitPass);
  EXPECT_TRUE(fs::exists(out / "genfun-roundtrip.json"));
  EXPECT_EQ(run({"shadow", "--config", (kFixtures / "configs" / "bad-tolerance.json").string(),
                 "--out", out.string()}),
            kExitConfig);
  // Config names a different command.
  EXPECT_EQ(run({"shadow", "--config", cfg, "--out", out.string()}), kExitConfig);
  EXPECT_EQ(run({"systolic-scan", "--eps", "0.7", "--out", out.string()}), kExitConfig);
  EXPECT_EQ(run({"genfun-roundtrip", "--config", "/nonexistent.json"}), kExitConfig);

  const fs::path strict = out / "strict.json";
  std::ofstream(strict) << R"({"command": "genfun-roundtrip", "tolerances": {"genfun_rotation": 1e-30}})";
  EXPECT_EQ(run({"genfun-roundtrip", "--config", strict.string(), "--out", out.string()}),
            kExitTolerance);
}

TEST(Cli, SeedOverrideAndDeterminism) {
  const std::string cfg = (kFixtures / "configs" / "systolic-scan.json").string();
  const fs::path a = scratch_dir("det_a"), b = scratch_dir("det_b"), c = scratch_dir("det_c");
  ASSERT_EQ(run({"systolic-scan", "--config", cfg, "--out", a.string(), "--seed", "5"}), 0);
  ASSERT_EQ(run({"systolic-scan", "--config", cfg, "--out", b.string(), "--seed", "5"}), 0);
  ASSERT_EQ(run({"systolic-scan", "--config", cfg, "--out", c.string()}), 0);
  const std::string ta = slurp(a / "systolic-scan.csv");
  EXPECT_EQ(ta, slurp(b / "systolic-scan.csv"));
  EXPECT_NE(ta, slurp(c / "systolic-scan.csv"));
  EXPECT_NE(ta.find("\n5,0.02,"), std::string::npos);
}

TEST(Cli, RoundSphereProfile) {
  const fs::path out = scratch_dir("round");
  ExperimentConfig cfg;
  cfg.command = "systolic-scan";
  cfg.profile_json = R"({"n": 2, "terms": []})";
  cfg.out_dir = out.string();
  const CommandOutput r = run_command(cfg);
  EXPECT_EQ(r.exit_code, kExitPass);
  const std::string csv = slurp(out / "systolic-scan.csv");
  // One data row after the schema line and the header.
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> rows;
  while (std::getline(in, line)) rows.push_back(line);
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], "# zoll-lab csv schema v1 systolic-scan");
  std::vector<std::string> cells;
  std::stringstream ss(rows[2]);
  while (std::getline(ss, line, ',')) cells.push_back(line);
  EXPECT_NEAR(std::stod(cells[6]), 1.0, 2e-3);
}

TEST(Snapshot, FieldsRoundTrip) {
  HopfGridOptions o;
  o.polar_nodes = 6;
  o.fiber_modes = 4;
  const GridPtr g = HopfGrid::make(o);
  const ScalarField F = ScalarField::sample(g, [](const Vec& x) { return x[0] * x[3] - x[1]; });
  const ScalarField F2 = scalar_from_snapshot(g, field_snapshot(F));
  EXPECT_LT((F.values() - F2.values()).cwiseAbs().maxCoeff(), 1e-14);
  const TangentField Z =
      TangentField::sample(g, [](const Vec& x) { return Vec(apply_J(x) * x[2]); });
  const TangentField Z2 = tangent_from_snapshot(g, field_snapshot(Z));
  EXPECT_LT((Z.values() - Z2.values()).cwiseAbs().maxCoeff(), 1e-14);

  const std::string grid_text = grid_snapshot(*g);
  EXPECT_NE(grid_text.find("\"fiber_modes\":4"), std::string::npos);
  EXPECT_THROW(tangent_from_snapshot(g, field_snapshot(F)), PreconditionError);
  o.fiber_modes = 5;
  EXPECT_THROW(scalar_from_snapshot(HopfGrid::make(o), field_snapshot(F)), PreconditionError);
  EXPECT_THROW(scalar_from_snapshot(g, "{"), PreconditionError);
}

class Golden : public ::testing::TestWithParam<std::string> {};

TEST_P(Golden, ReproducesBitwise) {
  const std::string name = GetParam();
  ExperimentConfig cfg = load_config((kFixtures / "configs" / (name + ".json")).string());
  const fs::path out = scratch_dir("golden_" + name);
  cfg.out_dir = out.string();
  const CommandOutput r = run_command(cfg);
  EXPECT_EQ(r.exit_code, kExitPass);
  ASSERT_EQ(r.files.size(), 1u);
  const fs::path golden = kFixtures / "golden" / name / r.files[0];
  ASSERT_TRUE(fs::exists(golden)) << golden;
  EXPECT_EQ(slurp(out / r.files[0]), slurp(golden)) << r.files[0];
}

INSTANTIATE_TEST_SUITE_P(Fixtures, Golden,
                         ::testing::Values("systolic-scan", "ellipsoid-sweep", "spectrum",
                                           "normal-form", "volume-check", "shadow",
                                           "genfun-roundtrip", "bottkol-check"),
                         [](const auto& info) {
                           std::string s = info.param;
                           std::replace(s.begin(), s.end(), '-', '_');
                           return s;
                         });

}  // namespace
}  // namespace zoll::cli
