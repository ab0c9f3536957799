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

#include "zoll_cli/commands.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "zoll_cli/experiments.hpp"

namespace zoll::cli {

namespace {

using json = nlohmann::json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

json num(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

json num_list(const std::vector<double>& xs) {
  json out = json::array();
  for (double x : xs) out.push_back(num(x));
  return out;
}

class Checker {
 public:
  explicit Checker(CommandOutput* out) : out_(out) {}
  // Records a failure when !ok.
  bool expect(bool ok, const std::string& what) {
    if (!ok) {
      out_->failures.push_back(what);
      spdlog::warn("tolerance violated: {}", what);
    }
    return ok;
  }

 private:
  CommandOutput* out_;
};

std::string fmt_g(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.10g", x);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& command, const std::vector<std::string>& columns) {
    ss_ << "# zoll-lab csv schema v1 " << command << "\n";
    for (std::size_t i = 0; i < columns.size(); ++i) ss_ << (i ? "," : "") << columns[i];
    ss_ << "\n";
  }
  CsvWriter& cell(double x) { return raw(fmt_g(x)); }
  CsvWriter& cell(long x) { return raw(std::to_string(x)); }
  CsvWriter& cell(int x) { return raw(std::to_string(x)); }
  CsvWriter& cell(std::uint64_t x) { return raw(std::to_string(x)); }
  CsvWriter& cell(bool x) { return raw(x ? "1" : "0"); }
  void end_row() {
    ss_ << "\n";
    first_ = true;
  }
  std::string str() const { return ss_.str(); }

 private:
  CsvWriter& raw(const std::string& s) {
    ss_ << (first_ ? "" : ",") << s;
    first_ = false;
    return *this;
  }
  std::ostringstream ss_;
  bool first_ = true;
};

void write_file(const ExperimentConfig& cfg, const std::string& name, const std::string& text,
                CommandOutput* out) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const fs::path path = fs::path(cfg.out_dir) / name;
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  f << text;
  out->files.push_back(name);
  spdlog::info("wrote {}", path.string());
}

void write_json(const ExperimentConfig& cfg, const std::string& name, const json& doc,
                CommandOutput* out) {
  write_file(cfg, name, doc.dump(2) + "\n", out);
}

// ---- profiles ----

struct ProfileCase {
  std::uint64_t seed = 0;
  double eps = 0.0;  // sup |f - 1| over the probe set
  double r2 = kNaN;  // second ellipsoid radius, NaN otherwise
  RadialProfile f;
};

double deviation(const RadialProfile& f) {
  return std::max(f.max_bound() - 1.0, 1.0 - f.min_bound());
}

std::vector<ProfileCase> profile_cases(const ExperimentConfig& cfg) {
  std::vector<ProfileCase> out;
  if (!cfg.profile_json.empty()) {
    RadialProfile f = RadialProfile::round(2);
    try {
      f = RadialProfile::from_json(cfg.profile_json);
    } catch (const std::exception& e) {
      throw ConfigError(0, std::string("'profile': ") + e.what());
    }
    const double r2 = f.kind() == RadialProfile::Kind::kEllipsoid ? f.radii().back() : kNaN;
    out.push_back({cfg.seed, deviation(f), r2, f});
  } else if (!cfg.ellipsoid_r2.empty()) {
    for (double r2 : cfg.ellipsoid_r2) {
      RadialProfile f = RadialProfile::ellipsoid({1.0, r2});
      out.push_back({cfg.seed, deviation(f), r2, f});
    }
  } else {
    const GeneratorConfig& g = cfg.generator;
    for (double eps : g.eps) {
      for (int i = 0; i < g.count; ++i) {
        const std::uint64_t s = cfg.seed + static_cast<std::uint64_t>(i);
        out.push_back({s, eps, kNaN, RadialProfile::random(2, g.degree, eps, s, g.invariant)});
      }
    }
  }
  for (const auto& c : out) {
    if (c.f.n() != 2) throw ConfigError(0, "'profile': only n = 2 is supported by this command");
  }
  return out;
}

GridPtr make_grid(const ExperimentConfig& cfg) {
  HopfGridOptions o = cfg.grid;
  o.n = 2;
  return HopfGrid::make(o);
}

json profile_json(const ProfileCase& c) {
  return {{"seed", c.seed}, {"eps", num(c.eps)}, {"profile", json::parse(c.f.to_json())}};
}

// ---- commands ----

void cmd_systolic_scan(const ExperimentConfig& cfg, CommandOutput* out) {
  const GridPtr grid = make_grid(cfg);
  Checker check(out);
  CsvWriter csv("systolic-scan",
                {"seed", "eps", "r2", "t_min", "t_max", "volume", "rho", "rho_oracle", "zoll_flag",
                 "margin", "s_min", "s_max", "orbits"});
  SystolicOptions so;
  so.halfwidth = cfg.halfwidth;
  so.spectrum.base_seeds = cfg.base_seeds;
  for (const ProfileCase& c : profile_cases(cfg)) {
    std::vector<OrbitSeed> extra;
    double rho_oracle = kNaN;
    if (std::isfinite(c.r2)) {
      const EllipsoidOracle o = ellipsoid_oracle(c.f.radii());
      for (std::size_t i = 0; i < o.seeds.size(); ++i) extra.push_back({o.seeds[i], o.periods[i]});
      rho_oracle = o.rho;
    }
    const SystolicCase s = run_systolic_case(c.f, grid, so, extra);
    spdlog::info("seed {} eps {:.3g}: T_min {:.10f} volume {:.10f} rho {:.8f} ({} orbits)", c.seed,
                 c.eps, s.t_min, s.volume, s.rho, s.orbits);
    csv.cell(c.seed).cell(c.eps).cell(c.r2).cell(s.t_min).cell(s.t_max).cell(s.volume).cell(s.rho)
        .cell(rho_oracle).cell(s.zoll_flag).cell(1.0 - s.rho).cell(s.s_min).cell(s.s_max)
        .cell(s.orbits);
    csv.end_row();
    check.expect(s.rho <= 1.0 + cfg.tol.rho,
                 "seed " + std::to_string(c.seed) + ": rho " + fmt_g(s.rho) + " > 1 + " +
                     fmt_g(cfg.tol.rho));
  }
  write_file(cfg, "systolic-scan.csv", csv.str(), out);
}

double period_tolerance(const ExperimentConfig& cfg, double eps) {
  return cfg.first_order ? cfg.tol.first_order_c * eps * eps : cfg.tol.period;
}

void cmd_spectrum(const ExperimentConfig& cfg, CommandOutput* out) {
  const GridPtr grid = make_grid(cfg);
  Checker check(out);
  CsvWriter csv("spectrum", {"seed", "eps", "chart", "w_re", "w_im", "base_x", "base_y", "base_z",
                             "morse_index", "s_value", "predicted", "found", "error",
                             "fiber_distance", "converged"});
  for (const ProfileCase& c : profile_cases(cfg)) {
    const SpectrumCase s = run_spectrum_case(c.f, grid, cfg.first_order);
    const double tol = period_tolerance(cfg, c.eps);
    spdlog::info("seed {} eps {:.3g}: {} critical fibers, max period error {:.3e}", c.seed, c.eps,
                 s.criticals.points.size(), s.report.max_error);
    for (const VariationalEntry& e : s.report.entries) {
      const CriticalFiber& cf = e.critical;
      csv.cell(c.seed).cell(c.eps).cell(cf.chart).cell(cf.w.real()).cell(cf.w.imag())
          .cell(cf.base[0]).cell(cf.base[1]).cell(cf.base[2]).cell(cf.index).cell(cf.value)
          .cell(e.predicted).cell(e.found).cell(e.error).cell(e.fiber_distance)
          .cell(e.converged);
      csv.end_row();
      check.expect(e.converged && e.error < tol,
                   "seed " + std::to_string(c.seed) + ": period error " + fmt_g(e.error) +
                       " at S = " + fmt_g(cf.value) + (e.converged ? "" : " (" + e.message + ")"));
    }
    if (!s.criticals.degenerate) {
      check.expect(s.report.converged >= 2,
                   "seed " + std::to_string(c.seed) + ": fewer than 2 orbits at critical fibers");
    }
  }
  write_file(cfg, "spectrum.csv", csv.str(), out);
}

void cmd_normal_form(const ExperimentConfig& cfg, CommandOutput* out) {
  const GridPtr grid = make_grid(cfg);
  Checker check(out);
  json cases = json::array();
  for (const ProfileCase& c : profile_cases(cfg)) {
    const SpectrumCase s = run_spectrum_case(c.f, grid, cfg.first_order);
    const NormalFormResult& nf = s.normal;
    const BaseFunction shat = BaseFunction::from_field(nf.split.S);
    const double tol = period_tolerance(cfg, c.eps);
    json residuals = {{"s_invariance", num(nf.split.s_invariance)},
                      {"eta_reeb", num(nf.split.eta_reeb)},
                      {"f_mean", num(nf.split.f_mean)},
                      {"reconstruction", num(nf.split.reconstruction)},
                      {"lift", num(s.lift_residual)}};
    if (nf.bottkol) {
      residuals["bottkol_history"] = num_list(nf.bottkol->residual_history);
      residuals["zero_average"] = num(nf.bottkol->zero_average_residual);
      residuals["orthogonality"] = num(nf.bottkol->orthogonality_residual);
      residuals["invariance"] = num(nf.bottkol->invariance_residual);
    }
    json crit = json::array();
    for (const VariationalEntry& e : s.report.entries) {
      crit.push_back({{"chart", e.critical.chart},
                      {"coord", {num(e.critical.w.real()), num(e.critical.w.imag())}},
                      {"S_value", num(e.critical.value)},
                      {"morse_index", e.critical.index},
                      {"period_predicted", num(e.predicted)},
                      {"period_found", e.converged ? num(e.found) : json(nullptr)},
                      {"error", num(e.error)}});
      check.expect(e.converged && e.error < tol,
                   "seed " + std::to_string(c.seed) + ": period error " + fmt_g(e.error));
    }
    spdlog::info("seed {} eps {:.3g}: |S-1| {:.3e} |eta| {:.3e} |f| {:.3e}", c.seed, c.eps,
                 nf.s_deviation, nf.eta_norm, nf.f_norm);
    json doc = profile_json(c);
    doc["mode"] = nf.first_order ? "first_order" : "normal_form";
    doc["S_stats"] = {{"min", num(shat.inf())}, {"max", num(shat.sup())}};
    doc["s_deviation"] = num(nf.s_deviation);
    doc["eta_norm"] = num(nf.eta_norm);
    doc["f_norm"] = num(nf.f_norm);
    doc["residuals"] = residuals;
    doc["critical_fibers"] = crit;
    doc["period_tolerance"] = num(tol);
    cases.push_back(doc);
    check.expect(nf.split.eta_reeb < cfg.tol.constraint && nf.split.f_mean < cfg.tol.constraint &&
                     nf.split.s_invariance < cfg.tol.constraint,
                 "seed " + std::to_string(c.seed) + ": split constraints violated");
  }
  write_json(cfg, "normal-form.json", {{"command", "normal-form"}, {"cases", cases}}, out);
}

void cmd_volume_check(const ExperimentConfig& cfg, CommandOutput* out) {
  const GridPtr grid = make_grid(cfg);
  Checker check(out);
  json cases = json::array();
  double worst_gap = 0.0, worst_p1 = 0.0;
  for (const VolumeCase& v : run_volume_cases(grid, cfg.seed, cfg.volume_cases)) {
    const VolumeIdentityReport& r = v.report;
    const double p1_rel = std::abs(r.p1_integral) / std::abs(r.lhs);
    worst_gap = std::max(worst_gap, r.relative_gap);
    worst_p1 = std::max(worst_p1, p1_rel);
    cases.push_back({{"seed", v.seed},
                     {"lhs", num(r.lhs)},
                     {"rhs", num(r.rhs)},
                     {"s2_term", num(r.s2_term)},
                     {"cross_term", num(r.cross_term)},
                     {"eta_term", num(r.eta_term)},
                     {"relative_gap", num(r.relative_gap)},
                     {"p1_integral", num(r.p1_integral)},
                     {"eta_contraction", num(r.eta_contraction)}});
    check.expect(r.relative_gap < cfg.tol.volume_gap,
                 "seed " + std::to_string(v.seed) + ": relative gap " + fmt_g(r.relative_gap));
    check.expect(p1_rel < cfg.tol.volume_gap,
                 "seed " + std::to_string(v.seed) + ": p1 share " + fmt_g(p1_rel));
  }
  spdlog::info("volume identity: max gap {:.3e}, max p1 share {:.3e}", worst_gap, worst_p1);
  write_json(cfg, "volume-check.json",
             {{"command", "volume-check"},
              {"cases", cases},
              {"max_relative_gap", num(worst_gap)},
              {"max_p1_share", num(worst_p1)}},
             out);
}

void cmd_shadow(const ExperimentConfig& cfg, CommandOutput* out) {
  Checker check(out);
  json cases = json::array();
  for (int i = 0; i < cfg.shadow_cases; ++i) {
    const auto [n, k] = cfg.shadow_dims[i % cfg.shadow_dims.size()];
    const ShadowCase s = run_shadow_case(n, k, cfg.seed + i, cfg.samples);
    const double floor = std::pow(kPi, k);
    const double allowed = std::max(3.0 * s.report.mc_stderr / s.report.exact_volume,
                                    cfg.tol.shadow_floor);
    spdlog::info("n {} k {} seed {}: exact {:.6f} mc {:.6f} +- {:.2e}", n, k, s.seed,
                 s.report.exact_volume, s.report.mc_volume, s.report.mc_stderr);
    cases.push_back({{"n", n},
                     {"k", k},
                     {"seed", s.seed},
                     {"exact", num(s.report.exact_volume)},
                     {"mc", num(s.report.mc_volume)},
                     {"mc_stderr", num(s.report.mc_stderr)},
                     {"wirtinger", num(s.report.wirtinger_value)},
                     {"samples", s.report.sample_count},
                     {"relative_gap", num(s.relative_gap)},
                     {"allowed_gap", num(allowed)}});
    check.expect(s.relative_gap < allowed, "seed " + std::to_string(s.seed) +
                                               ": Monte Carlo gap " + fmt_g(s.relative_gap));
    check.expect(s.report.exact_volume >= floor * (1.0 - 1e-12),
                 "seed " + std::to_string(s.seed) + ": exact volume below pi^k");
  }
  const std::vector<double> angles{0.0, 0.5, 1.0, 1.3, 1.45, 1.5, 1.54};
  json probes = json::array();
  for (const auto& [n, k] : cfg.shadow_dims) {
    const auto ps = coercivity_probe(n, k, cfg.seed, cfg.samples, angles);
    json rows = json::array();
    for (const CoercivityProbe& p : ps) {
      rows.push_back({{"angle", num(p.angle)},
                      {"wirtinger", num(p.wirtinger)},
                      {"exact", num(p.exact)},
                      {"mc", num(p.mc)},
                      {"mc_stderr", num(p.mc_stderr)}});
    }
    probes.push_back({{"n", n}, {"k", k}, {"probes", rows}});
    check.expect(ps.back().exact > 10.0 * std::pow(kPi, k),
                 "coercivity n " + std::to_string(n) + " k " + std::to_string(k) +
                     ": volume " + fmt_g(ps.back().exact) + " <= 10 pi^k");
  }
  write_json(cfg, "shadow.json",
             {{"command", "shadow"}, {"cases", cases}, {"coercivity", probes}}, out);
}

void cmd_genfun_roundtrip(const ExperimentConfig& cfg, CommandOutput* out) {
  Checker check(out);
  const GenfunCheck g = run_genfun_check(cfg.seed);
  spdlog::info("genfun: rotation {:.2e} round trip {:.2e} straighten {:.2e} symplectic {:.2e}",
               g.rotation_error, g.roundtrip_error, g.straighten_error, g.symplecticity);
  check.expect(g.rotation_error < cfg.tol.genfun_rotation, "rotation error " + fmt_g(g.rotation_error));
  check.expect(g.roundtrip_error < cfg.tol.genfun_roundtrip, "round trip error " + fmt_g(g.roundtrip_error));
  check.expect(g.straighten_error < cfg.tol.straighten, "straightening error " + fmt_g(g.straighten_error));
  check.expect(g.symplecticity < cfg.tol.symplecticity, "symplecticity " + fmt_g(g.symplecticity));
  write_json(cfg, "genfun-roundtrip.json",
             {{"command", "genfun-roundtrip"},
              {"seed", cfg.seed},
              {"rotation_error", num(g.rotation_error)},
              {"roundtrip_error", num(g.roundtrip_error)},
              {"roundtrip_audit", num(g.roundtrip_audit)},
              {"straighten_error", num(g.straighten_error)},
              {"symplecticity", num(g.symplecticity)},
              {"hessian_bound", num(g.hessian_bound)},
              {"curve_distance", num(g.curve_distance)}},
             out);
}

void cmd_bottkol_check(const ExperimentConfig& cfg, CommandOutput* out) {
  const GridPtr grid = make_grid(cfg);
  Checker check(out);
  const BottkolCheck b = run_bottkol_check(grid, cfg.seed);
  spdlog::info("linear: X0 -> |U| {:.1e} |V| {:.1e} |h+1| {:.1e}; random residual {:.2e}", b.x0_u,
               b.x0_v, b.x0_h, b.random_residual);
  const double rep = std::max({b.x0_u, b.x0_v, b.x0_h});
  check.expect(rep < cfg.tol.representation, "W = X0 solve off by " + fmt_g(rep));
  check.expect(b.random_residual < cfg.tol.linear_residual,
               "linear residual " + fmt_g(b.random_residual));

  json newton = json::array();
  for (const ProfileCase& c : profile_cases(cfg)) {
    const BottkolResult r = bottkol_newton(c.f, grid);
    const auto& h = r.residual_history;
    const double drop = h.front() / std::max(h.back(), std::numeric_limits<double>::min());
    const double constraints =
        std::max({r.zero_average_residual, r.orthogonality_residual, r.invariance_residual});
    spdlog::info("seed {} eps {:.3g}: residual {:.2e} -> {:.2e} in {} iterations", c.seed, c.eps,
                 h.front(), h.back(), r.iterations);
    json doc = profile_json(c);
    doc["history"] = num_list(h);
    doc["drop"] = num(drop);
    doc["iterations"] = r.iterations;
    doc["converged"] = r.converged;
    doc["zero_average"] = num(r.zero_average_residual);
    doc["orthogonality"] = num(r.orthogonality_residual);
    doc["invariance"] = num(r.invariance_residual);
    doc["max_displacement"] = num(r.max_displacement);
    newton.push_back(doc);
    const std::string tag = "seed " + std::to_string(c.seed) + ": ";
    check.expect(r.converged && drop >= cfg.tol.newton_drop && r.iterations <= 10,
                 tag + "Newton drop " + fmt_g(drop) + " in " + std::to_string(r.iterations));
    check.expect(constraints < cfg.tol.constraint, tag + "constraints " + fmt_g(constraints));
  }
  write_json(cfg, "bottkol-check.json",
             {{"command", "bottkol-check"},
              {"seed", cfg.seed},
              {"linear",
               {{"x0_u", num(b.x0_u)},
                {"x0_v", num(b.x0_v)},
                {"x0_h_plus_1", num(b.x0_h)},
                {"x0_residual", num(b.x0_residual)},
                {"random_residual", num(b.random_residual)},
                {"perturbed_residual", num(b.perturbed_residual)},
                {"rotation_symmetry", num(b.rotation_symmetry)}}},
              {"newton", newton}},
             out);
}

}  // namespace

CommandOutput run_command(const ExperimentConfig& cfg) {
  CommandOutput out;
  const std::string& c = cfg.command;
  if (c == "systolic-scan") {
    cmd_systolic_scan(cfg, &out);
  } else if (c == "spectrum") {
    cmd_spectrum(cfg, &out);
  } else if (c == "volume-check") {
    cmd_volume_check(cfg, &out);
  } else if (c == "shadow") {
    cmd_shadow(cfg, &out);
  } else if (c == "genfun-roundtrip") {
    cmd_genfun_roundtrip(cfg, &out);
  } else if (c == "bottkol-check") {
    cmd_bottkol_check(cfg, &out);
  } else if (c == "normal-form") {
    cmd_normal_form(cfg, &out);
  } else {
    throw ConfigError(0, "unknown command '" + c + "'");
  }
  out.exit_code = out.failures.empty() ? kExitPass : kExitTolerance;
  return out;
}

int cli_main(int argc, char** argv) {
  CLI::App app{"zoll-lab: experiments on contact forms near the round sphere"};
  app.require_subcommand(1, 1);
  std::string config_path;
  long seed = -1;
  std::string out_dir;
  long samples = 0;
  std::vector<double> eps;
  int verbose = 0;
  for (const std::string& name : known_commands()) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config", config_path, "experiment config (JSON)");
    sub->add_option("--seed", seed, "override the seed")->check(CLI::NonNegativeNumber);
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--samples", samples, "Monte Carlo samples")->check(CLI::PositiveNumber);
    sub->add_option("--eps", eps, "perturbation sizes for generated profiles")
        ->check(CLI::Range(0.0, 0.499));
    sub->add_flag("-v,--verbose", verbose, "log numeric dumps");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitConfig;
  }
  spdlog::set_level(verbose > 0 ? spdlog::level::debug : spdlog::level::info);
  const std::string command = app.get_subcommands().front()->get_name();
  try {
    ExperimentConfig cfg = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
    if (!cfg.command.empty() && cfg.command != command) {
      throw ConfigError(0, "config is for '" + cfg.command + "', not '" + command + "'");
    }
    cfg.command = command;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (samples > 0) cfg.samples = samples;
    if (!eps.empty()) cfg.generator.eps = eps;
    const CommandOutput out = run_command(cfg);
    for (const std::string& f : out.failures) std::fprintf(stderr, "FAIL %s\n", f.c_str());
    return out.exit_code;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s failed: %s\n", command.c_str(), e.what());
    return kExitInternal;
  }
}

}  // namespace zoll::cli
