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

#include "zoll_cli/config.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "json.hpp"

namespace zoll::cli {

namespace {

using json = nlohmann::json;

int line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Finds "key" followed by ':' after `from`; nlohmann does not keep source
// positions, so keys are located textually along their path.
class KeyLocator {
 public:
  explicit KeyLocator(const std::string& text) : text_(text) {}

  std::size_t find(const std::vector<std::string>& path) const {
    std::size_t pos = 0;
    for (const std::string& key : path) {
      const std::string quoted = "\"" + key + "\"";
      std::size_t p = pos;
      while (true) {
        p = text_.find(quoted, p);
        if (p == std::string::npos) return pos;
        std::size_t q = p + quoted.size();
        while (q < text_.size() && std::isspace(static_cast<unsigned char>(text_[q]))) ++q;
        if (q < text_.size() && text_[q] == ':') break;
        p += quoted.size();
      }
      pos = p;
    }
    return pos;
  }
  int line(const std::vector<std::string>& path) const { return line_at(text_, find(path)); }

 private:
  const std::string& text_;
};

class Reader {
 public:
  Reader(const std::string& text, const KeyLocator& loc) : text_(text), loc_(loc) {}

  [[noreturn]] void fail(const std::vector<std::string>& path, const std::string& msg) const {
    std::string name;
    for (const auto& p : path) name += (name.empty() ? "" : ".") + p;
    throw ConfigError(loc_.line(path), "'" + name + "': " + msg);
  }

  void check_keys(const json& obj, const std::vector<std::string>& path,
                  const std::set<std::string>& allowed) const {
    if (!obj.is_object()) fail(path, "expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (!allowed.count(it.key())) {
        auto p = path;
        p.push_back(it.key());
        fail(p, "unknown key");
      }
    }
  }

  double number(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_number()) fail(path, "expected a number");
    return v.get<double>();
  }
  long integer(const json& v, const std::vector<std::string>& path, long lo) const {
    if (!v.is_number_integer()) fail(path, "expected an integer");
    const long x = v.get<long>();
    if (x < lo) fail(path, "must be at least " + std::to_string(lo));
    return x;
  }
  bool boolean(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_boolean()) fail(path, "expected true or false");
    return v.get<bool>();
  }
  std::string string(const json& v, const std::vector<std::string>& path) const {
    if (!v.is_string()) fail(path, "expected a string");
    return v.get<std::string>();
  }
  std::vector<double> numbers(const json& v, const std::vector<std::string>& path) const {
    if (v.is_number()) return {v.get<double>()};
    if (!v.is_array() || v.empty()) fail(path, "expected a number or a non-empty array");
    std::vector<double> out;
    for (const auto& e : v) out.push_back(number(e, path));
    return out;
  }

 private:
  const std::string& text_;
  const KeyLocator& loc_;
};

}  // namespace

const std::vector<std::string>& known_commands() {
  static const std::vector<std::string> cmds{"systolic-scan",    "spectrum",      "volume-check",
                                             "shadow",           "genfun-roundtrip",
                                             "bottkol-check",    "normal-form"};
  return cmds;
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    const std::string what = e.what();
    const std::size_t colon = what.find(": ");
    throw ConfigError(line_at(text, e.byte > 0 ? e.byte - 1 : 0),
                      "malformed JSON" +
                          (colon == std::string::npos ? "" : " (" + what.substr(colon + 2) + ")"));
  }
  const KeyLocator loc(text);
  const Reader r(text, loc);
  r.check_keys(doc, {}, {"command", "seed", "profile", "generator", "ellipsoid_sweep", "grid",
                         "spectrum", "shadow", "volume", "tolerances", "output"});
  ExperimentConfig c;
  if (doc.contains("command")) {
    c.command = r.string(doc["command"], {"command"});
    const auto& k = known_commands();
    if (std::find(k.begin(), k.end(), c.command) == k.end()) {
      r.fail({"command"}, "unknown command '" + c.command + "'");
    }
  }
  if (doc.contains("seed")) c.seed = static_cast<std::uint64_t>(r.integer(doc["seed"], {"seed"}, 0));
  if (doc.contains("profile")) {
    if (!doc["profile"].is_object()) r.fail({"profile"}, "expected an object");
    c.profile_json = doc["profile"].dump();
  }
  if (doc.contains("generator")) {
    const json& g = doc["generator"];
    r.check_keys(g, {"generator"}, {"eps", "degree", "count", "invariant"});
    if (g.contains("eps")) {
      c.generator.eps = r.numbers(g["eps"], {"generator", "eps"});
      for (double e : c.generator.eps) {
        if (!(e >= 0.0 && e < 0.5)) r.fail({"generator", "eps"}, "values must lie in [0, 0.5)");
      }
    }
    if (g.contains("degree")) c.generator.degree = static_cast<int>(r.integer(g["degree"], {"generator", "degree"}, 1));
    if (g.contains("count")) c.generator.count = static_cast<int>(r.integer(g["count"], {"generator", "count"}, 1));
    if (g.contains("invariant")) c.generator.invariant = r.boolean(g["invariant"], {"generator", "invariant"});
  }
  if (doc.contains("ellipsoid_sweep")) {
    const json& e = doc["ellipsoid_sweep"];
    r.check_keys(e, {"ellipsoid_sweep"}, {"r2"});
    if (!e.contains("r2")) r.fail({"ellipsoid_sweep"}, "missing 'r2'");
    c.ellipsoid_r2 = r.numbers(e["r2"], {"ellipsoid_sweep", "r2"});
    for (double v : c.ellipsoid_r2) {
      if (!(v >= 1.0)) r.fail({"ellipsoid_sweep", "r2"}, "radii must be >= 1");
    }
  }
  if (doc.contains("grid")) {
    const json& g = doc["grid"];
    r.check_keys(g, {"grid"}, {"polar_nodes", "azimuth_nodes", "fiber_modes"});
    if (g.contains("polar_nodes")) c.grid.polar_nodes = static_cast<int>(r.integer(g["polar_nodes"], {"grid", "polar_nodes"}, 2));
    if (g.contains("azimuth_nodes")) c.grid.azimuth_nodes = static_cast<int>(r.integer(g["azimuth_nodes"], {"grid", "azimuth_nodes"}, 0));
    if (g.contains("fiber_modes")) c.grid.fiber_modes = static_cast<int>(r.integer(g["fiber_modes"], {"grid", "fiber_modes"}, 1));
  }
  if (doc.contains("spectrum")) {
    const json& s = doc["spectrum"];
    r.check_keys(s, {"spectrum"}, {"halfwidth", "mode", "base_seeds"});
    if (s.contains("halfwidth")) {
      c.halfwidth = r.number(s["halfwidth"], {"spectrum", "halfwidth"});
      if (!(c.halfwidth > 0.0)) r.fail({"spectrum", "halfwidth"}, "must be positive");
    }
    if (s.contains("mode")) {
      const std::string m = r.string(s["mode"], {"spectrum", "mode"});
      if (m != "normal_form" && m != "first_order") {
        r.fail({"spectrum", "mode"}, "expected 'normal_form' or 'first_order'");
      }
      c.first_order = (m == "first_order");
    }
    if (s.contains("base_seeds")) c.base_seeds = static_cast<int>(r.integer(s["base_seeds"], {"spectrum", "base_seeds"}, 0));
  }
  if (doc.contains("shadow")) {
    const json& s = doc["shadow"];
    r.check_keys(s, {"shadow"}, {"samples", "cases", "dims"});
    if (s.contains("samples")) c.samples = r.integer(s["samples"], {"shadow", "samples"}, 10000);
    if (s.contains("cases")) c.shadow_cases = static_cast<int>(r.integer(s["cases"], {"shadow", "cases"}, 1));
    if (s.contains("dims")) {
      const json& d = s["dims"];
      if (!d.is_array() || d.empty()) r.fail({"shadow", "dims"}, "expected a list of [n, k] pairs");
      c.shadow_dims.clear();
      for (const auto& p : d) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number_integer()) {
          r.fail({"shadow", "dims"}, "expected a list of [n, k] pairs");
        }
        const int n = p[0].get<int>(), k = p[1].get<int>();
        if (n < 2 || k < 1 || k >= n) r.fail({"shadow", "dims"}, "need 1 <= k < n");
        c.shadow_dims.emplace_back(n, k);
      }
    }
  }
  if (doc.contains("volume")) {
    const json& v = doc["volume"];
    r.check_keys(v, {"volume"}, {"cases"});
    if (v.contains("cases")) c.volume_cases = static_cast<int>(r.integer(v["cases"], {"volume", "cases"}, 1));
  }
  if (doc.contains("tolerances")) {
    const json& t = doc["tolerances"];
    const std::map<std::string, double*> fields{
        {"rho", &c.tol.rho},
        {"period", &c.tol.period},
        {"first_order_c", &c.tol.first_order_c},
        {"volume_gap", &c.tol.volume_gap},
        {"linear_residual", &c.tol.linear_residual},
        {"representation", &c.tol.representation},
        {"newton_drop", &c.tol.newton_drop},
        {"constraint", &c.tol.constraint},
        {"shadow_floor", &c.tol.shadow_floor},
        {"genfun_rotation", &c.tol.genfun_rotation},
        {"genfun_roundtrip", &c.tol.genfun_roundtrip},
        {"straighten", &c.tol.straighten},
        {"symplecticity", &c.tol.symplecticity}};
    std::set<std::string> allowed;
    for (const auto& [k, p] : fields) allowed.insert(k);
    r.check_keys(t, {"tolerances"}, allowed);
    for (auto it = t.begin(); it != t.end(); ++it) {
      const double v = r.number(it.value(), {"tolerances", it.key()});
      if (!(v > 0.0)) r.fail({"tolerances", it.key()}, "must be positive");
      *fields.at(it.key()) = v;
    }
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    r.check_keys(o, {"output"}, {"dir"});
    if (o.contains("dir")) c.out_dir = r.string(o["dir"], {"output", "dir"});
  }
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(0, "cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace zoll::cli
