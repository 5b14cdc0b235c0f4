// Copyright 2026 The pintbs Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pintbs/config.hpp"

#include <fstream>
#include <regex>
#include <set>

#include <json.hpp>

namespace pintbs {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.contains(key)) throw ConfigError("unknown config key '" + (where.empty() ? key : where + "." + key) + "'");
}

template <typename T>
void take(const json& obj, const char* key, T& dst, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    dst = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("config key '" + (where.empty() ? std::string(key) : where + "." + key) + "': " + e.what());
  }
}

}  // namespace

StudyConfig RunConfig::study() const {
  StudyConfig s;
  s.grid = grid();
  s.params = params;
  s.p_time = p_time;
  s.k = k;
  s.p_space = p_space;
  s.concurrent = concurrent;
  s.fine_solver = fine_solver;
  s.coarse_solver = coarse_solver;
  return s;
}

void RunConfig::validate() const {
  try {
    params.validate();
    (void)grid();
    fine_solver.validate();
    coarse_solver.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (p_time < 1) throw ConfigError("p_time must be >= 1");
  if (p_space < 1) throw ConfigError("p_space must be >= 1");
  if (k < 1) throw ConfigError("k must be >= 1");
}

PropagatorKind parse_coarse_kind(const std::string& s) {
  if (s == "numeric") return PropagatorKind::CoarseNumeric;
  if (s == "fno") return PropagatorKind::CoarseFno;
  throw ConfigError("coarse must be 'numeric' or 'fno', got '" + s + "'");
}

std::pair<Eigen::Index, Eigen::Index> parse_grid_spec(const std::string& s) {
  static const std::regex re(R"(([0-9]+)[xX]([0-9]+))");
  std::smatch m;
  if (!std::regex_match(s, m, re)) throw ConfigError("grid must look like NXxNY, got '" + s + "'");
  try {
    return {std::stoll(m[1].str()), std::stoll(m[2].str())};
  } catch (const std::out_of_range&) {
    throw ConfigError("grid size out of range: '" + s + "'");
  }
}

RunConfig parse_config(std::istream& in) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(j, {"model", "grid", "solver", "p_time", "p_space", "k", "coarse", "weights", "out", "seed", "concurrent"}, "");

  RunConfig c;
  if (j.contains("model")) {
    const auto& m = j["model"];
    reject_unknown(m, {"sigma1", "sigma2", "rho", "r", "s1", "s2", "cash", "maturity"}, "model");
    take(m, "sigma1", c.params.sigma1, "model");
    take(m, "sigma2", c.params.sigma2, "model");
    take(m, "rho", c.params.rho, "model");
    take(m, "r", c.params.r, "model");
    take(m, "s1", c.params.s1, "model");
    take(m, "s2", c.params.s2, "model");
    take(m, "cash", c.params.cash, "model");
    take(m, "maturity", c.params.maturity, "model");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    reject_unknown(g, {"nx", "ny", "x_max", "y_max"}, "grid");
    take(g, "nx", c.nx, "grid");
    take(g, "ny", c.ny, "grid");
    take(g, "x_max", c.x_max, "grid");
    take(g, "y_max", c.y_max, "grid");
  }
  if (j.contains("solver")) {
    const auto& s = j["solver"];
    reject_unknown(s, {"fine_rel_tol", "coarse_rel_tol", "max_iters", "method", "bicgstab_fallback"}, "solver");
    take(s, "fine_rel_tol", c.fine_solver.rel_tol, "solver");
    take(s, "coarse_rel_tol", c.coarse_solver.rel_tol, "solver");
    int max_iters = c.fine_solver.max_iters;
    take(s, "max_iters", max_iters, "solver");
    c.fine_solver.max_iters = c.coarse_solver.max_iters = max_iters;
    std::string method = "bicgstab";
    take(s, "method", method, "solver");
    if (method != "bicgstab" && method != "cg") throw ConfigError("solver.method must be 'cg' or 'bicgstab'");
    c.fine_solver.method = c.coarse_solver.method = method == "cg" ? KrylovMethod::Cg : KrylovMethod::BiCgStab;
    bool fallback = false;
    take(s, "bicgstab_fallback", fallback, "solver");
    c.fine_solver.bicgstab_fallback = c.coarse_solver.bicgstab_fallback = fallback;
  }
  take(j, "p_time", c.p_time, "");
  take(j, "p_space", c.p_space, "");
  take(j, "k", c.k, "");
  take(j, "seed", c.seed, "");
  take(j, "concurrent", c.concurrent, "");
  std::string coarse = "numeric", weights, out = c.out.string();
  take(j, "coarse", coarse, "");
  take(j, "weights", weights, "");
  take(j, "out", out, "");
  c.coarse = parse_coarse_kind(coarse);
  c.weights = weights;
  c.out = out;
  c.validate();
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_config(in);
}

}  // namespace pintbs
