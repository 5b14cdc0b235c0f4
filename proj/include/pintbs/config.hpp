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

// Experiment configuration. JSON layout:
//
//   {
//     "model":  {"sigma1", "sigma2", "rho", "r", "s1", "s2", "cash", "maturity"},
//     "grid":   {"nx", "ny", "x_max", "y_max"},
//     "solver": {"fine_rel_tol", "coarse_rel_tol", "max_iters", "method", "bicgstab_fallback"},
//     "p_time", "p_space", "k", "coarse", "weights", "out", "seed", "concurrent"
//   }
//
// Every key is optional; omitted keys keep the benchmark defaults.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "pintbs/parareal.hpp"

namespace pintbs {

/// Invalid or unknown configuration entry.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  ModelParams params;
  Eigen::Index nx = 301;
  Eigen::Index ny = 301;
  double x_max = 300.0;
  double y_max = 300.0;
  int p_time = 12;
  int p_space = 1;
  int k = 4;
  PropagatorKind coarse = PropagatorKind::CoarseNumeric;
  std::filesystem::path weights;
  std::filesystem::path out = "out";
  std::uint64_t seed = 0;
  bool concurrent = true;
  CgConfig fine_solver = CgConfig::fine_default();
  CgConfig coarse_solver = CgConfig::coarse_default();

  Grid2D grid() const { return Grid2D(nx, ny, x_max, y_max); }
  StudyConfig study() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;
};

RunConfig parse_config(std::istream& in);
RunConfig load_config(const std::filesystem::path& path);

/// "NXxNY" as in 301x301.
std::pair<Eigen::Index, Eigen::Index> parse_grid_spec(const std::string& s);
PropagatorKind parse_coarse_kind(const std::string& s);

}  // namespace pintbs
