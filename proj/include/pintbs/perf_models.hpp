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

// Analytic Parareal speedup bounds and their comparison with measured runs.

#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pintbs {

/// Per-slice costs in seconds plus iteration and processor counts.
struct CostInputs {
  double c_fine = 1.0;
  double c_coarse = 1.0;
  int k = 1;
  int p_time = 1;
  int p_space = 1;

  void validate() const;
};

struct SpeedupBound {
  /// 1 / [(1 + K/P)(c_coarse/c_fine) + K/P]
  double value = 0.0;
  /// c_fine / c_coarse
  double cost_ratio = 0.0;
  /// P / K
  double iteration_ratio = 0.0;
  /// min(cost_ratio, iteration_ratio)
  double cap = 0.0;
};

SpeedupBound parareal_bound(const CostInputs& ci);

/// p_space times the Parareal bound; equals parareal_bound for p_space == 1.
double spacetime_bound(const CostInputs& ci);

/// Spatial-only bound: p_space.
double spatial_bound(const CostInputs& ci);

struct CsvParseError : std::runtime_error {
  CsvParseError(const std::string& what, int line) : std::runtime_error("line " + std::to_string(line) + ": " + what), line(line) {}
  int line;
};

struct MeasuredRun {
  std::string coarse_kind;
  int p_time = 0;
  int p_space = 0;
  int k = 0;
  double seconds = 0.0;
  double speedup = 0.0;
};

/// Parses the runtime CSV written by write_runtime_csv.
std::vector<MeasuredRun> parse_runtime_csv(std::istream& in);

struct ComparisonRow {
  MeasuredRun run;
  double bound = 0.0;
  double efficiency = 0.0;  // measured / bound
  bool exceeds_bound = false;
};

/// Per-slice costs: c_fine and one c_coarse per coarse kind name.
struct SliceCosts {
  double c_fine = 0.0;
  std::map<std::string, double> c_coarse;
};

/// Bounds each run with spacetime_bound; runs above their bound are flagged.
std::vector<ComparisonRow> compare_measured(const SliceCosts& costs, const std::vector<MeasuredRun>& runs);

void write_comparison_markdown(std::ostream& out, const std::vector<ComparisonRow>& rows);
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

}  // namespace pintbs
