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

#include "pintbs/perf_models.hpp"

#include <algorithm>
#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

namespace pintbs {

void CostInputs::validate() const {
  if (!(c_fine > 0.0) || !(c_coarse > 0.0)) throw std::invalid_argument("CostInputs: costs must be positive");
  if (k < 1 || p_time < 1 || p_space < 1) throw std::invalid_argument("CostInputs: K and processor counts must be >= 1");
}

SpeedupBound parareal_bound(const CostInputs& ci) {
  ci.validate();
  const double kp = static_cast<double>(ci.k) / ci.p_time;
  SpeedupBound b;
  b.value = 1.0 / ((1.0 + kp) * (ci.c_coarse / ci.c_fine) + kp);
  b.cost_ratio = ci.c_fine / ci.c_coarse;
  b.iteration_ratio = 1.0 / kp;
  b.cap = std::min(b.cost_ratio, b.iteration_ratio);
  return b;
}

double spacetime_bound(const CostInputs& ci) { return ci.p_space * parareal_bound(ci).value; }

double spatial_bound(const CostInputs& ci) {
  ci.validate();
  return ci.p_space;
}

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& s, const char* column, int line) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw CsvParseError(std::string("column ") + column + ": cannot parse '" + s + "'", line);
  return v;
}

}  // namespace

std::vector<MeasuredRun> parse_runtime_csv(std::istream& in) {
  const std::string header = "coarse_kind,p_time,p_space,k,seconds,speedup_vs_serial_fine";
  std::string line;
  int lineno = 0;
  if (!std::getline(in, line)) throw CsvParseError("empty runtime CSV", 1);
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != header) throw CsvParseError("expected header '" + header + "'", lineno);
  std::vector<MeasuredRun> runs;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto c = split(line);
    if (c.size() != 6) throw CsvParseError("expected 6 columns, found " + std::to_string(c.size()), lineno);
    MeasuredRun r;
    r.coarse_kind = c[0];
    r.p_time = parse_number<int>(c[1], "p_time", lineno);
    r.p_space = parse_number<int>(c[2], "p_space", lineno);
    r.k = parse_number<int>(c[3], "k", lineno);
    r.seconds = parse_number<double>(c[4], "seconds", lineno);
    r.speedup = parse_number<double>(c[5], "speedup_vs_serial_fine", lineno);
    runs.push_back(r);
  }
  return runs;
}

std::vector<ComparisonRow> compare_measured(const SliceCosts& costs, const std::vector<MeasuredRun>& runs) {
  std::vector<ComparisonRow> rows;
  for (const auto& r : runs) {
    const auto it = costs.c_coarse.find(r.coarse_kind);
    if (it == costs.c_coarse.end()) throw std::invalid_argument("compare_measured: no coarse cost for '" + r.coarse_kind + "'");
    const double bound = spacetime_bound({costs.c_fine, it->second, r.k, r.p_time, r.p_space});
    rows.push_back({r, bound, r.speedup / bound, r.speedup > bound});
  }
  return rows;
}

void write_comparison_markdown(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "| coarse | P_time | P_space | K | measured S | bound S | efficiency | status |\n"
      << "|---|---:|---:|---:|---:|---:|---:|---|\n";
  for (const auto& r : rows)
    out << "| " << r.run.coarse_kind << " | " << r.run.p_time << " | " << r.run.p_space << " | " << r.run.k << " | "
        << std::setprecision(4) << r.run.speedup << " | " << r.bound << " | " << r.efficiency << " | "
        << (r.exceeds_bound ? "EXCEEDS BOUND (instrumentation error)" : "ok") << " |\n";
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "coarse_kind,p_time,p_space,k,measured_speedup,bound_speedup,efficiency,exceeds_bound\n";
  for (const auto& r : rows)
    out << r.run.coarse_kind << ',' << r.run.p_time << ',' << r.run.p_space << ',' << r.run.k << ','
        << std::setprecision(6) << r.run.speedup << ',' << r.bound << ',' << r.efficiency << ','
        << (r.exceeds_bound ? 1 : 0) << '\n';
}

}  // namespace pintbs
