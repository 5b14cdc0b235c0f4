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

// Parareal over uniform time slices with concurrent fine evaluations.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pintbs/propagator.hpp"

namespace pintbs {

struct TimePartition {
  double t0 = 0.0;
  double t_end = 1.0;
  int p_time = 1;

  void validate() const;
  double slice_length() const { return (t_end - t0) / p_time; }
  /// T_n; boundary(p_time) is exactly t_end.
  double boundary(int n) const { return n == p_time ? t_end : t0 + n * slice_length(); }
};

/// Slice-boundary values u_0 .. u_P.
using Trajectory = std::vector<FieldD>;

/// A propagator failed inside Parareal; the original exception is nested.
struct PropagationError : std::runtime_error {
  PropagationError(const std::string& what, int slice, int iteration)
      : std::runtime_error(what), slice(slice), iteration(iteration) {}
  int slice;
  int iteration;
};

/// u_{n+1} = F(u_n), sequentially.
Trajectory serial_fine_reference(const FieldD& u0, const TimePartition& part, const PropagatorSpec& fine,
                                 const ModelParams& p);

struct PararealOptions {
  /// Run the fine evaluations of one iteration on parallel slice workers.
  bool concurrent = true;
  /// Slice worker count; 0 means one per slice.
  int slice_workers = 0;
  /// Endpoint errors are recorded against reference->back() when set.
  const Trajectory* reference = nullptr;
};

struct PararealState {
  Trajectory u;               // current iterate u_n^k, n = 0..P
  Trajectory prev;            // previous iterate u_n^{k-1}
  std::vector<FieldD> coarse; // G(u_n^k), n = 0..P-1
  std::vector<FieldD> fine;   // F(u_n^{k-1}) from the last iteration
  int k = 0;
  /// Endpoint error after the initial coarse sweep.
  std::optional<double> initial_error;
  /// error_history[k-1] is the endpoint error after iteration k.
  std::vector<double> error_history;
  double seconds = 0.0;
};

/// K Parareal iterations u^{k+1}_{n+1} = G(u^{k+1}_n) + F(u^k_n) - G(u^k_n),
/// starting from a serial coarse sweep. Coarse values are held in double
/// before the correction. Slices whose start value did not change since the
/// previous iteration reuse their cached propagator outputs, so after k
/// iterations the first k slice values equal the serial fine ones bit for bit.
PararealState parareal_run(const FieldD& u0, const TimePartition& part, const PropagatorSpec& fine,
                           const PropagatorSpec& coarse, int K, const ModelParams& p, const PararealOptions& opt = {});

// ---------------------------------------------------------------------------
// Experiment drivers

struct StudyConfig {
  Grid2D grid = Grid2D::benchmark();
  ModelParams params;
  int p_time = 12;
  int k = 4;
  int p_space = 1;
  bool concurrent = true;
  /// Worker counts in these are overridden by p_space.
  CgConfig fine_solver = CgConfig::fine_default();
  CgConfig coarse_solver = CgConfig::coarse_default();

  PropagatorSpec fine() const;
  /// Coarse spec of the given kind (numeric or fno).
  PropagatorSpec coarse(PropagatorKind kind, std::shared_ptr<const FnoModel> model) const;
};

struct ConvergenceRow {
  std::string coarse_kind;
  int p_time = 0;
  int k = 0;  // 0 is the coarse sweep; -1 marks a skipped run
  double rel_error = 0.0;
};

struct SweepRow {
  std::string axis;
  double value = 0.0;
  int k = 0;
  double rel_error = 0.0;
};

struct RuntimeRow {
  std::string coarse_kind;
  int p_time = 0;
  int p_space = 0;
  int k = 0;
  double seconds = 0.0;
  double speedup_vs_serial_fine = 0.0;
};

std::vector<ConvergenceRow> convergence_rows(const std::string& kind, int p_time, const PararealState& s);

/// Parareal error history against the serial fine endpoint for each coarse
/// kind. A fno entry without a model yields one skipped row and a warning.
std::vector<ConvergenceRow> convergence_study(const StudyConfig& cfg, const std::vector<PropagatorKind>& kinds,
                                              std::shared_ptr<const FnoModel> model, std::ostream* warn = nullptr);

/// convergence_study for each P in p_values with the grid refined alongside:
/// the spacing halves each time P doubles relative to p_values.front().
std::vector<ConvergenceRow> weak_scaling_study(const StudyConfig& base, const std::vector<int>& p_values,
                                               PropagatorKind kind, std::shared_ptr<const FnoModel> model);

/// Parameter axes accepted by parameter_sweep: "r", "sigma1", "sigma2".
ModelParams with_parameter(ModelParams p, const std::string& axis, double value);

inline const std::vector<double> kDefaultSweepValues = {0.1, 0.4, 1.0, 3.0, 5.0};

std::vector<SweepRow> parameter_sweep(const StudyConfig& base, const std::string& axis, const std::vector<double>& values,
                                      PropagatorKind kind, std::shared_ptr<const FnoModel> model);

/// Wall-clock seconds of serial_fine_reference for cfg.
double measure_serial_fine(const StudyConfig& cfg);

/// Times one Parareal run of cfg.k iterations against serial_seconds.
RuntimeRow measure_runtime(const StudyConfig& cfg, const PropagatorSpec& coarse, double serial_seconds);

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows);
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);
void write_runtime_csv(std::ostream& out, const std::vector<RuntimeRow>& rows);

}  // namespace pintbs
