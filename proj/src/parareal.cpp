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

#include "pintbs/parareal.hpp"

#include <chrono>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <ostream>

#include "pintbs/analytic.hpp"
#include "pintbs/parallel.hpp"

namespace pintbs {

namespace {

bool same_bits(const FieldD& a, const FieldD& b) { return (a.values().array() == b.values().array()).all(); }

[[noreturn]] void rethrow_with_context(int slice, int iteration, const char* phase) {
  const std::string what = std::string(phase) + " propagator failed on slice " + std::to_string(slice) +
                           " in iteration " + std::to_string(iteration);
  try {
    throw;
  } catch (const std::exception& e) {
    std::throw_with_nested(PropagationError(what + ": " + e.what(), slice, iteration));
  }
}

FieldD checked_advance(const PropagatorSpec& spec, const FieldD& u, const TimePartition& part, int n, int iteration,
                       const ModelParams& p, const char* phase) {
  try {
    return advance(spec, u, part.boundary(n), part.boundary(n + 1), p);
  } catch (...) {
    rethrow_with_context(n, iteration, phase);
  }
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

void TimePartition::validate() const {
  if (p_time < 1) throw std::invalid_argument("TimePartition: need at least one slice");
  if (!(t_end > t0)) throw std::invalid_argument("TimePartition: t_end must exceed t0");
}

Trajectory serial_fine_reference(const FieldD& u0, const TimePartition& part, const PropagatorSpec& fine,
                                 const ModelParams& p) {
  part.validate();
  Trajectory traj;
  traj.reserve(static_cast<std::size_t>(part.p_time) + 1);
  traj.push_back(u0);
  for (int n = 0; n < part.p_time; ++n) traj.push_back(checked_advance(fine, traj.back(), part, n, 0, p, "fine"));
  return traj;
}

PararealState parareal_run(const FieldD& u0, const TimePartition& part, const PropagatorSpec& fine,
                           const PropagatorSpec& coarse, int K, const ModelParams& p, const PararealOptions& opt) {
  part.validate();
  fine.validate();
  coarse.validate();
  if (K < 1) throw std::invalid_argument("parareal_run: K must be >= 1");
  if (opt.slice_workers < 0) throw std::invalid_argument("parareal_run: slice_workers must be >= 0");
  if (opt.reference && (opt.reference->size() != static_cast<std::size_t>(part.p_time) + 1 ||
                        !(opt.reference->back().grid() == u0.grid())))
    throw ShapeError("parareal_run: reference trajectory does not match the partition or grid");

  const auto t_start = std::chrono::steady_clock::now();
  const int P = part.p_time;
  const auto endpoint_error = [&](const PararealState& s) { return relative_error(s.u.back(), opt.reference->back()); };

  PararealState s;
  s.u.reserve(static_cast<std::size_t>(P) + 1);
  s.u.push_back(u0);
  for (int n = 0; n < P; ++n) {
    s.coarse.push_back(checked_advance(coarse, s.u[static_cast<std::size_t>(n)], part, n, 0, p, "coarse"));
    s.u.push_back(s.coarse.back());
  }
  if (opt.reference) s.initial_error = endpoint_error(s);

  const int workers = opt.concurrent ? (opt.slice_workers > 0 ? std::min(opt.slice_workers, P) : P) : 1;
  WorkerPool pool(workers);
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(P));
  std::vector<FieldD> next_fine(s.coarse);

  for (int k = 1; k <= K; ++k) {
    // Fine phase: F(u_n^{k-1}) for every slice whose start value changed.
    std::vector<int> todo;
    for (int n = 0; n < P; ++n) {
      const auto i = static_cast<std::size_t>(n);
      if (k == 1 || !same_bits(s.u[i], s.prev[i])) todo.push_back(n);
      else next_fine[i] = s.fine[i];
    }
    pool.run(static_cast<Eigen::Index>(todo.size()), [&](Eigen::Index b) {
      const int n = todo[static_cast<std::size_t>(b)];
      try {
        next_fine[static_cast<std::size_t>(n)] = checked_advance(fine, s.u[static_cast<std::size_t>(n)], part, n, k, p, "fine");
      } catch (...) {
        failures[static_cast<std::size_t>(n)] = std::current_exception();
      }
    });
    for (const auto& f : failures)
      if (f) std::rethrow_exception(f);
    s.fine = next_fine;

    // Serial correction sweep. Writing it as F + (G_new - G_old) makes an
    // unchanged start value reproduce F exactly.
    s.prev = s.u;
    for (int n = 0; n < P; ++n) {
      const auto i = static_cast<std::size_t>(n);
      FieldD g_new =
          same_bits(s.u[i], s.prev[i]) ? s.coarse[i] : checked_advance(coarse, s.u[i], part, n, k, p, "coarse");
      FieldD next = s.fine[i];
      next += g_new - s.coarse[i];
      s.coarse[i] = std::move(g_new);
      s.u[i + 1] = std::move(next);
    }
    s.k = k;
    if (opt.reference) s.error_history.push_back(endpoint_error(s));
  }
  s.seconds = seconds_since(t_start);
  return s;
}

// ---------------------------------------------------------------------------
// Experiment drivers

PropagatorSpec StudyConfig::fine() const {
  PropagatorSpec s = PropagatorSpec::fine();
  s.solver = fine_solver;
  s.solver.workers = p_space;
  return s;
}

PropagatorSpec StudyConfig::coarse(PropagatorKind kind, std::shared_ptr<const FnoModel> model) const {
  PropagatorSpec s;
  switch (kind) {
    case PropagatorKind::CoarseNumeric: s = PropagatorSpec::coarse_numeric(); break;
    case PropagatorKind::CoarseFno: s = PropagatorSpec::coarse_fno(std::move(model)); break;
    case PropagatorKind::FineNumeric: throw ConfigurationError("fine_numeric is not a coarse propagator");
  }
  s.solver = coarse_solver;
  s.solver.workers = p_space;
  return s;
}

std::vector<ConvergenceRow> convergence_rows(const std::string& kind, int p_time, const PararealState& s) {
  std::vector<ConvergenceRow> rows;
  if (s.initial_error) rows.push_back({kind, p_time, 0, *s.initial_error});
  for (std::size_t k = 0; k < s.error_history.size(); ++k)
    rows.push_back({kind, p_time, static_cast<int>(k) + 1, s.error_history[k]});
  return rows;
}

namespace {

PararealState run_study(const StudyConfig& cfg, const PropagatorSpec& coarse) {
  const TimePartition part{0.0, cfg.params.maturity, cfg.p_time};
  const FieldD u0 = analytic_field<double>(cfg.grid, 0.0, cfg.params);
  const PropagatorSpec fine = cfg.fine();
  const Trajectory ref = serial_fine_reference(u0, part, fine, cfg.params);
  PararealOptions opt;
  opt.concurrent = cfg.concurrent;
  opt.reference = &ref;
  return parareal_run(u0, part, fine, coarse, cfg.k, cfg.params, opt);
}

}  // namespace

std::vector<ConvergenceRow> convergence_study(const StudyConfig& cfg, const std::vector<PropagatorKind>& kinds,
                                              std::shared_ptr<const FnoModel> model, std::ostream* warn) {
  std::vector<ConvergenceRow> rows;
  for (const auto kind : kinds) {
    if (kind == PropagatorKind::CoarseFno && !model) {
      if (warn) *warn << "warning: no FNO weights supplied, skipping the fno coarse propagator\n";
      rows.push_back({to_string(kind), cfg.p_time, -1, std::numeric_limits<double>::quiet_NaN()});
      continue;
    }
    const auto part = convergence_rows(to_string(kind), cfg.p_time, run_study(cfg, cfg.coarse(kind, model)));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

std::vector<ConvergenceRow> weak_scaling_study(const StudyConfig& base, const std::vector<int>& p_values,
                                               PropagatorKind kind, std::shared_ptr<const FnoModel> model) {
  if (p_values.empty()) throw std::invalid_argument("weak_scaling_study: no slice counts given");
  std::vector<ConvergenceRow> rows;
  for (const int P : p_values) {
    if (P < 1 || P % p_values.front() != 0) throw std::invalid_argument("weak_scaling_study: slice counts must be multiples of the first");
    const Eigen::Index factor = P / p_values.front();
    StudyConfig cfg = base;
    cfg.p_time = P;
    cfg.grid = Grid2D((base.grid.nx() - 1) * factor + 1, (base.grid.ny() - 1) * factor + 1, base.grid.x_max(),
                      base.grid.y_max());
    const auto part = convergence_rows(to_string(kind), P, run_study(cfg, cfg.coarse(kind, model)));
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

ModelParams with_parameter(ModelParams p, const std::string& axis, double value) {
  if (axis == "r") p.r = value;
  else if (axis == "sigma1") p.sigma1 = value;
  else if (axis == "sigma2") p.sigma2 = value;
  else throw std::invalid_argument("unknown sweep axis '" + axis + "' (expected r, sigma1 or sigma2)");
  p.validate();
  return p;
}

std::vector<SweepRow> parameter_sweep(const StudyConfig& base, const std::string& axis, const std::vector<double>& values,
                                      PropagatorKind kind, std::shared_ptr<const FnoModel> model) {
  std::vector<SweepRow> rows;
  for (const double v : values) {
    StudyConfig cfg = base;
    cfg.params = with_parameter(base.params, axis, v);
    for (const auto& r : convergence_rows(to_string(kind), cfg.p_time, run_study(cfg, cfg.coarse(kind, model))))
      rows.push_back({axis, v, r.k, r.rel_error});
  }
  return rows;
}

double measure_serial_fine(const StudyConfig& cfg) {
  const TimePartition part{0.0, cfg.params.maturity, cfg.p_time};
  const FieldD u0 = analytic_field<double>(cfg.grid, 0.0, cfg.params);
  const auto t0 = std::chrono::steady_clock::now();
  const Trajectory ref = serial_fine_reference(u0, part, cfg.fine(), cfg.params);
  return seconds_since(t0);
}

RuntimeRow measure_runtime(const StudyConfig& cfg, const PropagatorSpec& coarse, double serial_seconds) {
  if (!(serial_seconds > 0.0)) throw std::invalid_argument("measure_runtime: serial time must be positive");
  const TimePartition part{0.0, cfg.params.maturity, cfg.p_time};
  const FieldD u0 = analytic_field<double>(cfg.grid, 0.0, cfg.params);
  PararealOptions opt;
  opt.concurrent = cfg.concurrent;
  const auto s = parareal_run(u0, part, cfg.fine(), coarse, cfg.k, cfg.params, opt);
  return {to_string(coarse.kind), cfg.p_time, cfg.p_space, cfg.k, s.seconds, serial_seconds / s.seconds};
}

void write_convergence_csv(std::ostream& out, const std::vector<ConvergenceRow>& rows) {
  out << "coarse_kind,p_time,k,rel_error\n";
  for (const auto& r : rows) {
    out << r.coarse_kind << ',' << r.p_time << ',';
    if (r.k < 0) out << ",skipped\n";
    else out << r.k << ',' << std::setprecision(9) << r.rel_error << '\n';
  }
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  out << "axis,value,k,rel_error\n";
  for (const auto& r : rows) out << r.axis << ',' << r.value << ',' << r.k << ',' << std::setprecision(9) << r.rel_error << '\n';
}

void write_runtime_csv(std::ostream& out, const std::vector<RuntimeRow>& rows) {
  out << "coarse_kind,p_time,p_space,k,seconds,speedup_vs_serial_fine\n";
  for (const auto& r : rows)
    out << r.coarse_kind << ',' << r.p_time << ',' << r.p_space << ',' << r.k << ',' << std::setprecision(6) << r.seconds
        << ',' << r.speedup_vs_serial_fine << '\n';
}

}  // namespace pintbs
