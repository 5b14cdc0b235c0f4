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

#include "pintbs/propagator.hpp"

#include <chrono>
#include <cmath>

#include "pintbs/analytic.hpp"

namespace pintbs {

const char* to_string(PropagatorKind k) {
  switch (k) {
    case PropagatorKind::FineNumeric: return "fine_numeric";
    case PropagatorKind::CoarseNumeric: return "numeric";
    case PropagatorKind::CoarseFno: return "fno";
  }
  return "?";
}

PropagatorSpec PropagatorSpec::fine(int workers) {
  PropagatorSpec s;
  s.solver.workers = workers;
  return s;
}

PropagatorSpec PropagatorSpec::coarse_numeric(int workers) {
  PropagatorSpec s{PropagatorKind::CoarseNumeric, 1, Precision::Single, nullptr, CgConfig::coarse_default()};
  s.solver.workers = workers;
  return s;
}

PropagatorSpec PropagatorSpec::coarse_fno(std::shared_ptr<const FnoModel> model) {
  return {PropagatorKind::CoarseFno, 1, Precision::Single, std::move(model), CgConfig::coarse_default()};
}

void PropagatorSpec::validate() const {
  if (substeps < 1) throw ConfigurationError("propagator: substeps must be >= 1");
  switch (kind) {
    case PropagatorKind::FineNumeric:
      if (precision != Precision::Double) throw ConfigurationError("fine propagator must run in double precision");
      break;
    case PropagatorKind::CoarseNumeric:
      break;
    case PropagatorKind::CoarseFno:
      if (!model) throw ConfigurationError("coarse_fno propagator has no FNO model");
      if (precision != Precision::Single) throw ConfigurationError("coarse_fno propagator must run in single precision");
      if (substeps != 1) throw ConfigurationError("coarse_fno propagator takes exactly one inference per slice");
      break;
  }
  solver.validate();
}

FieldD advance(const PropagatorSpec& spec, const FieldD& u, double t_from, double t_to, const ModelParams& p) {
  spec.validate();
  if (!(t_to > t_from)) throw std::invalid_argument("advance: t_to must exceed t_from");
  if (spec.kind == PropagatorKind::CoarseFno) {
    // The network predicts the whole field; boundary nodes are then reset to
    // the closed form so every propagator honours the same Dirichlet data.
    FieldF out = fno_coarse_advance(*spec.model, cast_precision<float>(u), t_from, t_to, p);
    apply_dirichlet(out, t_to, p);
    return cast_precision<double>(out);
  }
  if (spec.precision == Precision::Single) {
    const FieldF out = implicit_euler_steps(cast_precision<float>(u), t_from, t_to, spec.substeps, p, spec.solver);
    return cast_precision<double>(out);
  }
  return implicit_euler_steps(u, t_from, t_to, spec.substeps, p, spec.solver);
}

CostEstimate measure_cost(const PropagatorSpec& spec, int reps, const Grid2D& grid, const ModelParams& p, double dt) {
  if (reps < 3) throw std::invalid_argument("measure_cost: need at least 3 repetitions");
  if (!(dt > 0.0)) throw std::invalid_argument("measure_cost: dt must be positive");
  const FieldD u0 = analytic_field<double>(grid, 0.0, p);
  (void)advance(spec, u0, 0.0, dt, p);

  std::vector<double> secs;
  secs.reserve(static_cast<std::size_t>(reps));
  for (int r = 0; r < reps; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    const FieldD out = advance(spec, u0, 0.0, dt, p);
    secs.push_back(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
  }
  double mean = 0.0;
  for (double s : secs) mean += s;
  mean /= reps;
  double var = 0.0;
  for (double s : secs) var += (s - mean) * (s - mean);
  return {mean, std::sqrt(var / (reps - 1)), reps};
}

}  // namespace pintbs
