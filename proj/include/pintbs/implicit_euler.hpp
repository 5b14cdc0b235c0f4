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

#pragma once

#include <iosfwd>
#include <sstream>
#include <vector>

#include "pintbs/analytic.hpp"
#include "pintbs/krylov.hpp"

namespace pintbs {

/// Inner solver could not reach its tolerance (or broke down) during a time step.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// One row of solver statistics per linear solve.
struct SolveStat {
  int step = 0;
  double dt = 0.0;
  Precision precision = Precision::Double;
  int workers = 1;
  int iterations = 0;
  double residual = 0.0;
  double seconds = 0.0;
  KrylovMethod method = KrylovMethod::Cg;
};

/// CSV header `step,dt,precision,workers,method,iterations,residual,seconds`.
void write_solve_stats_csv(std::ostream& out, const std::vector<SolveStat>& stats);

/// One backward-Euler step from t_from to t_to (transformed time).
///
/// Boundary values at t_to come from the closed form and are eliminated into
/// the right-hand side, so the Krylov solve only moves interior unknowns.
/// Everything (operator, boundary data, solve) runs in Scalar.
template <typename Scalar>
Field<Scalar> implicit_euler_step(const Field<Scalar>& u, double t_from, double t_to, const ModelParams& p,
                                  const CgConfig& cfg, std::vector<SolveStat>* stats = nullptr, int step = 0);

extern template FieldF implicit_euler_step<float>(const FieldF&, double, double, const ModelParams&, const CgConfig&,
                                                  std::vector<SolveStat>*, int);
extern template FieldD implicit_euler_step<double>(const FieldD&, double, double, const ModelParams&, const CgConfig&,
                                                   std::vector<SolveStat>*, int);

/// `steps` equal backward-Euler steps over [t_from, t_to].
template <typename Scalar>
Field<Scalar> implicit_euler_steps(Field<Scalar> u, double t_from, double t_to, int steps, const ModelParams& p,
                                   const CgConfig& cfg, std::vector<SolveStat>* stats = nullptr) {
  if (steps < 1) throw std::invalid_argument("implicit_euler_steps: need at least one step");
  const double h = (t_to - t_from) / steps;
  for (int s = 0; s < steps; ++s) {
    const double a = t_from + s * h;
    const double b = (s + 1 == steps) ? t_to : t_from + (s + 1) * h;
    u = implicit_euler_step(u, a, b, p, cfg, stats, s);
  }
  return u;
}

}  // namespace pintbs
