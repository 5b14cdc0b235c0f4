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

#include "pintbs/implicit_euler.hpp"

#include <chrono>
#include <iomanip>
#include <ostream>

namespace pintbs {

namespace {

template <typename Scalar>
void zero_boundary(Field<Scalar>& f) {
  auto& v = f.values();
  v.row(0).setZero();
  v.row(v.rows() - 1).setZero();
  v.col(0).setZero();
  v.col(v.cols() - 1).setZero();
}

}  // namespace

template <typename Scalar>
Field<Scalar> implicit_euler_step(const Field<Scalar>& u, double t_from, double t_to, const ModelParams& p,
                                  const CgConfig& cfg, std::vector<SolveStat>* stats, int step) {
  if (!(t_to > t_from)) throw std::invalid_argument("implicit_euler_step: t_to must exceed t_from");
  const double dt = t_to - t_from;
  const auto& grid = u.grid();
  const StencilOperator<Scalar> op(grid, p, dt);

  // Dirichlet lift: g carries boundary data only; A g on interior rows is the
  // coupling to the known boundary values.
  Field<Scalar> g(grid);
  apply_dirichlet(g, t_to, p);
  Field<Scalar> rhs = u - apply_operator(op, g);
  zero_boundary(rhs);

  Field<Scalar> x0 = u;
  zero_boundary(x0);

  const auto t0 = std::chrono::steady_clock::now();
  SolveResult<Scalar> res{.x = Field<Scalar>(grid)};
  try {
    res = cg_solve(op, rhs, x0, cfg);
  } catch (const SolverBreakdown& e) {
    std::ostringstream msg;
    msg << "implicit Euler step " << step << " (dt=" << dt << "): " << e.what();
    throw ConvergenceError(msg.str());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (stats)
    stats->push_back({step, dt, precision_of<Scalar>(), cfg.workers, res.iterations, res.final_residual, secs, res.method});
  if (!res.converged) {
    std::ostringstream msg;
    msg << "implicit Euler step " << step << " (dt=" << dt << "): solver stalled at relative residual "
        << res.final_residual << " after " << res.iterations << " iterations";
    throw ConvergenceError(msg.str());
  }
  Field<Scalar> out = std::move(res.x);
  out += g;
  if (!out.all_finite()) throw NumericError("implicit_euler_step: non-finite solution");
  return out;
}

template FieldF implicit_euler_step<float>(const FieldF&, double, double, const ModelParams&, const CgConfig&,
                                           std::vector<SolveStat>*, int);
template FieldD implicit_euler_step<double>(const FieldD&, double, double, const ModelParams&, const CgConfig&,
                                            std::vector<SolveStat>*, int);

void write_solve_stats_csv(std::ostream& out, const std::vector<SolveStat>& stats) {
  out << "step,dt,precision,workers,method,iterations,residual,seconds\n";
  for (const auto& s : stats) {
    out << s.step << ',' << std::setprecision(10) << s.dt << ',' << to_string(s.precision) << ',' << s.workers << ','
        << (s.method == KrylovMethod::Cg ? "cg" : "bicgstab") << ',' << s.iterations << ',' << std::setprecision(6)
        << s.residual << ',' << s.seconds << '\n';
  }
}

}  // namespace pintbs
