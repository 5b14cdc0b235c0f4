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

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#if defined(__SSE__)
#include <xmmintrin.h>
#endif

#include "pintbs/parallel.hpp"
#include "pintbs/stencil.hpp"

namespace pintbs {

enum class KrylovMethod { Cg, BiCgStab };

/// Inner linear solver settings. The implicit-Euler matrix is nonsymmetric;
/// plain CG stalls on the benchmark operator, so BiCGStab is the default and
/// CG (optionally with BiCGStab fallback) is selectable.
struct CgConfig {
  double rel_tol = 1e-10;
  int max_iters = 5000;
  int workers = 1;
  KrylovMethod method = KrylovMethod::BiCgStab;
  /// With method == Cg: retry with BiCGStab when CG breaks down or stalls.
  bool bicgstab_fallback = false;

  void validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) throw std::invalid_argument("CgConfig: rel_tol must be in (0, 1)");
    if (max_iters < 1) throw std::invalid_argument("CgConfig: max_iters must be >= 1");
    if (workers < 1) throw std::invalid_argument("CgConfig: workers must be >= 1");
  }

  static CgConfig fine_default() { return {}; }
  static CgConfig coarse_default() {
    CgConfig c;
    c.rel_tol = 1e-6;
    return c;
  }
};

/// p . A p fell to or below zero; plain CG cannot continue on this system.
struct SolverBreakdown : std::runtime_error {
  SolverBreakdown(const std::string& what, int iteration)
      : std::runtime_error(what + " at iteration " + std::to_string(iteration)), iteration(iteration) {}
  int iteration;
};

template <typename Scalar>
struct SolveResult {
  Field<Scalar> x;
  int iterations = 0;
  double final_residual = 0.0;  // ||b - A x|| / ||b|| as tracked by the recurrence
  bool converged = false;
  KrylovMethod method = KrylovMethod::Cg;
};

namespace detail {

/// Sets flush-to-zero and denormals-are-zero for the current thread while in
/// scope. Solutions decay toward zero far from the strike and would otherwise
/// spend most of the solve in subnormal arithmetic.
class FlushDenormals {
 public:
#if defined(__SSE__)
  FlushDenormals() : saved_(_mm_getcsr()) { _mm_setcsr(saved_ | 0x8040u); }
  ~FlushDenormals() { _mm_setcsr(saved_); }

 private:
  unsigned saved_;
#endif
};

/// Flat vectors plus the block partition and pool used for every kernel.
/// Reductions sum per-block partials in double, in block order, which makes
/// results independent of the worker count.
template <typename Scalar>
class BlockKernels {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BlockKernels(const StencilOperator<Scalar>& op, int workers)
      : op_(op), pool_(workers), blocks_{op.grid().nx()}, ny_(op.grid().ny()),
        partial_a_(static_cast<std::size_t>(blocks_.count())),
        partial_b_(static_cast<std::size_t>(blocks_.count())) {}

  Eigen::Index size() const { return op_.grid().size(); }

  template <typename F>
  void each_block(F&& fn) {
    pool_.run(blocks_.count(), [&](Eigen::Index b) {
      FlushDenormals ftz;
      const Eigen::Index lo = blocks_.begin(b) * ny_;
      const Eigen::Index hi = blocks_.end(b) * ny_;
      fn(b, lo, hi - lo);
    });
  }

  /// Runs fn(block, offset, length) -> (a, b) and returns the ordered sums.
  template <typename F>
  std::pair<double, double> reduce2(F&& fn) {
    each_block([&](Eigen::Index b, Eigen::Index off, Eigen::Index len) {
      const auto [a, c] = fn(b, off, len);
      partial_a_[static_cast<std::size_t>(b)] = a;
      partial_b_[static_cast<std::size_t>(b)] = c;
    });
    double a = 0.0, c = 0.0;
    for (std::size_t b = 0; b < partial_a_.size(); ++b) {
      a += partial_a_[b];
      c += partial_b_[b];
    }
    return {a, c};
  }

  void matvec_rows(const Vector& in, Vector& out, Eigen::Index b) const {
    op_.apply_rows(in.data(), out.data(), blocks_.begin(b), blocks_.end(b));
  }

  /// Block-local dot product in Scalar; callers combine blocks in double.
  static double dot(const auto& a, const auto& b) { return static_cast<double>(a.dot(b)); }

 private:
  const StencilOperator<Scalar>& op_;
  WorkerPool pool_;
  RowBlocks blocks_;
  Eigen::Index ny_;
  std::vector<double> partial_a_;
  std::vector<double> partial_b_;
};

template <typename Scalar>
SolveResult<Scalar> cg(const StencilOperator<Scalar>& op, const Field<Scalar>& rhs, const Field<Scalar>& x0,
                       const CgConfig& cfg) {
  using Vector = typename BlockKernels<Scalar>::Vector;
  BlockKernels<Scalar> k(op, cfg.workers);
  const Eigen::Index n = k.size();
  const Vector b = rhs.flat();
  Vector x = x0.flat();
  Vector r(n), p(n), q(n);

  const auto [bb, rr0] = k.reduce2([&](Eigen::Index blk, Eigen::Index off, Eigen::Index len) {
    k.matvec_rows(x, q, blk);
    r.segment(off, len) = b.segment(off, len) - q.segment(off, len);
    p.segment(off, len) = r.segment(off, len);
    return std::pair{k.dot(b.segment(off, len), b.segment(off, len)), k.dot(r.segment(off, len), r.segment(off, len))};
  });

  SolveResult<Scalar> result{.x = Field<Scalar>(rhs.grid()), .method = KrylovMethod::Cg};
  const double bnorm = std::sqrt(bb);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;  // x = 0 solves A x = 0 exactly
  }
  double rr = rr0;
  double best = std::sqrt(rr) / bnorm;
  Vector best_x = x;
  int it = 0;
  while (best > cfg.rel_tol && it < cfg.max_iters) {
    ++it;
    const auto [pq, unused0] = k.reduce2([&](Eigen::Index blk, Eigen::Index off, Eigen::Index len) {
      k.matvec_rows(p, q, blk);
      return std::pair{k.dot(p.segment(off, len), q.segment(off, len)), 0.0};
    });
    if (!(pq > 0.0)) throw SolverBreakdown("cg: non-positive curvature p.Ap", it);
    const double alpha = rr / pq;
    const auto [rr_new, unused1] = k.reduce2([&](Eigen::Index, Eigen::Index off, Eigen::Index len) {
      x.segment(off, len) += static_cast<Scalar>(alpha) * p.segment(off, len);
      r.segment(off, len) -= static_cast<Scalar>(alpha) * q.segment(off, len);
      return std::pair{k.dot(r.segment(off, len), r.segment(off, len)), 0.0};
    });
    const double beta = rr_new / rr;
    rr = rr_new;
    const double res = std::sqrt(rr) / bnorm;
    if (!std::isfinite(res)) throw NumericError("cg: residual became non-finite at iteration " + std::to_string(it));
    if (res < best) {
      best = res;
      best_x = x;
    }
    k.each_block([&](Eigen::Index, Eigen::Index off, Eigen::Index len) {
      p.segment(off, len) = r.segment(off, len) + static_cast<Scalar>(beta) * p.segment(off, len);
    });
  }
  result.x.flat() = best_x;
  result.iterations = it;
  result.final_residual = best;
  result.converged = best <= cfg.rel_tol;
  return result;
}

template <typename Scalar>
SolveResult<Scalar> bicgstab(const StencilOperator<Scalar>& op, const Field<Scalar>& rhs, const Field<Scalar>& x0,
                             const CgConfig& cfg) {
  using Vector = typename BlockKernels<Scalar>::Vector;
  BlockKernels<Scalar> k(op, cfg.workers);
  const Eigen::Index n = k.size();
  const Vector b = rhs.flat();
  Vector x = x0.flat();
  Vector r(n), r_hat(n), p = Vector::Zero(n), v = Vector::Zero(n), s(n), t(n);

  const auto [bb, rr0] = k.reduce2([&](Eigen::Index blk, Eigen::Index off, Eigen::Index len) {
    k.matvec_rows(x, t, blk);
    r.segment(off, len) = b.segment(off, len) - t.segment(off, len);
    r_hat.segment(off, len) = r.segment(off, len);
    return std::pair{k.dot(b.segment(off, len), b.segment(off, len)), k.dot(r.segment(off, len), r.segment(off, len))};
  });

  SolveResult<Scalar> result{.x = Field<Scalar>(rhs.grid()), .method = KrylovMethod::BiCgStab};
  const double bnorm = std::sqrt(bb);
  if (bnorm == 0.0) {
    result.converged = true;
    return result;
  }
  double rho = 1.0, alpha = 1.0, omega = 1.0;
  double res = std::sqrt(rr0) / bnorm;
  double best = res;
  Vector best_x = x;
  int it = 0;
  while (best > cfg.rel_tol && it < cfg.max_iters) {
    ++it;
    const auto [rho_new, unused0] = k.reduce2([&](Eigen::Index, Eigen::Index off, Eigen::Index len) {
      return std::pair{k.dot(r_hat.segment(off, len), r.segment(off, len)), 0.0};
    });
    if (rho_new == 0.0 || omega == 0.0) throw SolverBreakdown("bicgstab: rho or omega vanished", it);
    const double beta = (rho_new / rho) * (alpha / omega);
    rho = rho_new;
    k.each_block([&](Eigen::Index, Eigen::Index off, Eigen::Index len) {
      p.segment(off, len) = r.segment(off, len) +
                            static_cast<Scalar>(beta) * (p.segment(off, len) - static_cast<Scalar>(omega) * v.segment(off, len));
    });
    const auto [rhv, unused2] = k.reduce2([&](Eigen::Index blk, Eigen::Index off, Eigen::Index len) {
      k.matvec_rows(p, v, blk);
      return std::pair{k.dot(r_hat.segment(off, len), v.segment(off, len)), 0.0};
    });
    if (rhv == 0.0) throw SolverBreakdown("bicgstab: r_hat.v vanished", it);
    alpha = rho / rhv;
    k.each_block([&](Eigen::Index, Eigen::Index off, Eigen::Index len) {
      s.segment(off, len) = r.segment(off, len) - static_cast<Scalar>(alpha) * v.segment(off, len);
    });
    const auto [ts, tt] = k.reduce2([&](Eigen::Index blk, Eigen::Index off, Eigen::Index len) {
      k.matvec_rows(s, t, blk);
      return std::pair{k.dot(t.segment(off, len), s.segment(off, len)), k.dot(t.segment(off, len), t.segment(off, len))};
    });
    omega = tt > 0.0 ? ts / tt : 0.0;
    const auto [rr, unused3] = k.reduce2([&](Eigen::Index, Eigen::Index off, Eigen::Index len) {
      x.segment(off, len) += static_cast<Scalar>(alpha) * p.segment(off, len) + static_cast<Scalar>(omega) * s.segment(off, len);
      r.segment(off, len) = s.segment(off, len) - static_cast<Scalar>(omega) * t.segment(off, len);
      return std::pair{k.dot(r.segment(off, len), r.segment(off, len)), 0.0};
    });
    res = std::sqrt(rr) / bnorm;
    if (!std::isfinite(res)) throw NumericError("bicgstab: residual became non-finite at iteration " + std::to_string(it));
    if (res < best) {
      best = res;
      best_x = x;
    }
  }
  result.x.flat() = best_x;
  result.iterations = it;
  result.final_residual = best;
  result.converged = best <= cfg.rel_tol;
  return result;
}

}  // namespace detail

/// Solves A x = rhs with the Krylov method in cfg, starting from x0.
///
/// A is generally nonsymmetric here (advection, cross term, variable
/// coefficients). Plain CG is applied as-is and aborts with SolverBreakdown on
/// non-positive curvature; with cfg.bicgstab_fallback set, a breakdown or a
/// stall at max_iters triggers a BiCGStab solve from x0 instead.
///
/// Kernels run on cfg.workers threads over fixed row blocks, and reductions
/// combine block partials in a fixed order, so iterates are bitwise identical
/// for every worker count. On a stall the lowest-residual iterate is returned
/// with converged == false.
template <typename Scalar>
SolveResult<Scalar> cg_solve(const StencilOperator<Scalar>& op, const Field<Scalar>& rhs, const Field<Scalar>& x0,
                             const CgConfig& cfg) {
  cfg.validate();
  if (!(rhs.grid() == op.grid()) || !(x0.grid() == op.grid()))
    throw ShapeError("cg_solve: rhs/x0 not on the operator grid");
  if (cfg.method == KrylovMethod::BiCgStab) return detail::bicgstab(op, rhs, x0, cfg);
  if (!cfg.bicgstab_fallback) return detail::cg(op, rhs, x0, cfg);
  try {
    auto res = detail::cg(op, rhs, x0, cfg);
    if (res.converged) return res;
  } catch (const SolverBreakdown&) {
  }
  return detail::bicgstab(op, rhs, x0, cfg);
}

}  // namespace pintbs
