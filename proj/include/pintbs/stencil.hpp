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

#include "pintbs/core.hpp"

namespace pintbs {

/// The nine weights of one interior row of the implicit-Euler matrix.
template <typename Scalar>
struct StencilRow {
  Scalar center;
  Scalar west, east;    // (i-1, j), (i+1, j)
  Scalar south, north;  // (i, j-1), (i, j+1)
  Scalar corner_pp;     // (i+1, j+1) and (i-1, j-1)
  Scalar corner_pm;     // (i+1, j-1) and (i-1, j+1)
};

/// Matrix-free system matrix A of one backward-Euler step for the
/// time-reversed two-asset Black-Scholes equation,
///
///   (u^{n+1} - u^n)/dt - (sigma1^2 x^2/2) u_xx - (sigma2^2 y^2/2) u_yy
///     - rho sigma1 sigma2 x y u_xy - r x u_x - r y u_y + r u = 0,
///
/// centered differences in space, so that A u^{n+1} = u^n on interior rows.
/// Boundary rows are the identity.
///
/// Weights are separable (x-only, y-only and an x*y cross factor), so the
/// operator stores per-axis arrays and rebuilds each row on the fly.
template <typename Scalar>
class StencilOperator {
 public:
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  StencilOperator(const Grid2D& grid, const ModelParams& p, double dt)
      : grid_(grid), params_(p), dt_(dt),
        x_diff_(grid.nx()), x_adv_(grid.nx()), y_diff_(grid.ny()), y_adv_(grid.ny()),
        x_(grid.nx()), y_(grid.ny()) {
    if (!(dt >= 0.0)) throw std::invalid_argument("StencilOperator: time step must be nonnegative");
    const double dx = grid.dx();
    const double dy = grid.dy();
    for (Eigen::Index i = 0; i < grid.nx(); ++i) {
      const double x = grid.x(i);
      x_diff_[i] = static_cast<Scalar>(dt * 0.5 * p.sigma1 * p.sigma1 * x * x / (dx * dx));
      x_adv_[i] = static_cast<Scalar>(dt * p.r * x / (2.0 * dx));
      x_[i] = static_cast<Scalar>(x);
    }
    for (Eigen::Index j = 0; j < grid.ny(); ++j) {
      const double y = grid.y(j);
      y_diff_[j] = static_cast<Scalar>(dt * 0.5 * p.sigma2 * p.sigma2 * y * y / (dy * dy));
      y_adv_[j] = static_cast<Scalar>(dt * p.r * y / (2.0 * dy));
      y_[j] = static_cast<Scalar>(y);
    }
    cross_ = static_cast<Scalar>(dt * p.rho * p.sigma1 * p.sigma2 / (4.0 * dx * dy));
    reaction_ = static_cast<Scalar>(1.0 + dt * p.r);
  }

  const Grid2D& grid() const { return grid_; }
  const ModelParams& params() const { return params_; }
  double dt() const { return dt_; }

  StencilRow<Scalar> row(Eigen::Index i, Eigen::Index j) const {
    const Scalar xy = cross_ * x_[i] * y_[j];
    return {
        .center = reaction_ + Scalar(2) * (x_diff_[i] + y_diff_[j]),
        .west = -x_diff_[i] + x_adv_[i],
        .east = -x_diff_[i] - x_adv_[i],
        .south = -y_diff_[j] + y_adv_[j],
        .north = -y_diff_[j] - y_adv_[j],
        .corner_pp = -xy,
        .corner_pm = xy,
    };
  }

  /// out = A u on grid rows [i0, i1). u and out are flat row-major vectors.
  void apply_rows(const Scalar* u, Scalar* out, Eigen::Index i0, Eigen::Index i1) const {
    const Eigen::Index nx = grid_.nx();
    const Eigen::Index ny = grid_.ny();
    for (Eigen::Index i = i0; i < i1; ++i) {
      const Scalar* c = u + i * ny;
      Scalar* o = out + i * ny;
      if (i == 0 || i == nx - 1) {
        std::copy(c, c + ny, o);
        continue;
      }
      const Scalar* w = c - ny;
      const Scalar* e = c + ny;
      o[0] = c[0];
      o[ny - 1] = c[ny - 1];
      const Scalar xd = x_diff_[i], xa = x_adv_[i], cx = cross_ * x_[i];
      const Scalar west = -xd + xa, east = -xd - xa;
      const Scalar base = reaction_ + Scalar(2) * xd;
      for (Eigen::Index j = 1; j < ny - 1; ++j) {
        const Scalar yd = y_diff_[j], ya = y_adv_[j];
        const Scalar xy = cx * y_[j];
        o[j] = (base + Scalar(2) * yd) * c[j] + west * w[j] + east * e[j] + (-yd + ya) * c[j - 1] +
               (-yd - ya) * c[j + 1] - xy * (e[j + 1] + w[j - 1]) + xy * (e[j - 1] + w[j + 1]);
      }
    }
  }

 private:
  Grid2D grid_;
  ModelParams params_;
  double dt_;
  Vector x_diff_, x_adv_, y_diff_, y_adv_, x_, y_;
  Scalar cross_;
  Scalar reaction_;
};

/// A u for a whole field.
template <typename Scalar>
Field<Scalar> apply_operator(const StencilOperator<Scalar>& op, const Field<Scalar>& u) {
  if (!(u.grid() == op.grid())) throw ShapeError("apply_operator: field is not on the operator grid");
  Field<Scalar> out(u.grid());
  op.apply_rows(u.values().data(), out.values().data(), 0, u.grid().nx());
  return out;
}

}  // namespace pintbs
