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

/// Quadrature setting for the bivariate normal CDF. node_count selects the
/// Gauss-Legendre rule (6, 12 or 20 points); 0 picks by |rho| the way Genz's
/// BVND does.
struct BvnQuadrature {
  int node_count = 0;
  double abs_tol = 1e-10;

  void validate() const;
};

/// Phi(x) through erfc, accurate to roughly machine precision in both tails.
double std_normal_cdf(double x);

/// P(X <= dx, Y <= dy) for standard normals with correlation rho.
/// |rho| is clamped to 1 - 1e-12. Throws std::invalid_argument on NaN input.
double bivariate_normal_cdf(double dx, double dy, double rho, const BvnQuadrature& quad = {});

/// Cash-or-nothing payoff: cash if x >= s1 and y >= s2, else 0.
double terminal_payoff(double x, double y, const ModelParams& p);

/// Closed-form price at remaining time tau:
///   cash * exp(-r tau) * B(d_x, d_y; rho)
/// with d_x = [ln(x/s1) + (r - sigma1^2/2) tau] / (sigma1 sqrt(tau)) and d_y alike.
/// tau == 0 returns the payoff; a zero asset price with tau > 0 is absorbed (price 0).
double closed_form_price(double x, double y, double tau, const ModelParams& p);

/// closed_form_price sampled at every node; computed in double, stored as Scalar.
template <typename Scalar>
Field<Scalar> analytic_field(const Grid2D& grid, double tau, const ModelParams& p);

/// Overwrites the boundary ring of `f` with the closed form at `tau`.
template <typename Scalar>
void apply_dirichlet(Field<Scalar>& f, double tau, const ModelParams& p);

}  // namespace pintbs
