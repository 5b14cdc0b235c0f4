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

#include "pintbs/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <span>
#include <stdexcept>

namespace pintbs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kRhoClamp = 1.0 - 1e-12;

// Half rules (positive abscissae) of the 6-, 12- and 20-point Gauss-Legendre formulas.
constexpr std::array<double, 3> kW6 = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
constexpr std::array<double, 3> kX6 = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
constexpr std::array<double, 6> kW12 = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                        0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
constexpr std::array<double, 6> kX12 = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                        0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
constexpr std::array<double, 10> kW20 = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                         0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                         0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                         0.1527533871307259};
constexpr std::array<double, 10> kX20 = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                         0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                         0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                         0.07652652113349733};

struct HalfRule {
  std::span<const double> w;
  std::span<const double> x;
};

HalfRule select_rule(int node_count, double abs_r) {
  if (node_count == 0) node_count = abs_r < 0.3 ? 6 : (abs_r < 0.75 ? 12 : 20);
  switch (node_count) {
    case 6: return {kW6, kX6};
    case 12: return {kW12, kX12};
    default: return {kW20, kX20};
  }
}

// Upper orthant probability P(X > h, Y > k); Drezner-Wesolowsky reduction as
// refined by Genz: an arcsin-substitution single integral for moderate |r| and
// an asymptotic expansion plus correction integral near |r| = 1.
double upper_orthant(double h, double k, double r, const HalfRule& rule) {
  double hk = h * k;
  double bvn = 0.0;
  if (std::abs(r) < 0.925) {
    const double hs = (h * h + k * k) / 2.0;
    const double asr = std::asin(r) / 2.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double sn = std::sin(asr * (1.0 + sign * rule.x[i]));
        bvn += rule.w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
      }
    }
    return bvn * asr / kTwoPi + std_normal_cdf(-h) * std_normal_cdf(-k);
  }

  if (r < 0.0) {
    k = -k;
    hk = -hk;
  }
  if (std::abs(r) < 1.0) {
    const double as = (1.0 - r) * (1.0 + r);
    double a = std::sqrt(as);
    const double bs = (h - k) * (h - k);
    const double c = (4.0 - hk) / 8.0;
    const double d = (12.0 - hk) / 16.0;
    bvn = a * std::exp(-(bs / as + hk) / 2.0) *
          (1.0 - c * (bs - as) * (1.0 - d * bs / 5.0) / 3.0 + c * d * as * as / 5.0);
    if (hk > -160.0) {
      const double b = std::sqrt(bs);
      bvn -= std::exp(-hk / 2.0) * std::sqrt(kTwoPi) * std_normal_cdf(-b / a) * b *
             (1.0 - c * bs * (1.0 - d * bs / 5.0) / 3.0);
    }
    a /= 2.0;
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      for (double sign : {-1.0, 1.0}) {
        const double xs = std::pow(a * (1.0 + sign * rule.x[i]), 2);
        const double asr = -(bs / xs + hk) / 2.0;
        if (asr <= -100.0) continue;
        const double rs = std::sqrt(1.0 - xs);
        const double ep = std::exp(-hk * xs / (2.0 * (1.0 + rs) * (1.0 + rs))) / rs;
        bvn += a * rule.w[i] * std::exp(asr) * (ep - (1.0 + c * xs * (1.0 + d * xs)));
      }
    }
    bvn = -bvn / kTwoPi;
  }
  if (r > 0.0) return bvn + std_normal_cdf(-std::max(h, k));
  return -bvn + std::max(0.0, std_normal_cdf(-h) - std_normal_cdf(-k));
}

}  // namespace

void BvnQuadrature::validate() const {
  if (node_count != 0 && node_count != 6 && node_count != 12 && node_count != 20)
    throw std::invalid_argument("BvnQuadrature: node_count must be 0 (auto), 6, 12 or 20");
  if (!(abs_tol > 0.0) || abs_tol > 1e-10) throw std::invalid_argument("BvnQuadrature: abs_tol must be in (0, 1e-10]");
}

double std_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double bivariate_normal_cdf(double dx, double dy, double rho, const BvnQuadrature& quad) {
  if (std::isnan(dx) || std::isnan(dy) || std::isnan(rho))
    throw std::invalid_argument("bivariate_normal_cdf: NaN argument");
  quad.validate();
  rho = std::clamp(rho, -kRhoClamp, kRhoClamp);
  constexpr double inf = std::numeric_limits<double>::infinity();
  if (dx == -inf || dy == -inf) return 0.0;
  if (dx == inf) return std_normal_cdf(dy);
  if (dy == inf) return std_normal_cdf(dx);
  const double p = upper_orthant(-dx, -dy, rho, select_rule(quad.node_count, std::abs(rho)));
  return std::clamp(p, 0.0, 1.0);
}

double terminal_payoff(double x, double y, const ModelParams& p) {
  return (x >= p.s1 && y >= p.s2) ? p.cash : 0.0;
}

namespace {

double log_moneyness_score(double s, double strike, double sigma, double r, double tau) {
  const double num = std::log(s / strike) + (r - 0.5 * sigma * sigma) * tau;
  const double den = sigma * std::sqrt(tau);
  if (den > 0.0) return num / den;
  constexpr double inf = std::numeric_limits<double>::infinity();
  // Zero volatility: the asset path is deterministic.
  return num > 0.0 ? inf : (num < 0.0 ? -inf : 0.0);
}

}  // namespace

double closed_form_price(double x, double y, double tau, const ModelParams& p) {
  if (tau < 0.0) throw std::invalid_argument("closed_form_price: negative time to maturity");
  if (tau == 0.0) return terminal_payoff(x, y, p);
  if (x <= 0.0 || y <= 0.0) return 0.0;
  const double dx = log_moneyness_score(x, p.s1, p.sigma1, p.r, tau);
  const double dy = log_moneyness_score(y, p.s2, p.sigma2, p.r, tau);
  return p.cash * std::exp(-p.r * tau) * bivariate_normal_cdf(dx, dy, p.rho);
}

template <typename Scalar>
Field<Scalar> analytic_field(const Grid2D& grid, double tau, const ModelParams& p) {
  Field<Scalar> f(grid);
  for (Eigen::Index i = 0; i < grid.nx(); ++i)
    for (Eigen::Index j = 0; j < grid.ny(); ++j)
      f(i, j) = static_cast<Scalar>(closed_form_price(grid.x(i), grid.y(j), tau, p));
  return f;
}

template <typename Scalar>
void apply_dirichlet(Field<Scalar>& f, double tau, const ModelParams& p) {
  const auto& g = f.grid();
  const auto set = [&](Eigen::Index i, Eigen::Index j) {
    f(i, j) = static_cast<Scalar>(closed_form_price(g.x(i), g.y(j), tau, p));
  };
  for (Eigen::Index j = 0; j < g.ny(); ++j) {
    set(0, j);
    set(g.nx() - 1, j);
  }
  for (Eigen::Index i = 1; i + 1 < g.nx(); ++i) {
    set(i, 0);
    set(i, g.ny() - 1);
  }
}

template FieldF analytic_field<float>(const Grid2D&, double, const ModelParams&);
template FieldD analytic_field<double>(const Grid2D&, double, const ModelParams&);
template void apply_dirichlet<float>(FieldF&, double, const ModelParams&);
template void apply_dirichlet<double>(FieldD&, double, const ModelParams&);

}  // namespace pintbs
