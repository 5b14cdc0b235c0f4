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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pintbs/analytic.hpp"

using namespace pintbs;

namespace {

// Phi(x) = 1/2 + erf(x/sqrt2)/2 with erf from its Maclaurin series in long double.
long double phi_series(long double x) {
  const long double z = x / std::sqrt(2.0L);
  long double term = z, sum = z;
  for (int n = 1; n < 200; ++n) {
    term *= -z * z / n;
    sum += term / (2 * n + 1);
  }
  return 0.5L + sum / std::sqrt(std::numbers::pi_v<long double>);
}

// Gauss-Legendre nodes/weights on [-1, 1] via Newton on P_n.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(static_cast<std::size_t>(n));
  w.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5)), dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = z;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[static_cast<std::size_t>(i)] = z;
    w[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
}

// Brute-force tensor quadrature of the bivariate normal density over
// [lo, h] x [lo, k] with composite Gauss-Legendre panels.
double bvn_tensor(double h, double k, double rho) {
  std::vector<double> gx, gw;
  gauss_legendre(16, gx, gw);
  const double lo = -12.0;
  const int panels = 120;
  const auto nodes = [&](double b) {
    std::vector<std::pair<double, double>> out;
    const double len = (b - lo) / panels;
    for (int p = 0; p < panels; ++p)
      for (std::size_t q = 0; q < gx.size(); ++q)
        out.emplace_back(lo + len * (p + 0.5 * (gx[q] + 1.0)), 0.5 * len * gw[q]);
    return out;
  };
  const auto xs = nodes(h), ys = nodes(k);
  const double s = 1.0 - rho * rho;
  const double norm = 1.0 / (2.0 * std::numbers::pi * std::sqrt(s));
  long double sum = 0.0L;
  for (const auto& [x, wx] : xs) {
    long double row = 0.0L;
    for (const auto& [y, wy] : ys) row += wy * std::exp(-(x * x - 2.0 * rho * x * y + y * y) / (2.0 * s));
    sum += wx * row;
  }
  return static_cast<double>(sum) * norm;
}

}  // namespace

TEST_CASE("standard normal cdf") {
  CHECK(std_normal_cdf(0.0) == 0.5);
  CHECK(std::abs(std_normal_cdf(40.0) - 1.0) <= 1e-15);
  CHECK(std::abs(std_normal_cdf(1.0) - static_cast<double>(phi_series(1.0L))) <= 1e-12);
  CHECK(std::abs(std_normal_cdf(1.0) - 0.841344746068543) <= 1e-12);
  for (double x = -6.0; x <= 6.0; x += 0.37)
    CHECK(std::abs(std_normal_cdf(x) - static_cast<double>(phi_series(x))) <= 1e-12);
}

TEST_CASE("bivariate cdf identities") {
  CHECK(std::abs(bivariate_normal_cdf(0.0, 0.0, 0.5) - 1.0 / 3.0) <= 1e-10);
  for (int k = 0; k < 21; ++k) {
    const double rho = -0.99 + 0.099 * k;
    const double want = 0.25 + std::asin(rho) / (2.0 * std::numbers::pi);
    CHECK(std::abs(bivariate_normal_cdf(0.0, 0.0, rho) - want) <= 1e-10);
  }
  for (double a = -3.0; a <= 3.0; a += 0.6)
    for (double b = -2.5; b <= 2.5; b += 0.7)
      CHECK(std::abs(bivariate_normal_cdf(a, b, 0.0) - std_normal_cdf(a) * std_normal_cdf(b)) <= 1e-12);
}

TEST_CASE("bivariate cdf against tensor quadrature") {
  CHECK(std::abs(bivariate_normal_cdf(1.2, -0.3, 0.5) - bvn_tensor(1.2, -0.3, 0.5)) <= 1e-10);
  const double cases[][3] = {{0.4, 0.9, -0.7}, {-1.5, 2.0, 0.95}, {2.2, 1.1, -0.95}, {-0.3, -0.8, 0.3}, {1.0, 1.0, 0.999}};
  for (const auto& c : cases) CHECK(std::abs(bivariate_normal_cdf(c[0], c[1], c[2]) - bvn_tensor(c[0], c[1], c[2])) <= 1e-10);
}

TEST_CASE("bivariate cdf properties") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> d(-4.0, 4.0), r(-0.999, 0.999);
  for (int s = 0; s < 200; ++s) {
    const double a = d(rng), b = d(rng), rho = r(rng);
    const double v = bivariate_normal_cdf(a, b, rho);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
    CHECK(std::abs(v - bivariate_normal_cdf(b, a, rho)) <= 1e-14);
    CHECK(std::abs(v + bivariate_normal_cdf(-a, b, -rho) - std_normal_cdf(b)) <= 1e-9);
  }
  CHECK_THROWS_AS(bivariate_normal_cdf(std::nan(""), 0.0, 0.1), std::invalid_argument);
  // |rho| = 1 is clamped, not rejected.
  CHECK(std::abs(bivariate_normal_cdf(0.3, 0.5, 1.0) - std_normal_cdf(0.3)) <= 1e-6);
}

TEST_CASE("terminal payoff") {
  const ModelParams p;
  CHECK(terminal_payoff(150, 150, p) == 1.0);
  CHECK(terminal_payoff(99, 150, p) == 0.0);
  CHECK(terminal_payoff(150, 99, p) == 0.0);
  CHECK(terminal_payoff(100, 100, p) == 1.0);
}

TEST_CASE("closed form price") {
  const ModelParams p;
  CHECK(std::abs(closed_form_price(200, 200, 1e-12, p) - 1.0) <= 1e-12);
  CHECK(closed_form_price(150, 80, 0.0, p) == 0.0);
  CHECK(closed_form_price(0.0, 120, 0.5, p) == 0.0);

  const double d = (1.0 - 0.045) / 0.3;
  const double want = std::exp(-1.0) * bvn_tensor(d, d, 0.5);
  CHECK(std::abs(closed_form_price(100, 100, 1.0, p) - want) <= 1e-10);

  for (double x = 5; x <= 300; x += 17)
    for (double y = 5; y <= 300; y += 23) {
      const double u = closed_form_price(x, y, 0.7, p);
      CHECK(u >= 0.0);
      CHECK(u <= std::exp(-p.r * 0.7) + 1e-15);
    }
}

TEST_CASE("analytic field") {
  const ModelParams p;
  const Grid2D g = Grid2D::benchmark();
  const FieldD payoff = analytic_field<double>(g, 0.0, p);
  CHECK(payoff(100, 100) == 1.0);
  CHECK(payoff(99, 250) == 0.0);

  const FieldD u = analytic_field<double>(g, 1.0, p);
  for (Eigen::Index j = 0; j < g.ny(); j += 15)
    for (Eigen::Index i = 1; i < g.nx(); ++i) CHECK(u(i, j) - u(i - 1, j) >= -1e-15);
  CHECK(u(100, 100) == doctest::Approx(closed_form_price(100, 100, 1.0, p)).epsilon(1e-15));

  const FieldD near = analytic_field<double>(g, 1e-6, p);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < g.nx(); ++i)
    for (Eigen::Index j = 0; j < g.ny(); ++j)
      if (std::abs(i - 100) >= 5 && std::abs(j - 100) >= 5) worst = std::max(worst, std::abs(near(i, j) - payoff(i, j)));
  CHECK(worst <= 1e-3);

  FieldF f(g);
  apply_dirichlet(f, 1.0, p);
  CHECK(f(300, 150) == static_cast<float>(u(300, 150)));
  CHECK(f(150, 150) == 0.0f);
}
