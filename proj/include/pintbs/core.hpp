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
#include <cstdint>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace pintbs {

/// Raised when two fields (or a field and an operator) live on different grids.
struct ShapeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Raised when a field carries NaN or Inf where finite data is required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Precision : std::uint8_t { Single = 4, Double = 8 };

template <typename Scalar>
constexpr Precision precision_of() {
  static_assert(std::is_same_v<Scalar, float> || std::is_same_v<Scalar, double>,
                "fields are stored in float or double");
  return std::is_same_v<Scalar, float> ? Precision::Single : Precision::Double;
}

inline const char* to_string(Precision p) {
  return p == Precision::Single ? "single" : "double";
}

/// Uniform tensor-product grid over [0, x_max] x [0, y_max].
///
/// Node (i, j) sits at (i * dx, j * dy); i runs along the first asset, j along
/// the second. The outermost ring of nodes carries Dirichlet data; everything
/// else is an unknown.
class Grid2D {
 public:
  Grid2D(Eigen::Index nx, Eigen::Index ny, double x_max, double y_max)
      : nx_(nx), ny_(ny), x_max_(x_max), y_max_(y_max) {
    if (nx < 3 || ny < 3) throw std::invalid_argument("Grid2D needs at least 3 nodes per axis");
    if (!(x_max > 0.0) || !(y_max > 0.0)) throw std::invalid_argument("Grid2D extents must be positive");
    dx_ = x_max / static_cast<double>(nx - 1);
    dy_ = y_max / static_cast<double>(ny - 1);
  }

  /// The [0,300]^2 unit-spacing grid used by every benchmark run.
  static Grid2D benchmark() { return Grid2D(301, 301, 300.0, 300.0); }

  Eigen::Index nx() const { return nx_; }
  Eigen::Index ny() const { return ny_; }
  Eigen::Index size() const { return nx_ * ny_; }
  double x_max() const { return x_max_; }
  double y_max() const { return y_max_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  double x(Eigen::Index i) const { return static_cast<double>(i) * dx_; }
  double y(Eigen::Index j) const { return static_cast<double>(j) * dy_; }

  bool is_boundary(Eigen::Index i, Eigen::Index j) const {
    return i == 0 || j == 0 || i == nx_ - 1 || j == ny_ - 1;
  }

  friend bool operator==(const Grid2D& a, const Grid2D& b) {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.x_max_ == b.x_max_ && a.y_max_ == b.y_max_;
  }

 private:
  Eigen::Index nx_;
  Eigen::Index ny_;
  double x_max_;
  double y_max_;
  double dx_ = 0.0;
  double dy_ = 0.0;
};

/// Coefficients and payoff data of the two-asset cash-or-nothing problem.
/// Defaults are the benchmark setting.
struct ModelParams {
  double sigma1 = 0.3;
  double sigma2 = 0.3;
  double rho = 0.5;
  double r = 1.0;
  double s1 = 100.0;
  double s2 = 100.0;
  double cash = 1.0;
  double maturity = 1.0;

  void validate() const {
    if (!(sigma1 >= 0.0) || !(sigma2 >= 0.0)) throw std::invalid_argument("volatilities must be nonnegative");
    if (!(std::abs(rho) <= 1.0)) throw std::invalid_argument("correlation must lie in [-1, 1]");
    if (!(maturity > 0.0)) throw std::invalid_argument("maturity must be positive");
    if (!std::isfinite(r) || !std::isfinite(s1) || !std::isfinite(s2) || !std::isfinite(cash))
      throw std::invalid_argument("model parameters must be finite");
  }
};

template <typename Scalar>
using GridMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Nodal samples u(x_i, y_j) stored row-major (j fastest).
template <typename Scalar>
class Field {
 public:
  using scalar_type = Scalar;
  using Values = GridMatrix<Scalar>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  explicit Field(const Grid2D& grid) : grid_(grid), values_(Values::Zero(grid.nx(), grid.ny())) {}

  Field(const Grid2D& grid, Values values) : grid_(grid), values_(std::move(values)) {
    if (values_.rows() != grid_.nx() || values_.cols() != grid_.ny())
      throw ShapeError("field values do not match grid shape");
  }

  static Field constant(const Grid2D& grid, Scalar v) {
    return Field(grid, Values::Constant(grid.nx(), grid.ny(), v));
  }

  static constexpr Precision precision() { return precision_of<Scalar>(); }

  const Grid2D& grid() const { return grid_; }
  const Values& values() const { return values_; }
  Values& values() { return values_; }

  Scalar operator()(Eigen::Index i, Eigen::Index j) const { return values_(i, j); }
  Scalar& operator()(Eigen::Index i, Eigen::Index j) { return values_(i, j); }

  /// Flat view in storage order, index i * ny + j.
  Eigen::Map<const Vector> flat() const { return {values_.data(), values_.size()}; }
  Eigen::Map<Vector> flat() { return {values_.data(), values_.size()}; }

  bool all_finite() const { return values_.allFinite(); }

  Field& operator+=(const Field& o) { check_same_grid(o); values_ += o.values_; return *this; }
  Field& operator-=(const Field& o) { check_same_grid(o); values_ -= o.values_; return *this; }
  Field& operator*=(Scalar a) { values_ *= a; return *this; }

  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(Scalar a, Field f) { return f *= a; }

  void check_same_grid(const Field& o) const {
    if (!(grid_ == o.grid_)) throw ShapeError("fields live on different grids");
  }

 private:
  Grid2D grid_;
  Values values_;
};

using FieldF = Field<float>;
using FieldD = Field<double>;

/// Discrete l2 norm over interior nodes, weighted by the cell area dx*dy.
/// Accumulates in double regardless of storage precision.
template <typename Scalar>
double l2_norm(const Field<Scalar>& f) {
  if (!f.all_finite()) throw NumericError("l2_norm: field contains non-finite entries");
  const auto& g = f.grid();
  const auto interior = f.values().block(1, 1, g.nx() - 2, g.ny() - 2).template cast<double>();
  return std::sqrt(interior.squaredNorm() * g.dx() * g.dy());
}

/// l2_norm(f - ref) / l2_norm(ref).
template <typename Scalar>
double relative_error(const Field<Scalar>& f, const Field<Scalar>& ref) {
  f.check_same_grid(ref);
  const double denom = l2_norm(ref);
  if (denom == 0.0) throw std::domain_error("relative_error: reference field is zero on the interior");
  return l2_norm(f - ref) / denom;
}

/// Rounds (or widens) every value to the target storage type.
template <typename Target, typename Scalar>
Field<Target> cast_precision(const Field<Scalar>& f) {
  return Field<Target>(f.grid(), f.values().template cast<Target>());
}

}  // namespace pintbs
