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

// Inference-only Fourier neural operator used as a Parareal coarse propagator.
//
// Layout conventions
//   * A feature map with C channels on an nx-by-ny grid is a C x (nx*ny)
//     float matrix; column n = i*ny + j holds the channel vector of node (i, j).
//     Read as a flat buffer this is the (nx, ny, C) row-major tensor with the
//     channel index fastest.
//   * Spectral layers keep the real-input spectrum block
//       kx in {0..m-1} U {nx-m..nx-1},  ky in {0..m-1}
//     (2m x m complex coefficients per channel). Mode index q in [0, 2m) maps
//     to kx = q for q < m and kx = nx - 2m + q otherwise.
//   * Forward transform: X(kx,ky) = sum_ij x(i,j) exp(-2 pi i (kx i/nx + ky j/ny)).
//     Inverse: x(i,j) = Re sum w(ky) X(kx,ky) exp(+...) / (nx ny), w(0) = 1,
//     w(ky>0) = 2, which is what a half-spectrum (rfft-style) inverse does.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "pintbs/core.hpp"

namespace pintbs {

/// Raised by the FNO1 reader: wrong magic or version.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised by the FNO1 reader: payload shorter or longer than the header implies.
struct CorruptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a model holds non-finite weights or non-positive variances.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Model architecture or grid incompatible with the requested evaluation.
struct ConfigurationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// C x (nx*ny) feature map, see the layout notes above.
struct FeatureMap {
  Eigen::Index nx = 0;
  Eigen::Index ny = 0;
  Eigen::MatrixXf data;

  Eigen::Index channels() const { return data.rows(); }
  Eigen::Index nodes() const { return nx * ny; }
};

struct FnoArchitecture {
  int width = 64;
  int modes = 12;
  int layers = 4;
  int in_channels = 4;

  void validate() const;
};

/// Weights of one Fourier layer.
struct SpectralLayer {
  /// mode_weights[q * m + ky] is the (out x in) complex mixing matrix of mode (q, ky).
  std::vector<Eigen::MatrixXcf> mode_weights;
  Eigen::MatrixXf bypass_w;  // out x in
  Eigen::VectorXf bypass_b;
  Eigen::VectorXf bn_scale;
  Eigen::VectorXf bn_shift;
  Eigen::VectorXf bn_mean;
  Eigen::VectorXf bn_var;
};

struct FnoModel {
  static constexpr float kBatchNormEps = 1e-5f;

  FnoArchitecture arch;
  Eigen::MatrixXf lift_w;  // width x in_channels
  Eigen::VectorXf lift_b;
  std::vector<SpectralLayer> layers;
  Eigen::RowVectorXf proj_w;  // 1 x width
  float proj_b = 0.0f;

  /// All weights and biases zero, batch-norm statistics neutral (mean 0, var 1).
  static FnoModel zeros(const FnoArchitecture& arch);
  /// Gaussian weights scaled by fan-in, seeded; used for fixtures and timing.
  static FnoModel random(const FnoArchitecture& arch, std::uint64_t seed);

  /// Shape and finiteness checks; throws ValidationError / ConfigurationError.
  void validate() const;
};

/// FNO1 weight file; see docs/fno1_format.md for the byte layout.
void save_weights(std::ostream& out, const FnoModel& m);
void save_weights(const std::filesystem::path& path, const FnoModel& m);
FnoModel load_weights(std::istream& in);
FnoModel load_weights(const std::filesystem::path& path);

/// Network input for one coarse step: channels (u/cash, x/x_max, y/y_max, dt/T).
FeatureMap encode_input(const FieldF& u, double dt, const ModelParams& p);

/// One spectral convolution of `layer` applied to `input` (width channels).
/// Throws ConfigurationError if the retained modes do not fit the grid.
FeatureMap spectral_conv(const FeatureMap& input, const SpectralLayer& layer, int modes);

/// Lifting, Fourier layers (spectral + bypass, batch norm, ReLU except after
/// the last layer), projection; the result is scaled by `cash`.
FieldF fno_forward(const FnoModel& m, const FeatureMap& input, const Grid2D& grid, double cash);

/// encode_input + fno_forward on the grid of `u`. Any grid with
/// floor(min(nx, ny)/2) >= modes is accepted.
FieldF fno_coarse_advance(const FnoModel& m, const FieldF& u, double t_from, double t_to, const ModelParams& p);

/// Input tensors paired with the output a reference implementation produced.
struct FixturePair {
  FeatureMap input;
  Eigen::VectorXf expected;  // nx*ny network outputs, before scaling by cash
};

/// FNOF fixture file; see docs/fno1_format.md.
void save_fixtures(std::ostream& out, const std::vector<FixturePair>& pairs);
void save_fixtures(const std::filesystem::path& path, const std::vector<FixturePair>& pairs);
std::vector<FixturePair> load_fixtures(std::istream& in);
std::vector<FixturePair> load_fixtures(const std::filesystem::path& path);

struct ParityReport {
  std::size_t pairs = 0;
  double max_rel_l2 = 0.0;
};

/// Replays every fixture through fno_forward and reports the worst relative l2 gap.
ParityReport check_parity(const FnoModel& m, const std::vector<FixturePair>& pairs);

}  // namespace pintbs
