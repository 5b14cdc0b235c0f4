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

// Slow double-precision FNO forward pass written straight from the layer
// definitions, used as an oracle for the production GEMM pipeline.

#pragma once

#include <complex>
#include <numbers>
#include <random>
#include <vector>

#include "pintbs/fno.hpp"

namespace pintbs::testing {

using Tensor = std::vector<std::vector<double>>;  // [channel][i * ny + j]

inline Tensor to_tensor(const FeatureMap& f) {
  Tensor t(static_cast<std::size_t>(f.channels()), std::vector<double>(static_cast<std::size_t>(f.nodes())));
  for (Eigen::Index c = 0; c < f.channels(); ++c)
    for (Eigen::Index n = 0; n < f.nodes(); ++n) t[static_cast<std::size_t>(c)][static_cast<std::size_t>(n)] = f.data(c, n);
  return t;
}

inline FeatureMap to_map(const Tensor& t, Eigen::Index nx, Eigen::Index ny) {
  FeatureMap f{nx, ny, Eigen::MatrixXf(static_cast<Eigen::Index>(t.size()), nx * ny)};
  for (std::size_t c = 0; c < t.size(); ++c)
    for (std::size_t n = 0; n < t[c].size(); ++n) f.data(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(n)) = static_cast<float>(t[c][n]);
  return f;
}

inline Tensor reference_spectral(const Tensor& in, Eigen::Index nx, Eigen::Index ny, const SpectralLayer& l, int m) {
  using C = std::complex<double>;
  const std::size_t width = in.size();
  const std::size_t out_w = static_cast<std::size_t>(l.mode_weights.front().rows());
  Tensor out(out_w, std::vector<double>(static_cast<std::size_t>(nx * ny), 0.0));
  const double two_pi = 2.0 * std::numbers::pi;
  for (int q = 0; q < 2 * m; ++q) {
    const Eigen::Index kx = q < m ? q : nx - 2 * m + q;
    for (int ky = 0; ky < m; ++ky) {
      std::vector<C> coeff(width);
      for (std::size_t c = 0; c < width; ++c)
        for (Eigen::Index i = 0; i < nx; ++i)
          for (Eigen::Index j = 0; j < ny; ++j)
            coeff[c] += in[c][static_cast<std::size_t>(i * ny + j)] *
                        std::polar(1.0, -two_pi * (static_cast<double>(kx * i) / nx + static_cast<double>(ky * j) / ny));
      const auto& w = l.mode_weights[static_cast<std::size_t>(q * m + ky)];
      const double weight = (ky == 0 ? 1.0 : 2.0) / static_cast<double>(nx * ny);
      for (std::size_t o = 0; o < out_w; ++o) {
        C mixed = 0.0;
        for (std::size_t c = 0; c < width; ++c)
          mixed += C(w(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(c))) * coeff[c];
        for (Eigen::Index i = 0; i < nx; ++i)
          for (Eigen::Index j = 0; j < ny; ++j)
            out[o][static_cast<std::size_t>(i * ny + j)] +=
                weight * (mixed * std::polar(1.0, two_pi * (static_cast<double>(kx * i) / nx + static_cast<double>(ky * j) / ny))).real();
      }
    }
  }
  return out;
}

/// Network output before the cash scaling.
inline std::vector<double> reference_forward(const FnoModel& m, const FeatureMap& input) {
  const Eigen::Index nx = input.nx, ny = input.ny;
  const std::size_t nodes = static_cast<std::size_t>(nx * ny);
  const Tensor x = to_tensor(input);
  const std::size_t width = static_cast<std::size_t>(m.arch.width);
  Tensor h(width, std::vector<double>(nodes));
  for (std::size_t o = 0; o < width; ++o)
    for (std::size_t n = 0; n < nodes; ++n) {
      double s = m.lift_b[static_cast<Eigen::Index>(o)];
      for (std::size_t c = 0; c < x.size(); ++c) s += m.lift_w(static_cast<Eigen::Index>(o), static_cast<Eigen::Index>(c)) * x[c][n];
      h[o][n] = s;
    }
  for (std::size_t li = 0; li < m.layers.size(); ++li) {
    const auto& l = m.layers[li];
    Tensor s = reference_spectral(h, nx, ny, l, m.arch.modes);
    for (std::size_t o = 0; o < width; ++o) {
      const auto oi = static_cast<Eigen::Index>(o);
      const double inv_std = 1.0 / std::sqrt(static_cast<double>(l.bn_var[oi]) + static_cast<double>(FnoModel::kBatchNormEps));
      for (std::size_t n = 0; n < nodes; ++n) {
        double v = s[o][n] + l.bypass_b[oi];
        for (std::size_t c = 0; c < width; ++c) v += l.bypass_w(oi, static_cast<Eigen::Index>(c)) * h[c][n];
        v = (v - l.bn_mean[oi]) * inv_std * l.bn_scale[oi] + l.bn_shift[oi];
        if (li + 1 < m.layers.size()) v = std::max(v, 0.0);
        s[o][n] = v;
      }
    }
    h = std::move(s);
  }
  std::vector<double> out(nodes, m.proj_b);
  for (std::size_t n = 0; n < nodes; ++n)
    for (std::size_t c = 0; c < width; ++c) out[n] += m.proj_w[static_cast<Eigen::Index>(c)] * h[c][n];
  return out;
}

inline FeatureMap random_input(Eigen::Index nx, Eigen::Index ny, int channels, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<float> u(0.0f, 1.0f);
  FeatureMap f{nx, ny, Eigen::MatrixXf(channels, nx * ny)};
  for (Eigen::Index k = 0; k < f.data.size(); ++k) f.data.data()[k] = u(rng);
  return f;
}

/// Fixture pairs whose expected outputs come from reference_forward.
inline std::vector<FixturePair> reference_fixtures(const FnoModel& m, int count, std::uint64_t seed) {
  std::vector<FixturePair> pairs;
  for (int k = 0; k < count; ++k) {
    const Eigen::Index nx = 8 + (k % 3) * 2, ny = 8 + (k % 4);
    FixturePair p{random_input(nx, ny, m.arch.in_channels, seed + static_cast<std::uint64_t>(k)), Eigen::VectorXf(nx * ny)};
    const auto out = reference_forward(m, p.input);
    for (std::size_t n = 0; n < out.size(); ++n) p.expected[static_cast<Eigen::Index>(n)] = static_cast<float>(out[n]);
    pairs.push_back(std::move(p));
  }
  return pairs;
}

}  // namespace pintbs::testing
