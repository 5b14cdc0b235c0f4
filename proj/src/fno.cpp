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

#include "pintbs/fno.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>

#include "pintbs/little_endian.hpp"

namespace pintbs {

namespace {

constexpr std::array<char, 4> kWeightMagic = {'F', 'N', 'O', '1'};
constexpr std::array<char, 4> kFixtureMagic = {'F', 'N', 'O', 'F'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kMaxDim = 1u << 16;

void check_finite(const auto& m, const std::string& what) {
  if (!m.allFinite()) throw ValidationError("non-finite values in " + what);
}

// Dense twiddle factors for the truncated transforms on one grid.
struct Twiddles {
  Eigen::MatrixXf fwd_x;               // nx x 4m: [cos | -sin] for the 2m retained kx
  Eigen::MatrixXf fwd_y_re, fwd_y_im;  // ny x m
  Eigen::MatrixXf inv_y_re, inv_y_im;  // m x ny, includes half-spectrum weights
  Eigen::MatrixXf inv_x;               // 4m x nx: [cos; -sin] / (nx ny)

  Twiddles(Eigen::Index nx, Eigen::Index ny, int m)
      : fwd_x(nx, 4 * m), fwd_y_re(ny, m), fwd_y_im(ny, m), inv_y_re(m, ny), inv_y_im(m, ny), inv_x(4 * m, nx) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double norm = 1.0 / (static_cast<double>(nx) * static_cast<double>(ny));
    for (int q = 0; q < 2 * m; ++q) {
      const Eigen::Index kx = q < m ? q : nx - 2 * m + q;
      for (Eigen::Index i = 0; i < nx; ++i) {
        const double theta = two_pi * static_cast<double>((kx * i) % nx) / static_cast<double>(nx);
        fwd_x(i, q) = static_cast<float>(std::cos(theta));
        fwd_x(i, 2 * m + q) = static_cast<float>(-std::sin(theta));
        inv_x(q, i) = static_cast<float>(std::cos(theta) * norm);
        inv_x(2 * m + q, i) = static_cast<float>(-std::sin(theta) * norm);
      }
    }
    for (int ky = 0; ky < m; ++ky) {
      const double w = ky == 0 ? 1.0 : 2.0;
      for (Eigen::Index j = 0; j < ny; ++j) {
        const double theta = two_pi * static_cast<double>((ky * j) % ny) / static_cast<double>(ny);
        fwd_y_re(j, ky) = static_cast<float>(std::cos(theta));
        fwd_y_im(j, ky) = static_cast<float>(-std::sin(theta));
        inv_y_re(ky, j) = static_cast<float>(w * std::cos(theta));
        inv_y_im(ky, j) = static_cast<float>(w * std::sin(theta));
      }
    }
  }
};

void check_modes(Eigen::Index nx, Eigen::Index ny, int modes) {
  if (modes < 1 || 2 * static_cast<Eigen::Index>(modes) > nx || 2 * static_cast<Eigen::Index>(modes) > ny)
    throw ConfigurationError("spectral_conv: " + std::to_string(modes) + " modes do not fit a " + std::to_string(nx) +
                             "x" + std::to_string(ny) + " grid");
}

FeatureMap spectral_conv_impl(const FeatureMap& input, const SpectralLayer& layer, int m, const Twiddles& tw) {
  const Eigen::Index nx = input.nx, ny = input.ny;
  const Eigen::Index width = input.channels();
  const Eigen::Index out_width = layer.mode_weights.front().rows();

  // (c + W*j, i) view of the C x (nx*ny) map: the x transform is one GEMM
  // producing real parts in columns [0, 2m) and imaginary parts in [2m, 4m).
  const Eigen::Map<const Eigen::MatrixXf> by_x(input.data.data(), width * ny, nx);
  const Eigen::MatrixXf a = by_x * tw.fwd_x;

  Eigen::MatrixXf d(out_width * ny, 4 * m);
  Eigen::MatrixXcf mixed(out_width, m);
  Eigen::VectorXcf coeff(width);
  for (int q = 0; q < 2 * m; ++q) {
    const Eigen::Map<const Eigen::MatrixXf> aq_re(a.col(q).data(), width, ny);
    const Eigen::Map<const Eigen::MatrixXf> aq_im(a.col(2 * m + q).data(), width, ny);
    const Eigen::MatrixXf b_re = aq_re * tw.fwd_y_re - aq_im * tw.fwd_y_im;  // W x m
    const Eigen::MatrixXf b_im = aq_re * tw.fwd_y_im + aq_im * tw.fwd_y_re;
    for (int ky = 0; ky < m; ++ky) {
      coeff.real() = b_re.col(ky);
      coeff.imag() = b_im.col(ky);
      mixed.col(ky).noalias() = layer.mode_weights[static_cast<std::size_t>(q * m + ky)] * coeff;
    }
    const Eigen::MatrixXf c_re = mixed.real();
    const Eigen::MatrixXf c_im = mixed.imag();
    Eigen::Map<Eigen::MatrixXf> dq_re(d.col(q).data(), out_width, ny);
    Eigen::Map<Eigen::MatrixXf> dq_im(d.col(2 * m + q).data(), out_width, ny);
    dq_re.noalias() = c_re * tw.inv_y_re - c_im * tw.inv_y_im;
    dq_im.noalias() = c_re * tw.inv_y_im + c_im * tw.inv_y_re;
  }

  // Real part of the inverse x transform: [re | im] * [cos; -sin] / (nx ny).
  FeatureMap out{nx, ny, Eigen::MatrixXf(out_width, nx * ny)};
  Eigen::Map<Eigen::MatrixXf> out_by_x(out.data.data(), out_width * ny, nx);
  out_by_x.noalias() = d * tw.inv_x;
  return out;
}

void check_layer_shapes(const SpectralLayer& l, int width, int modes, int idx) {
  const std::string tag = "layer " + std::to_string(idx);
  if (l.mode_weights.size() != static_cast<std::size_t>(2 * modes * modes))
    throw ConfigurationError(tag + ": wrong number of spectral modes");
  for (const auto& w : l.mode_weights)
    if (w.rows() != width || w.cols() != width) throw ConfigurationError(tag + ": spectral weight shape");
  if (l.bypass_w.rows() != width || l.bypass_w.cols() != width || l.bypass_b.size() != width ||
      l.bn_scale.size() != width || l.bn_shift.size() != width || l.bn_mean.size() != width || l.bn_var.size() != width)
    throw ConfigurationError(tag + ": pointwise weight shape");
}

}  // namespace

void FnoArchitecture::validate() const {
  if (width < 1 || modes < 1 || layers < 1 || in_channels < 1 || static_cast<std::uint32_t>(width) > kMaxDim ||
      static_cast<std::uint32_t>(modes) > kMaxDim || static_cast<std::uint32_t>(layers) > kMaxDim ||
      static_cast<std::uint32_t>(in_channels) > kMaxDim)
    throw ConfigurationError("FnoArchitecture: dimensions out of range");
}

FnoModel FnoModel::zeros(const FnoArchitecture& arch) {
  arch.validate();
  const int w = arch.width, m = arch.modes;
  FnoModel model;
  model.arch = arch;
  model.lift_w = Eigen::MatrixXf::Zero(w, arch.in_channels);
  model.lift_b = Eigen::VectorXf::Zero(w);
  model.layers.resize(static_cast<std::size_t>(arch.layers));
  for (auto& l : model.layers) {
    l.mode_weights.assign(static_cast<std::size_t>(2 * m * m), Eigen::MatrixXcf::Zero(w, w));
    l.bypass_w = Eigen::MatrixXf::Zero(w, w);
    l.bypass_b = Eigen::VectorXf::Zero(w);
    l.bn_scale = Eigen::VectorXf::Zero(w);
    l.bn_shift = Eigen::VectorXf::Zero(w);
    l.bn_mean = Eigen::VectorXf::Zero(w);
    l.bn_var = Eigen::VectorXf::Ones(w);
  }
  model.proj_w = Eigen::RowVectorXf::Zero(w);
  return model;
}

FnoModel FnoModel::random(const FnoArchitecture& arch, std::uint64_t seed) {
  FnoModel model = zeros(arch);
  std::mt19937_64 rng(seed);
  std::normal_distribution<float> gauss(0.0f, 1.0f);
  std::uniform_real_distribution<float> unif(0.5f, 1.5f);
  const auto fill = [&](auto& mat, float scale) {
    for (Eigen::Index k = 0; k < mat.size(); ++k) mat.data()[k] = scale * gauss(rng);
  };
  const float w = static_cast<float>(arch.width);
  fill(model.lift_w, 1.0f / std::sqrt(static_cast<float>(arch.in_channels)));
  fill(model.lift_b, 0.1f);
  for (auto& l : model.layers) {
    const float spec_scale = 1.0f / w;
    for (auto& mw : l.mode_weights)
      for (Eigen::Index k = 0; k < mw.size(); ++k) mw.data()[k] = {spec_scale * gauss(rng), spec_scale * gauss(rng)};
    fill(l.bypass_w, 1.0f / std::sqrt(w));
    fill(l.bypass_b, 0.1f);
    for (Eigen::Index c = 0; c < arch.width; ++c) {
      l.bn_scale[c] = unif(rng);
      l.bn_shift[c] = 0.1f * gauss(rng);
      l.bn_mean[c] = 0.1f * gauss(rng);
      l.bn_var[c] = unif(rng);
    }
  }
  fill(model.proj_w, 1.0f / std::sqrt(w));
  model.proj_b = 0.1f * gauss(rng);
  return model;
}

void FnoModel::validate() const {
  arch.validate();
  const int w = arch.width;
  if (lift_w.rows() != w || lift_w.cols() != arch.in_channels || lift_b.size() != w)
    throw ConfigurationError("lifting weight shape");
  if (layers.size() != static_cast<std::size_t>(arch.layers)) throw ConfigurationError("layer count mismatch");
  if (proj_w.size() != w) throw ConfigurationError("projection weight shape");
  check_finite(lift_w, "lifting weight");
  check_finite(lift_b, "lifting bias");
  for (std::size_t li = 0; li < layers.size(); ++li) {
    const auto& l = layers[li];
    const std::string tag = "layer " + std::to_string(li);
    check_layer_shapes(l, w, arch.modes, static_cast<int>(li));
    for (const auto& mw : l.mode_weights) check_finite(mw, tag + " spectral weight");
    check_finite(l.bypass_w, tag + " bypass weight");
    check_finite(l.bypass_b, tag + " bypass bias");
    check_finite(l.bn_scale, tag + " batch-norm scale");
    check_finite(l.bn_shift, tag + " batch-norm shift");
    check_finite(l.bn_mean, tag + " batch-norm mean");
    check_finite(l.bn_var, tag + " batch-norm variance");
    if (!(l.bn_var.array() > 0.0f).all()) throw ValidationError(tag + ": batch-norm variance must be positive");
  }
  check_finite(proj_w, "projection weight");
  if (!std::isfinite(proj_b)) throw ValidationError("non-finite values in projection bias");
}

// ---------------------------------------------------------------------------
// FNO1 serialization

namespace {

template <typename Mat>
void write_tensor(std::ostream& out, const Mat& m) {
  // Row-major element order, independent of Eigen's storage order.
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) le::write<float>(out, m(r, c));
}

template <typename Mat>
void read_tensor(std::istream& in, Mat& m, const std::string& name) {
  std::vector<float> buf(static_cast<std::size_t>(m.size()));
  try {
    le::read_array(in, std::span<float>(buf), name);
  } catch (const le::TruncatedError&) {
    throw CorruptionError("weight file truncated: missing tensor '" + name + "'");
  }
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = buf[k++];
}

// Spectral weights are stored as separate real and imaginary float tensors of
// shape (in, out, 2m, m), the (in, out, kx, ky) layout of a channel einsum.
void write_spectral(std::ostream& out, const SpectralLayer& l, int width, int m, bool imag) {
  for (int ci = 0; ci < width; ++ci)
    for (int co = 0; co < width; ++co)
      for (int q = 0; q < 2 * m; ++q)
        for (int ky = 0; ky < m; ++ky) {
          const auto v = l.mode_weights[static_cast<std::size_t>(q * m + ky)](co, ci);
          le::write<float>(out, imag ? v.imag() : v.real());
        }
}

void read_spectral(std::istream& in, SpectralLayer& l, int width, int m, bool imag, const std::string& name) {
  std::vector<float> buf(static_cast<std::size_t>(width) * width * 2 * m * m);
  try {
    le::read_array(in, std::span<float>(buf), name);
  } catch (const le::TruncatedError&) {
    throw CorruptionError("weight file truncated: missing tensor '" + name + "'");
  }
  std::size_t k = 0;
  for (int ci = 0; ci < width; ++ci)
    for (int co = 0; co < width; ++co)
      for (int q = 0; q < 2 * m; ++q)
        for (int ky = 0; ky < m; ++ky) {
          auto& v = l.mode_weights[static_cast<std::size_t>(q * m + ky)](co, ci);
          if (imag) v.imag(buf[k++]);
          else v.real(buf[k++]);
        }
}

std::uint32_t read_header_u32(std::istream& in, const std::string& what) {
  try {
    return le::read<std::uint32_t>(in, what);
  } catch (const le::TruncatedError& e) {
    throw CorruptionError(std::string("weight file truncated in header: ") + e.what());
  }
}

}  // namespace

void save_weights(std::ostream& out, const FnoModel& m) {
  m.validate();
  const auto& a = m.arch;
  out.write(kWeightMagic.data(), kWeightMagic.size());
  le::write<std::uint32_t>(out, kFormatVersion);
  le::write<std::uint32_t>(out, static_cast<std::uint32_t>(a.width));
  le::write<std::uint32_t>(out, static_cast<std::uint32_t>(a.modes));
  le::write<std::uint32_t>(out, static_cast<std::uint32_t>(a.layers));
  le::write<std::uint32_t>(out, static_cast<std::uint32_t>(a.in_channels));
  write_tensor(out, m.lift_w);
  write_tensor(out, m.lift_b);
  for (const auto& l : m.layers) {
    write_spectral(out, l, a.width, a.modes, false);
    write_spectral(out, l, a.width, a.modes, true);
    write_tensor(out, l.bypass_w);
    write_tensor(out, l.bypass_b);
    write_tensor(out, l.bn_scale);
    write_tensor(out, l.bn_shift);
    write_tensor(out, l.bn_mean);
    write_tensor(out, l.bn_var);
  }
  write_tensor(out, m.proj_w);
  le::write<float>(out, m.proj_b);
  if (!out) throw std::runtime_error("save_weights: stream failure");
}

void save_weights(const std::filesystem::path& path, const FnoModel& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_weights(out, m);
}

FnoModel load_weights(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kWeightMagic) throw FormatError("not an FNO1 weight file (bad magic)");
  const auto version = read_header_u32(in, "version");
  if (version != kFormatVersion) throw FormatError("unsupported FNO1 format version " + std::to_string(version));
  FnoArchitecture arch;
  const auto dim = [&](const char* what) {
    const auto v = read_header_u32(in, what);
    if (v == 0 || v > kMaxDim) throw CorruptionError(std::string("implausible header field ") + what);
    return static_cast<int>(v);
  };
  arch.width = dim("width");
  arch.modes = dim("modes");
  arch.layers = dim("layers");
  arch.in_channels = dim("in_channels");

  FnoModel m = FnoModel::zeros(arch);
  read_tensor(in, m.lift_w, "lifting.weight");
  read_tensor(in, m.lift_b, "lifting.bias");
  for (int li = 0; li < arch.layers; ++li) {
    auto& l = m.layers[static_cast<std::size_t>(li)];
    const std::string p = "layers." + std::to_string(li) + ".";
    read_spectral(in, l, arch.width, arch.modes, false, p + "spectral.real");
    read_spectral(in, l, arch.width, arch.modes, true, p + "spectral.imag");
    read_tensor(in, l.bypass_w, p + "bypass.weight");
    read_tensor(in, l.bypass_b, p + "bypass.bias");
    read_tensor(in, l.bn_scale, p + "bn.scale");
    read_tensor(in, l.bn_shift, p + "bn.shift");
    read_tensor(in, l.bn_mean, p + "bn.running_mean");
    read_tensor(in, l.bn_var, p + "bn.running_var");
  }
  read_tensor(in, m.proj_w, "projection.weight");
  Eigen::Matrix<float, 1, 1> pb;
  read_tensor(in, pb, "projection.bias");
  m.proj_b = pb(0, 0);
  if (in.peek() != std::char_traits<char>::eof()) throw CorruptionError("weight file has trailing bytes after payload");
  m.validate();
  return m;
}

FnoModel load_weights(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open weight file " + path.string());
  return load_weights(in);
}

// ---------------------------------------------------------------------------
// Forward pass

FeatureMap encode_input(const FieldF& u, double dt, const ModelParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("encode_input: dt must be positive");
  const auto& g = u.grid();
  FeatureMap in{g.nx(), g.ny(), Eigen::MatrixXf(4, g.size())};
  const float inv_cash = static_cast<float>(1.0 / p.cash);
  const float dt_channel = static_cast<float>(dt / p.maturity);
  for (Eigen::Index i = 0; i < g.nx(); ++i) {
    const float xs = static_cast<float>(static_cast<double>(i) / static_cast<double>(g.nx() - 1));
    for (Eigen::Index j = 0; j < g.ny(); ++j) {
      const Eigen::Index n = i * g.ny() + j;
      in.data(0, n) = u(i, j) * inv_cash;
      in.data(1, n) = xs;
      in.data(2, n) = static_cast<float>(static_cast<double>(j) / static_cast<double>(g.ny() - 1));
      in.data(3, n) = dt_channel;
    }
  }
  return in;
}

FeatureMap spectral_conv(const FeatureMap& input, const SpectralLayer& layer, int modes) {
  check_modes(input.nx, input.ny, modes);
  if (layer.mode_weights.size() != static_cast<std::size_t>(2 * modes * modes))
    throw ConfigurationError("spectral_conv: weight tensor does not match mode count");
  if (layer.mode_weights.front().cols() != input.channels())
    throw ConfigurationError("spectral_conv: input channel count does not match weights");
  return spectral_conv_impl(input, layer, modes, Twiddles(input.nx, input.ny, modes));
}

FieldF fno_forward(const FnoModel& m, const FeatureMap& input, const Grid2D& grid, double cash) {
  const auto& a = m.arch;
  if (input.channels() != a.in_channels)
    throw ConfigurationError("fno_forward: input has " + std::to_string(input.channels()) + " channels, model expects " +
                             std::to_string(a.in_channels));
  if (input.nx != grid.nx() || input.ny != grid.ny()) throw ShapeError("fno_forward: input does not match grid");
  if (!input.data.allFinite()) throw NumericError("fno_forward: non-finite input");
  check_modes(input.nx, input.ny, a.modes);
  const Twiddles tw(input.nx, input.ny, a.modes);

  FeatureMap h{input.nx, input.ny, (m.lift_w * input.data).colwise() + m.lift_b};
  if (!h.data.allFinite()) throw NumericError("fno_forward: non-finite activations after lifting");
  for (int li = 0; li < a.layers; ++li) {
    const auto& l = m.layers[static_cast<std::size_t>(li)];
    FeatureMap s = spectral_conv_impl(h, l, a.modes, tw);
    s.data.noalias() += l.bypass_w * h.data;
    const Eigen::ArrayXf bn_gain = l.bn_scale.array() / (l.bn_var.array() + FnoModel::kBatchNormEps).sqrt();
    const Eigen::ArrayXf bn_bias = (l.bypass_b.array() - l.bn_mean.array()) * bn_gain + l.bn_shift.array();
    s.data.array().colwise() *= bn_gain;
    s.data.array().colwise() += bn_bias;
    if (li + 1 < a.layers) s.data = s.data.cwiseMax(0.0f);
    if (!s.data.allFinite()) throw NumericError("fno_forward: non-finite activations in Fourier layer " + std::to_string(li));
    h = std::move(s);
  }
  Eigen::RowVectorXf out = m.proj_w * h.data;
  out.array() += m.proj_b;
  out *= static_cast<float>(cash);
  if (!out.allFinite()) throw NumericError("fno_forward: non-finite output after projection");
  FieldF f(grid);
  f.flat() = out.transpose();
  return f;
}

FieldF fno_coarse_advance(const FnoModel& m, const FieldF& u, double t_from, double t_to, const ModelParams& p) {
  if (!(t_to > t_from)) throw std::invalid_argument("fno_coarse_advance: t_to must exceed t_from");
  return fno_forward(m, encode_input(u, t_to - t_from, p), u.grid(), p.cash);
}

// ---------------------------------------------------------------------------
// Fixtures

void save_fixtures(std::ostream& out, const std::vector<FixturePair>& pairs) {
  out.write(kFixtureMagic.data(), kFixtureMagic.size());
  le::write<std::uint32_t>(out, kFormatVersion);
  le::write<std::uint32_t>(out, static_cast<std::uint32_t>(pairs.size()));
  for (const auto& p : pairs) {
    if (p.expected.size() != p.input.nodes() || p.input.data.cols() != p.input.nodes())
      throw std::invalid_argument("save_fixtures: pair shapes disagree");
    le::write<std::int64_t>(out, p.input.nx);
    le::write<std::int64_t>(out, p.input.ny);
    le::write<std::uint32_t>(out, static_cast<std::uint32_t>(p.input.channels()));
    le::write_array(out, std::span<const float>(p.input.data.data(), static_cast<std::size_t>(p.input.data.size())));
    le::write_array(out, std::span<const float>(p.expected.data(), static_cast<std::size_t>(p.expected.size())));
  }
  if (!out) throw std::runtime_error("save_fixtures: stream failure");
}

void save_fixtures(const std::filesystem::path& path, const std::vector<FixturePair>& pairs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  save_fixtures(out, pairs);
}

std::vector<FixturePair> load_fixtures(std::istream& in) {
  std::array<char, 4> magic{};
  in.read(magic.data(), magic.size());
  if (in.gcount() != 4 || magic != kFixtureMagic) throw FormatError("not an FNOF fixture file (bad magic)");
  const auto version = read_header_u32(in, "version");
  if (version != kFormatVersion) throw FormatError("unsupported fixture format version " + std::to_string(version));
  const auto count = read_header_u32(in, "count");
  std::vector<FixturePair> pairs;
  pairs.reserve(std::min<std::uint32_t>(count, 1024));
  try {
    for (std::uint32_t k = 0; k < count; ++k) {
      const std::string tag = "fixture " + std::to_string(k);
      const auto nx = le::read<std::int64_t>(in, tag + " nx");
      const auto ny = le::read<std::int64_t>(in, tag + " ny");
      const auto ch = le::read<std::uint32_t>(in, tag + " channels");
      if (nx < 1 || ny < 1 || nx > kMaxDim || ny > kMaxDim || ch == 0 || ch > kMaxDim)
        throw CorruptionError(tag + ": implausible shape");
      FixturePair p{{nx, ny, Eigen::MatrixXf(ch, nx * ny)}, Eigen::VectorXf(nx * ny)};
      le::read_array(in, std::span<float>(p.input.data.data(), static_cast<std::size_t>(p.input.data.size())), tag + " input");
      le::read_array(in, std::span<float>(p.expected.data(), static_cast<std::size_t>(p.expected.size())), tag + " expected");
      pairs.push_back(std::move(p));
    }
  } catch (const le::TruncatedError& e) {
    throw CorruptionError(e.what());
  }
  return pairs;
}

std::vector<FixturePair> load_fixtures(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open fixture file " + path.string());
  return load_fixtures(in);
}

ParityReport check_parity(const FnoModel& m, const std::vector<FixturePair>& pairs) {
  ParityReport rep{pairs.size(), 0.0};
  for (const auto& p : pairs) {
    const Grid2D grid(p.input.nx, p.input.ny, 1.0, 1.0);
    const FieldF out = fno_forward(m, p.input, grid, 1.0);
    const double denom = p.expected.cast<double>().norm();
    const double diff = (out.flat().cast<double>() - p.expected.cast<double>()).norm();
    rep.max_rel_l2 = std::max(rep.max_rel_l2, denom > 0.0 ? diff / denom : diff);
  }
  return rep;
}

}  // namespace pintbs
