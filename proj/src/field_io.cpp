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

#include "pintbs/field_io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>

#include "pintbs/little_endian.hpp"

namespace pintbs {

template <typename Scalar>
void write_field_binary(std::ostream& out, const Field<Scalar>& f) {
  const auto& g = f.grid();
  le::write<std::int64_t>(out, g.nx());
  le::write<std::int64_t>(out, g.ny());
  le::write<std::uint8_t>(out, static_cast<std::uint8_t>(Field<Scalar>::precision()));
  le::write_array(out, std::span<const Scalar>(f.values().data(), static_cast<std::size_t>(f.values().size())));
  if (!out) throw std::runtime_error("write_field_binary: stream failure");
}

template <typename Scalar>
void write_field_binary(const std::filesystem::path& path, const Field<Scalar>& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field_binary(out, f);
}

LoadedField read_field_binary(std::istream& in, double x_max, double y_max) {
  const auto nx = le::read<std::int64_t>(in, "nx");
  const auto ny = le::read<std::int64_t>(in, "ny");
  const auto tag = le::read<std::uint8_t>(in, "precision");
  if (nx < 3 || ny < 3 || nx > (1 << 20) || ny > (1 << 20))
    throw std::runtime_error("read_field_binary: implausible grid size");
  Grid2D grid(nx, ny, x_max, y_max);
  FieldD field(grid);
  const auto n = static_cast<std::size_t>(nx * ny);
  if (tag == static_cast<std::uint8_t>(Precision::Double)) {
    le::read_array(in, std::span<double>(field.values().data(), n), "values");
    return {std::move(field), Precision::Double};
  }
  if (tag == static_cast<std::uint8_t>(Precision::Single)) {
    std::vector<float> buf(n);
    le::read_array(in, std::span<float>(buf), "values");
    for (std::size_t k = 0; k < n; ++k) field.values().data()[k] = buf[k];
    return {std::move(field), Precision::Single};
  }
  throw std::runtime_error("read_field_binary: unknown precision tag " + std::to_string(tag));
}

LoadedField read_field_binary(const std::filesystem::path& path, double x_max, double y_max) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return read_field_binary(in, x_max, y_max);
}

template <typename Scalar>
void write_field_csv(std::ostream& out, const Field<Scalar>& f) {
  const auto& g = f.grid();
  out << "i,j,x,y,u\n" << std::setprecision(std::numeric_limits<Scalar>::max_digits10);
  for (Eigen::Index i = 0; i < g.nx(); ++i)
    for (Eigen::Index j = 0; j < g.ny(); ++j)
      out << i << ',' << j << ',' << g.x(i) << ',' << g.y(j) << ',' << f(i, j) << '\n';
}

template <typename Scalar>
void write_field_csv(const std::filesystem::path& path, const Field<Scalar>& f) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  write_field_csv(out, f);
}

template void write_field_binary(std::ostream&, const FieldF&);
template void write_field_binary(std::ostream&, const FieldD&);
template void write_field_binary(const std::filesystem::path&, const FieldF&);
template void write_field_binary(const std::filesystem::path&, const FieldD&);
template void write_field_csv(std::ostream&, const FieldF&);
template void write_field_csv(std::ostream&, const FieldD&);
template void write_field_csv(const std::filesystem::path&, const FieldF&);
template void write_field_csv(const std::filesystem::path&, const FieldD&);

}  // namespace pintbs
