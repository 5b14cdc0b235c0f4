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

#include <filesystem>
#include <iosfwd>

#include "pintbs/core.hpp"

namespace pintbs {

/// Binary field blob, little-endian:
///   int64 nx | int64 ny | uint8 precision (4 = float, 8 = double) | nx*ny values, row-major.
/// The blob does not carry domain extents; readers supply them.
template <typename Scalar>
void write_field_binary(std::ostream& out, const Field<Scalar>& f);

template <typename Scalar>
void write_field_binary(const std::filesystem::path& path, const Field<Scalar>& f);

struct LoadedField {
  FieldD field;
  Precision stored_precision;
};

/// Reads either precision; single-precision payloads are widened exactly.
LoadedField read_field_binary(std::istream& in, double x_max, double y_max);
LoadedField read_field_binary(const std::filesystem::path& path, double x_max, double y_max);

/// CSV with header `i,j,x,y,u`, one row per node.
template <typename Scalar>
void write_field_csv(std::ostream& out, const Field<Scalar>& f);

template <typename Scalar>
void write_field_csv(const std::filesystem::path& path, const Field<Scalar>& f);

}  // namespace pintbs
