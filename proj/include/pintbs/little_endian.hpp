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

// Little-endian scalar I/O shared by the field blob and the FNO1 weight format.

#pragma once

#include <bit>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace pintbs::le {

static_assert(std::endian::native == std::endian::little,
              "binary formats are written with native byte order on little-endian hosts only");

/// Thrown when a stream ends before the named item is complete.
struct TruncatedError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename T>
void write(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
void write_array(std::ostream& out, std::span<const T> v) {
  out.write(reinterpret_cast<const char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
}

template <typename T>
T read(std::istream& in, const std::string& what) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (in.gcount() != static_cast<std::streamsize>(sizeof(T))) throw TruncatedError("truncated while reading " + what);
  return v;
}

template <typename T>
void read_array(std::istream& in, std::span<T> v, const std::string& what) {
  in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(v.size_bytes()));
  if (in.gcount() != static_cast<std::streamsize>(v.size_bytes()))
    throw TruncatedError("truncated while reading " + what);
}

}  // namespace pintbs::le
