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

#include <memory>

#include "pintbs/fno.hpp"
#include "pintbs/implicit_euler.hpp"

namespace pintbs {

enum class PropagatorKind { FineNumeric, CoarseNumeric, CoarseFno };

const char* to_string(PropagatorKind k);

/// Maps a slice start value to the slice end value.
struct PropagatorSpec {
  PropagatorKind kind = PropagatorKind::FineNumeric;
  int substeps = 3;
  Precision precision = Precision::Double;
  std::shared_ptr<const FnoModel> model;
  CgConfig solver = CgConfig::fine_default();

  /// Three double-precision backward-Euler substeps per slice.
  static PropagatorSpec fine(int workers = 1);
  /// One single-precision backward-Euler step per slice.
  static PropagatorSpec coarse_numeric(int workers = 1);
  /// One FNO inference per slice, single precision.
  static PropagatorSpec coarse_fno(std::shared_ptr<const FnoModel> model);

  /// Throws ConfigurationError on inconsistent fields. CoarseNumeric may run in
  /// double, which the exactness check uses.
  void validate() const;
};

/// Advances u from t_from to t_to. Single-precision propagators round the
/// input, compute in float and return the result widened to double.
FieldD advance(const PropagatorSpec& spec, const FieldD& u, double t_from, double t_to, const ModelParams& p);

struct CostEstimate {
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
  int reps = 0;
};

/// Wall-clock cost of one slice advance of length dt starting from the payoff,
/// averaged over reps runs after one untimed warm-up run.
CostEstimate measure_cost(const PropagatorSpec& spec, int reps, const Grid2D& grid, const ModelParams& p, double dt);

}  // namespace pintbs
