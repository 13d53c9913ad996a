// Copyright 2026 The Aloha Stability Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ALOHA_NUMERICS_LINALG_HPP_
#define ALOHA_NUMERICS_LINALG_HPP_

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace aloha::numerics {

using Matrix = Eigen::MatrixXd;
using VectorFunction =
    std::function<std::vector<double>(std::span<const double>)>;

struct Interval {
  double lower;
  double upper;
};

struct FiniteDiffOptions {
  double step = 1e-7;
  // Perturbed coordinates are clamped into this interval when set; the
  // quotient then uses the actual (possibly one-sided) spacing.
  std::optional<Interval> clamp;
};

// Central-difference Jacobian; entry (i, j) approximates d map_i / d x_j.
// Exceptions thrown by `map` propagate unchanged.
Matrix finite_diff_jacobian(const VectorFunction& map,
                            std::span<const double> at,
                            const FiniteDiffOptions& options = {});

// Largest eigenvalue modulus of a square matrix, complex spectra included.
// Throws DomainError on non-finite or non-square input.
double spectral_radius(const Matrix& m);

}  // namespace aloha::numerics

#endif  // ALOHA_NUMERICS_LINALG_HPP_
