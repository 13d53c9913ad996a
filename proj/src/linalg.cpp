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

#include "aloha/numerics/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "aloha/errors.hpp"

namespace aloha::numerics {

Matrix finite_diff_jacobian(const VectorFunction& map,
                            std::span<const double> at,
                            const FiniteDiffOptions& options) {
  if (!(options.step > 0.0)) throw DomainError("finite_diff_jacobian: step must be positive");
  const auto n = static_cast<Eigen::Index>(at.size());
  Matrix jac(n, n);
  std::vector<double> point(at.begin(), at.end());

  for (Eigen::Index j = 0; j < n; ++j) {
    const double center = at[static_cast<std::size_t>(j)];
    double hi = center + options.step;
    double lo = center - options.step;
    if (options.clamp) {
      hi = std::clamp(hi, options.clamp->lower, options.clamp->upper);
      lo = std::clamp(lo, options.clamp->lower, options.clamp->upper);
    }
    point[static_cast<std::size_t>(j)] = hi;
    const std::vector<double> f_hi = map(point);
    point[static_cast<std::size_t>(j)] = lo;
    const std::vector<double> f_lo = map(point);
    point[static_cast<std::size_t>(j)] = center;

    if (static_cast<Eigen::Index>(f_hi.size()) != n ||
        static_cast<Eigen::Index>(f_lo.size()) != n) {
      throw DomainError("finite_diff_jacobian: map changed dimension");
    }
    const double spacing = hi - lo;
    if (!(spacing > 0.0)) throw DomainError("finite_diff_jacobian: degenerate clamp interval");
    for (Eigen::Index i = 0; i < n; ++i) {
      jac(i, j) = (f_hi[static_cast<std::size_t>(i)] -
                   f_lo[static_cast<std::size_t>(i)]) / spacing;
    }
  }
  return jac;
}

double spectral_radius(const Matrix& m) {
  if (m.rows() != m.cols()) throw DomainError("spectral_radius: matrix must be square");
  if (m.size() == 0) return 0.0;
  if (!m.allFinite()) throw DomainError("spectral_radius: non-finite entry");
  if (m.rows() == 1) return std::abs(m(0, 0));
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw DomainError("spectral_radius: eigenvalue iteration failed");
  }
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace aloha::numerics
