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

#include "aloha/numerics/lambert_w.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "aloha/errors.hpp"

namespace aloha::numerics {
namespace {

constexpr double kInvE = 1.0 / std::numbers::e;
constexpr double kDomainSlack = 1e-12;
constexpr int kMaxHalleyIterations = 64;

// Series in p = sqrt(2(1 + e z)) around the branch point z = -1/e. The sign of
// p selects the branch: +p for W0, -p for W-1.
double branch_point_series(double p) {
  return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
}

double halley(double z, double w) {
  for (int i = 0; i < kMaxHalleyIterations; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - z;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    if (denom == 0.0 || !std::isfinite(denom)) break;
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 4.0 * std::numeric_limits<double>::epsilon() *
                              (1.0 + std::abs(w))) {
      break;
    }
  }
  return w;
}

[[noreturn]] void domain_error(const char* branch, double z) {
  std::ostringstream os;
  os.precision(17);
  os << branch << ": argument " << z << " outside the real domain";
  throw DomainError(os.str());
}

}  // namespace

double lambert_w0(double z) {
  if (std::isnan(z) || z < -kInvE - kDomainSlack) domain_error("lambert_w0", z);
  if (z <= -kInvE) return -1.0;
  if (z == 0.0) return 0.0;
  if (std::isinf(z)) return z;

  double w;
  const double near = 1.0 + std::numbers::e * z;
  if (near < 0.3) {
    w = branch_point_series(std::sqrt(2.0 * std::max(near, 0.0)));
  } else if (z < 3.0) {
    w = std::log1p(z);
    w = w * (1.0 - std::log1p(w) / (2.0 + w));
  } else {
    const double l1 = std::log(z);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }
  w = halley(z, w);
  return z < 0.0 ? std::clamp(w, -1.0, 0.0) : w;
}

double lambert_wm1(double z) {
  if (std::isnan(z) || z < -kInvE - kDomainSlack || z >= 0.0) {
    domain_error("lambert_wm1", z);
  }
  if (z <= -kInvE) return -1.0;

  double w;
  const double near = 1.0 + std::numbers::e * z;
  if (near < 0.3) {
    w = branch_point_series(-std::sqrt(2.0 * near));
  } else {
    const double l1 = std::log(-z);
    const double l2 = std::log(-l1);
    w = l1 - l2 + l2 / l1;
  }
  w = halley(z, w);
  return std::min(w, -1.0);
}

}  // namespace aloha::numerics
