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

#include "aloha/closed_form.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "aloha/errors.hpp"
#include "aloha/numerics/lambert_w.hpp"

namespace aloha {
namespace {

void check_symmetric(std::size_t k, double lambda, double theta, double rho, double q) {
  if (k < 2) throw DimensionError("symmetric closed form needs K >= 2");
  if (!(lambda >= 0.0)) throw DomainError("lambda must be non-negative");
  if (!(theta > 0.0) || !(rho > 0.0)) throw DomainError("theta and rho must be positive");
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("q must lie in (0, 1]");
}

}  // namespace

double TwoTrClosedForm::lower_ratio(std::size_t i) const {
  if (!p_L) throw EmptyRegion("no all-unsaturated fixed point");
  return lambda[i] / (*p_L)[i];
}

double TwoTrClosedForm::upper_ratio(std::size_t i) const {
  if (!p_S) throw EmptyRegion("no all-unsaturated fixed point");
  if (lambda[i] == 0.0 || (*p_S)[i] <= 0.0) return std::numeric_limits<double>::infinity();
  return lambda[i] / (*p_S)[i];
}

TwoTrClosedForm two_tr_closed_form(const Pair& lambda, const Network& net) {
  if (net.size() != 2) throw DimensionError("two-pair closed form needs exactly 2 transmitters");
  if (net.serving[0] == net.serving[1]) {
    throw DimensionError("two-pair closed form needs a dedicated receiver per transmitter");
  }
  for (double l : lambda) {
    if (!(l >= 0.0 && l < 1.0)) throw DomainError("lambda must lie in [0, 1)");
  }
  const CouplingModel model(net);
  TwoTrClosedForm out;
  out.lambda = lambda;
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t j = 1 - i;
    out.a[i] = model.isolated[i];
    out.b[i] = model.coupling(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i));
  }
  const double u1 = out.b[0] * lambda[0] / out.a[0];
  const double u2 = out.b[1] * lambda[1] / out.a[1];
  out.exists = std::sqrt(u1) + std::sqrt(u2) < 1.0;
  if (!out.exists) return out;

  const double s = 1.0 - u1 - u2;
  const double root = std::sqrt(std::max(s * s - 4.0 * u1 * u2, 0.0));
  out.c_L = 0.5 * (s + root);
  // Product of the roots is u1 u2; dividing avoids cancellation in s - root.
  out.c_S = out.c_L > 0.0 ? u1 * u2 / out.c_L : 0.0;
  Pair pl{}, ps{};
  for (std::size_t i = 0; i < 2; ++i) {
    pl[i] = out.a[i] * out.c_L + out.b[i] * lambda[i];
    ps[i] = out.a[i] * out.c_S + out.b[i] * lambda[i];
  }
  out.p_L = pl;
  out.p_S = ps;
  return out;
}

Pair two_tr_partial_point(std::size_t unsaturated, const TrafficConfig& cfg, const Network& net) {
  if (net.size() != 2) throw DimensionError("two-pair partial point needs exactly 2 transmitters");
  if (unsaturated > 1) throw DimensionError("transmitter index out of range");
  cfg.validate(2);
  const CouplingModel model(net);
  const std::size_t i = unsaturated;
  const std::size_t j = 1 - i;
  const auto c = [&](std::size_t r, std::size_t s) {
    return model.coupling(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(s));
  };
  Pair p{};
  p[i] = model.isolated[i] * (1.0 - c(i, j) * cfg.q[j]);
  p[j] = model.isolated[j] * (1.0 - c(j, i) * cfg.lambda[i] / p[i]);
  return p;
}

double two_pair_c_map(double c, const TwoTrClosedForm& closed) {
  double out = 1.0;
  for (std::size_t i = 0; i < 2; ++i) {
    const double num = closed.a[i] * c;
    out *= num / (num + closed.b[i] * closed.lambda[i]);
  }
  return out;
}

SymmetricClosedForm symmetric_closed_form(std::size_t k, double lambda, double theta, double rho,
                                          double q) {
  check_symmetric(k, lambda, theta, rho, q);
  SymmetricClosedForm out;
  out.k = k;
  out.lambda = lambda;
  out.theta = theta;
  out.rho = rho;
  out.q = q;
  const double kd = static_cast<double>(k);
  const double share = theta / (theta + 1.0);
  out.p_A = std::exp(-theta / rho - kd * share * q);
  out.p_A_exact = std::exp(-theta / rho) * std::pow(1.0 - share * q, kd - 1.0);
  out.bound = (theta + 1.0) / (kd * theta) * std::exp(-1.0 - theta / rho);
  out.exists = lambda > 0.0 && lambda < out.bound;

  if (lambda == 0.0) {
    out.p_L = std::exp(-theta / rho);
    out.p_S = 0.0;
    return out;
  }
  const double z = -kd * share * lambda * std::exp(theta / rho);
  constexpr double kBranchPoint = -0.36787944117144233;  // -1/e
  if (z < kBranchPoint - 1e-12) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " exceeds the all-unsaturated bound " << out.bound;
    throw NoUnsaturatedPoint(msg.str());
  }
  const double scale = kd * share * lambda;
  out.p_L = -scale / numerics::lambert_w0(z);
  out.p_S = -scale / numerics::lambert_wm1(z);
  return out;
}

double symmetric_g_map(double p, std::size_t k, double lambda, double theta, double rho) {
  const double kd = static_cast<double>(k);
  return std::exp(-theta / rho - kd * theta * lambda / ((theta + 1.0) * p));
}

}  // namespace aloha
