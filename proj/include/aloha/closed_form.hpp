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

#ifndef ALOHA_CLOSED_FORM_HPP_
#define ALOHA_CLOSED_FORM_HPP_

#include <array>
#include <cstddef>
#include <optional>

#include "aloha/steady_state.hpp"
#include "aloha/topology.hpp"

namespace aloha {

using Pair = std::array<double, 2>;

// Two dedicated transmitter-receiver pairs, all-unsaturated state.
//   a_i = exp(-theta_i / rho_ii),  b_i = theta_j / (theta_j + rho_jj / rho_ij)
// and c solves c = prod_i a_i c / (a_i c + b_i lambda_i).
struct TwoTrClosedForm {
  Pair lambda{};
  Pair a{};
  Pair b{};
  bool exists = false;
  double c_L = 0.0;  // attracting root, set when exists
  double c_S = 0.0;  // repelling root, set when exists
  std::optional<Pair> p_L;
  std::optional<Pair> p_S;

  // lambda_i / p_{i,L}: the smallest q_i keeping transmitter i unsaturated.
  double lower_ratio(std::size_t i) const;
  // lambda_i / p_{i,S}; +inf when lambda_i is zero.
  double upper_ratio(std::size_t i) const;
};

// Throws DimensionError unless K = 2 with distinct receivers.
TwoTrClosedForm two_tr_closed_form(const Pair& lambda, const Network& net);

// Steady state with only transmitter `unsaturated` unsaturated.
Pair two_tr_partial_point(std::size_t unsaturated, const TrafficConfig& cfg, const Network& net);

// c -> prod_i a_i c / (a_i c + b_i lambda_i).
double two_pair_c_map(double c, const TwoTrClosedForm& closed);

// K identical pairs with the exponential approximation
// (1 - x)^n ~ exp(-n x) applied to the product form.
struct SymmetricClosedForm {
  std::size_t k = 0;
  double lambda = 0.0;
  double theta = 0.0;
  double rho = 0.0;
  double q = 1.0;
  double p_A = 0.0;        // approximate
  double p_A_exact = 0.0;  // exact product
  double bound = 0.0;      // (theta + 1) / (K theta) * exp(-1 - theta / rho)
  bool exists = false;     // 0 < lambda < bound
  std::optional<double> p_L;
  std::optional<double> p_S;
};

// Throws NoUnsaturatedPoint when lambda exceeds the bound. At the bound the
// two roots coincide and are still reported; at lambda = 0 the limits
// p_L = exp(-theta / rho) and p_S = 0 are reported.
SymmetricClosedForm symmetric_closed_form(std::size_t k, double lambda, double theta, double rho,
                                          double q = 1.0);

// p -> exp(-theta / rho - K theta lambda / ((theta + 1) p)).
double symmetric_g_map(double p, std::size_t k, double lambda, double theta, double rho);

}  // namespace aloha

#endif  // ALOHA_CLOSED_FORM_HPP_
