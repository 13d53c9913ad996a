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

#ifndef ALOHA_STEADY_STATE_HPP_
#define ALOHA_STEADY_STATE_HPP_

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "aloha/topology.hpp"

namespace aloha {

// Per-transmitter input rates (packets/slot) and transmission probabilities.
struct TrafficConfig {
  std::vector<double> lambda;
  std::vector<double> q;

  static TrafficConfig uniform(std::size_t k, double lambda, double q);
  // Sizes equal k, 0 < q <= 1, 0 <= lambda < 1.
  void validate(std::size_t k) const;
};

enum class QueueState : std::uint8_t { kUnsaturated, kSaturated };

// Saturation pattern phi over all transmitters.
//
// States are swept in order of increasing unsaturated count; ties go by the
// binary value of the pattern read with transmitter 1 as the least
// significant bit and U = 1. For K = 2 the sweep is SS, US, SU, UU.
class NetworkState {
 public:
  NetworkState() = default;
  explicit NetworkState(std::vector<QueueState> states) : states_(std::move(states)) {}

  static NetworkState all(std::size_t k, QueueState s) {
    return NetworkState(std::vector<QueueState>(k, s));
  }

  std::size_t size() const { return states_.size(); }
  QueueState operator[](std::size_t k) const { return states_[k]; }
  bool unsaturated(std::size_t k) const { return states_[k] == QueueState::kUnsaturated; }
  void set(std::size_t k, QueueState s) { states_[k] = s; }
  std::size_t unsaturated_count() const;
  bool all_unsaturated() const { return unsaturated_count() == size(); }
  // One letter per transmitter, e.g. "US".
  std::string to_string() const;

  friend bool operator==(const NetworkState&, const NetworkState&) = default;

 private:
  std::vector<QueueState> states_;
};

// All 2^K states in sweep order. K <= 20.
std::vector<NetworkState> enumerate_states(std::size_t k);

// Pairwise coupling of the capture model:
//   isolated[i]    = exp(-theta_i* / rho_{i,i*})
//   coupling(i, j) = theta_i* / (theta_i* + rho_{i,i*} / rho_{j,i*}),  j != i
// so that p_i = isolated[i] * prod_j (1 - coupling(i, j) * x_j).
struct CouplingModel {
  std::vector<double> isolated;
  Eigen::MatrixXd coupling;

  explicit CouplingModel(const Network& net);
  std::size_t size() const { return isolated.size(); }
};

// Success probability of transmitter i given the concurrent set.
double conditional_success_prob(std::size_t i, std::span<const std::size_t> interferers,
                                const Network& net);

// Fixed-point map for state phi: saturated neighbours contribute q_j,
// unsaturated ones lambda_j / p_j. Throws PoleError when an unsaturated
// p_j referenced in a product is zero.
std::vector<double> f_phi(std::span<const double> p, const NetworkState& phi,
                          const TrafficConfig& cfg, const Network& net);

// Steady state of the all-saturated network (constant map).
std::vector<double> all_saturated_point(const TrafficConfig& cfg, const Network& net);

// x = min(lambda / p, q).
std::vector<double> busy_probabilities(std::span<const double> p, const TrafficConfig& cfg);

// Right-hand side of the global consistency equation (min() form).
std::vector<double> consistency_map(std::span<const double> p, const TrafficConfig& cfg,
                                    const Network& net);

// max_i |p_i - consistency_map(p)_i|.
double consistency_residual(std::span<const double> p, const TrafficConfig& cfg,
                            const Network& net);

// Central finite-difference Jacobian of f_phi at p, perturbations clamped
// into (0, 1].
Eigen::MatrixXd f_phi_jacobian(std::span<const double> p, const NetworkState& phi,
                               const TrafficConfig& cfg, const Network& net);

struct FixedPointOptions {
  double tolerance = 1e-12;  // infinity-norm step
  std::size_t max_iterations = 100000;
  double attracting_margin = 1e-9;  // attracting iff radius < 1 - margin
};

struct FixedPoint {
  std::vector<double> p;
  bool attracting = false;
  double spectral_radius = 0.0;
  std::size_t iterations = 0;
};

// Iterates p <- f_phi(p) from init. Throws NoConvergence when the budget
// runs out or an iterate leaves (0, inf); PoleError propagates.
FixedPoint solve_state_fixed_point(const NetworkState& phi, const TrafficConfig& cfg,
                                   const Network& net, std::span<const double> init,
                                   const FixedPointOptions& options = {});

struct SteadyStateOptions {
  FixedPointOptions fixed_point;
  double consistency_tolerance = 1e-8;
  // Unsaturated means lambda_k <= mu_k - strictness_margin.
  double strictness_margin = 1e-9;
  // Random restarts per state after the deterministic initial points.
  std::size_t restarts = 20;
  std::uint64_t seed = 0;
  // Candidate states examined before NoSteadyStateFound.
  std::size_t max_states = std::size_t{1} << 16;
  // Iteration cap for the monotone bracket used to prune the sweep.
  std::size_t bracket_iterations = 5000;
  // Also scan the remaining states with the same unsaturated count and flag
  // a second consistent one.
  bool check_ambiguity = false;
};

struct SteadyStateSolution {
  std::vector<double> p;
  NetworkState phi;
  std::vector<double> busy;          // x
  std::vector<double> service_rate;  // mu = q * p
  bool attracting = false;
  double spectral_radius = 0.0;
  double consistency_residual = 0.0;
  std::size_t states_examined = 0;
  bool ambiguous = false;

  bool all_unsaturated() const { return phi.all_unsaturated(); }
};

// Least and greatest fixed points (or sound bounds on them) of the min()
// consistency map; every consistent steady state lies between them.
struct Bracket {
  std::vector<double> lower;
  std::vector<double> upper;
};
Bracket consistency_bracket(const TrafficConfig& cfg, const Network& net,
                            std::size_t max_iterations = 5000, double tolerance = 1e-13);

// First state in sweep order whose attracting fixed point satisfies the
// consistency equation with matching saturation branches.
SteadyStateSolution steady_state(const TrafficConfig& cfg, const Network& net,
                                 const SteadyStateOptions& options = {});

// Diagnostic: every consistent attracting state, in sweep order. K <= 20.
std::vector<SteadyStateSolution> consistent_states(const TrafficConfig& cfg, const Network& net,
                                                   const SteadyStateOptions& options = {});

}  // namespace aloha

#endif  // ALOHA_STEADY_STATE_HPP_
