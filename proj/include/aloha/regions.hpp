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

#ifndef ALOHA_REGIONS_HPP_
#define ALOHA_REGIONS_HPP_

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aloha/closed_form.hpp"
#include "aloha/numerics/pareto.hpp"
#include "aloha/steady_state.hpp"
#include "aloha/topology.hpp"

namespace aloha {

// Maps optimizer coordinates onto transmitters: transmitter k takes
// coordinate group[k]. Shared coordinates give the symmetric reduction,
// per-receiver coordinates the per-cell parameterisation.
struct ParamMap {
  std::vector<std::size_t> group;
  std::size_t dimension = 0;

  static ParamMap per_transmitter(std::size_t k);
  static ParamMap shared(std::size_t k);
  static ParamMap by_receiver(const Network& net);

  std::size_t size() const { return group.size(); }
  std::vector<double> expand(std::span<const double> coords) const;
  // Largest per-transmitter value in each group.
  std::vector<double> reduce_max(std::span<const double> per_tx) const;
  void validate(std::size_t k) const;
};

struct Membership {
  bool member = false;
  std::optional<SteadyStateSolution> solution;
  std::string diagnostic;  // set when no steady state was found
};

// Member iff the steady state is all-unsaturated with lambda <= mu - margin.
Membership check_unsat_membership(std::span<const double> q, std::span<const double> lambda,
                                  const Network& net, const SteadyStateOptions& options = {});
bool unsat_membership(std::span<const double> q, std::span<const double> lambda,
                      const Network& net, const SteadyStateOptions& options = {});

// Graded constraint for the optimizer: 0 for members, otherwise
// 10 * tolerance plus the total service shortfall, or 10 without a steady state.
double unsat_violation(std::span<const double> q, std::span<const double> lambda,
                       const Network& net, const SteadyStateOptions& options, double tolerance);

// Greatest all-unsaturated fixed point, which does not depend on q, found by
// iterating downward from the isolated success probabilities. When that
// iteration leaves the physical domain no q makes every queue stable
// (exists = false, converged = true). Running out of iterations gives
// exists = false, converged = false.
struct UnsaturatedPoint {
  bool exists = false;
  bool converged = false;
  std::vector<double> p;
};
UnsaturatedPoint greatest_unsaturated_point(std::span<const double> lambda, const Network& net,
                                            std::size_t max_iterations = 100000);

struct UnsatRegion {
  std::vector<double> lambda;
  ParamMap map;
  numerics::ParetoFront q1;  // upper boundary (maximal q)
  numerics::ParetoFront q2;  // lower boundary (minimal q)
  bool empty = true;
};

struct RegionSettings {
  numerics::MooSettings search;
  SteadyStateOptions steady;
  double q_min = 1e-4;
  double q_max = 1.0;
};

UnsatRegion unsat_region(std::span<const double> lambda, const Network& net,
                         const RegionSettings& settings, const ParamMap& q_map);

struct StabilitySettings {
  numerics::MooSettings outer;
  // Feasibility search over q for a single lambda.
  numerics::MooSettings inner = default_inner();
  SteadyStateOptions steady;
  double q_min = 1e-4;
  double lambda_min = 1e-6;
  double lambda_max = 0.999;

  static numerics::MooSettings default_inner();
};

struct StabilityCheck {
  bool member = false;
  double violation = 0.0;
  std::vector<double> q;  // a witness when member
};

// Nonempty all-unsaturated region for lambda, searched over q_map.
StabilityCheck check_stability(std::span<const double> lambda, const Network& net,
                               const StabilitySettings& settings, const ParamMap& q_map);
bool stability_membership(std::span<const double> lambda, const Network& net,
                          const StabilitySettings& settings, const ParamMap& q_map);

struct StabilityRegion {
  ParamMap map;
  numerics::ParetoFront q3;  // maximal input-rate vectors
  bool empty = true;
};

StabilityRegion stability_region(const Network& net, const StabilitySettings& settings,
                                 const ParamMap& lambda_map, const ParamMap& q_map);

// Largest t in [0, t_max] with member(t * direction), by bisection. Assumes
// membership is downward closed along the ray.
double ray_boundary(std::span<const double> direction,
                    const std::function<bool(std::span<const double>)>& member, double t_max,
                    double tolerance = 1e-4);

// Two pairs: union over i != j of
//   {lower_i < q_i < min(upper_i, 1), lower_j < q_j <= 1}.
struct TwoTrUnsatRegion {
  TwoTrClosedForm closed;
  Pair lower{};  // lambda_i / p_{i,L}
  Pair upper{};  // min(lambda_i / p_{i,S}, 1)

  bool contains(const Pair& q) const;
  std::vector<Pair> upper_front() const;
  std::vector<Pair> lower_front() const;
};

// Throws EmptyRegion when no fixed point exists or both pieces are empty.
TwoTrUnsatRegion theorem1_region(const TwoTrClosedForm& closed);

struct Interval1D {
  double lower = 0.0;
  double upper = 0.0;
  bool contains(double x) const { return x > lower && x < upper; }
};

// Symmetric pairs: q strictly between the two Lambert-branch expressions,
// capped at 1. Throws EmptyRegion beyond the existence bound or when the
// lower end reaches 1.
Interval1D theorem2_region(std::size_t k, double lambda, double theta, double rho);

// Line c1 * lambda_1 + c2 * lambda_2 = rhs.
struct Line2D {
  double c1 = 0.0;
  double c2 = 0.0;
  double rhs = 0.0;
};

enum class TwoTrCase { kSumAboveOne, kSumEqualOne, kSumBelowOne };
std::string to_string(TwoTrCase c);

struct TwoTrStabilityGeometry {
  Pair a{};
  Pair b{};
  Line2D d;  // (1 - b1) l1 / a1 + b2 l2 / a2 = 1 - b1
  Line2D f;  // b1 l1 / a1 + (1 - b2) l2 / a2 = 1 - b2
  // e is sqrt(b1 l1 / a1) + sqrt(b2 l2 / a2) = 1.
  Pair A{};  // e and f
  Pair B{};  // e and d
  Pair C{};  // d and f
  // rho11 rho22 / (rho12 rho21 theta1 theta2), recovered from b.
  double snr_ratio = 0.0;
  TwoTrCase shape = TwoTrCase::kSumAboveOne;

  bool contains(const Pair& lambda) const;
  // Largest lambda_1 in the region for the given lambda_2 (bisection).
  double max_lambda1(double lambda2, double tolerance = 1e-10) const;
};

TwoTrStabilityGeometry theorem3_region(const TwoTrClosedForm& closed);

// Symmetric stability bound with the branch split at theta = 1 / (K - 1).
double theorem4_lambda_u(std::size_t k, double theta, double rho);

// Exact-product counterpart of the symmetric bound:
// (a / c) (1 / K) ((K - 1) / K)^(K - 1) when (theta + 1) / (K theta) <= 1,
// with a = exp(-theta / rho) and c = theta / (theta + 1).
double symmetric_exact_lambda_max(std::size_t k, double theta, double rho);

// Grid export. Axis values are lo + i (hi - lo) / n for i = 1..n, so a
// (0, 1] axis with n = 50 samples 0.02, 0.04, ..., 1.
struct GridAxis {
  std::string name;
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 1;
  std::vector<double> values() const;
};

struct GridCell {
  std::vector<double> coords;
  bool member = false;
  std::vector<double> p;  // empty when no steady state exists
};

using GridEvaluator = std::function<GridCell(std::span<const double>)>;

// Cells in row-major order with the last axis varying fastest.
std::vector<GridCell> region_grid(const std::vector<GridAxis>& axes, const GridEvaluator& eval,
                                  std::size_t threads = 1);

// Header `axis names..., member, p_1..p_K`, one row per cell.
void write_grid_csv(std::ostream& out, const std::vector<GridAxis>& axes,
                    const std::vector<GridCell>& cells, std::size_t k);

// Grid over q (through q_map) at fixed lambda, membership from the oracle.
GridEvaluator unsat_q_evaluator(std::vector<double> lambda, const Network& net,
                                const ParamMap& q_map, const SteadyStateOptions& options = {});

}  // namespace aloha

#endif  // ALOHA_REGIONS_HPP_
