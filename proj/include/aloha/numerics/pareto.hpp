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

#ifndef ALOHA_NUMERICS_PARETO_HPP_
#define ALOHA_NUMERICS_PARETO_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace aloha::numerics {

enum class Sense { kMinimize, kMaximize };

// Box-constrained multi-objective problem whose objectives are the decision
// coordinates themselves, each maximized or minimized.
struct MooProblem {
  std::size_t dimension = 0;
  std::vector<Sense> sense;
  std::vector<double> box_lower;
  std::vector<double> box_upper;
  // Violation magnitude, >= 0. A candidate is feasible iff its violation is
  // at most MooSettings::constraint_tolerance. Must be safe to call
  // concurrently and must always return.
  std::function<double(std::span<const double>)> violation;

  void validate() const;
};

struct MooSettings {
  std::size_t population_size = 500;
  double constraint_tolerance = 1e-7;
  double function_tolerance = 1e-5;
  std::size_t max_generations = 1000;
  // Stop once the front indicator moved by less than function_tolerance
  // (relative) over this many generations.
  std::size_t stall_generations = 100;
  double crossover_fraction = 0.8;
  // Gaussian mutation: standard deviation as a fraction of the box width,
  // shrunk geometrically each generation down to min_mutation_scale. With
  // probability exploration_probability a child uses the initial scale.
  double mutation_scale = 0.2;
  double mutation_shrink = 0.97;
  double min_mutation_scale = 1e-7;
  double exploration_probability = 0.1;
  std::uint64_t rng_seed = 0;
  // Return as soon as any feasible candidate is evaluated.
  bool stop_on_first_feasible = false;
  std::size_t threads = 1;
  // Injected into the first population (clamped into the box).
  std::vector<std::vector<double>> initial_points;
};

struct ParetoFront {
  std::vector<std::vector<double>> points;
  std::size_t generations = 0;
  std::size_t evaluations = 0;
};

// true iff a is at least as good as b everywhere and strictly better somewhere.
bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Sense> sense);

bool mutually_nondominated(const std::vector<std::vector<double>>& points,
                           std::span<const Sense> sense);

// Elitist non-dominated sorting GA with feasibility-first constraint handling.
// Pure function of (problem, settings); throws NoFeasiblePoint when no
// feasible candidate appears within max_generations.
ParetoFront pareto_solve(const MooProblem& problem, const MooSettings& settings);

}  // namespace aloha::numerics

#endif  // ALOHA_NUMERICS_PARETO_HPP_
