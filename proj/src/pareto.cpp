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

#include "aloha/numerics/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>

#include "aloha/errors.hpp"
#include "aloha/parallel.hpp"

namespace aloha::numerics {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Individual {
  std::vector<double> x;
  double violation = 0.0;
  bool feasible = false;
  std::size_t rank = 0;
  double crowding = 0.0;
};

std::string cache_key(std::span<const double> x) {
  std::string key(x.size() * sizeof(double), '\0');
  std::memcpy(key.data(), x.data(), key.size());
  return key;
}

// Memoizes violations; the GA clones individuals and clamps onto the box
// faces, so exact repeats are common.
class Evaluator {
 public:
  Evaluator(const MooProblem& problem, std::size_t threads)
      : problem_(problem), threads_(threads) {}

  void evaluate(std::vector<Individual>& batch, double tolerance) {
    std::vector<std::size_t> pending;
    std::vector<std::string> keys(batch.size());
    std::unordered_map<std::string, std::size_t> first_pending;
    for (std::size_t i = 0; i < batch.size(); ++i) {
      keys[i] = cache_key(batch[i].x);
      if (cache_.contains(keys[i]) || first_pending.contains(keys[i])) continue;
      first_pending.emplace(keys[i], i);
      pending.push_back(i);
    }
    std::vector<double> results(pending.size());
    parallel_for(pending.size(), threads_, [&](std::size_t k) {
      const double v = problem_.violation(batch[pending[k]].x);
      results[k] = std::isfinite(v) ? std::max(v, 0.0) : kInf;
    });
    for (std::size_t k = 0; k < pending.size(); ++k) {
      cache_.emplace(keys[pending[k]], results[k]);
    }
    evaluations_ += pending.size();
    for (std::size_t i = 0; i < batch.size(); ++i) {
      batch[i].violation = cache_.at(keys[i]);
      batch[i].feasible = batch[i].violation <= tolerance;
    }
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  const MooProblem& problem_;
  std::size_t threads_;
  std::unordered_map<std::string, double> cache_;
  std::size_t evaluations_ = 0;
};

double objective(const std::vector<double>& x, std::size_t k, Sense sense) {
  return sense == Sense::kMaximize ? -x[k] : x[k];
}

void assign_crowding(std::vector<Individual>& pop,
                     const std::vector<std::size_t>& front,
                     std::span<const Sense> sense) {
  for (std::size_t i : front) pop[i].crowding = 0.0;
  if (front.size() <= 2) {
    for (std::size_t i : front) pop[i].crowding = kInf;
    return;
  }
  std::vector<std::size_t> order(front);
  for (std::size_t k = 0; k < sense.size(); ++k) {
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return pop[a].x[k] < pop[b].x[k];
    });
    const double lo = pop[order.front()].x[k];
    const double hi = pop[order.back()].x[k];
    pop[order.front()].crowding = kInf;
    pop[order.back()].crowding = kInf;
    if (hi <= lo) continue;
    for (std::size_t m = 1; m + 1 < order.size(); ++m) {
      pop[order[m]].crowding +=
          (pop[order[m + 1]].x[k] - pop[order[m - 1]].x[k]) / (hi - lo);
    }
  }
}

// Feasible individuals are ranked by non-dominated sorting; infeasible ones
// follow, ordered by violation.
void assign_ranks(std::vector<Individual>& pop, std::span<const Sense> sense) {
  std::vector<std::size_t> feasible;
  std::vector<std::size_t> infeasible;
  for (std::size_t i = 0; i < pop.size(); ++i) {
    (pop[i].feasible ? feasible : infeasible).push_back(i);
  }

  const std::size_t n = feasible.size();
  std::vector<std::vector<std::size_t>> dominated(n);
  std::vector<std::size_t> counter(n, 0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const auto& xa = pop[feasible[a]].x;
      const auto& xb = pop[feasible[b]].x;
      if (dominates(xa, xb, sense)) {
        dominated[a].push_back(b);
        ++counter[b];
      } else if (dominates(xb, xa, sense)) {
        dominated[b].push_back(a);
        ++counter[a];
      }
    }
  }
  std::vector<std::size_t> current;
  for (std::size_t a = 0; a < n; ++a) {
    if (counter[a] == 0) current.push_back(a);
  }
  std::size_t rank = 0;
  while (!current.empty()) {
    std::vector<std::size_t> members;
    std::vector<std::size_t> next;
    for (std::size_t a : current) {
      pop[feasible[a]].rank = rank;
      members.push_back(feasible[a]);
      for (std::size_t b : dominated[a]) {
        if (--counter[b] == 0) next.push_back(b);
      }
    }
    assign_crowding(pop, members, sense);
    current = std::move(next);
    ++rank;
  }

  std::sort(infeasible.begin(), infeasible.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].violation < pop[b].violation;
  });
  for (std::size_t m = 0; m < infeasible.size(); ++m) {
    if (m > 0 && pop[infeasible[m]].violation > pop[infeasible[m - 1]].violation) ++rank;
    pop[infeasible[m]].rank = rank;
    pop[infeasible[m]].crowding = kInf;
  }
}

bool better(const Individual& a, const Individual& b) {
  if (a.rank != b.rank) return a.rank < b.rank;
  return a.crowding > b.crowding;
}

std::vector<std::vector<double>> feasible_front(const std::vector<Individual>& pop,
                                                std::span<const Sense> sense) {
  std::vector<std::vector<double>> points;
  for (const auto& ind : pop) {
    if (ind.feasible) points.push_back(ind.x);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<std::vector<double>> front;
  for (std::size_t i = 0; i < points.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < points.size() && !dominated; ++j) {
      dominated = j != i && dominates(points[j], points[i], sense);
    }
    if (!dominated) front.push_back(points[i]);
  }
  return front;
}

// Scalar summary of the population used for the stall test: best plus mean
// objective per coordinate over the feasible first front, or the smallest
// violation while nothing is feasible.
double front_indicator(const std::vector<Individual>& pop, std::span<const Sense> sense,
                       bool& any_feasible) {
  any_feasible = false;
  double best_violation = kInf;
  for (const auto& ind : pop) {
    any_feasible = any_feasible || ind.feasible;
    best_violation = std::min(best_violation, ind.violation);
  }
  if (!any_feasible) return best_violation;
  double total = 0.0;
  for (std::size_t k = 0; k < sense.size(); ++k) {
    double best = kInf;
    double sum = 0.0;
    std::size_t count = 0;
    for (const auto& ind : pop) {
      if (!ind.feasible || ind.rank != 0) continue;
      const double f = objective(ind.x, k, sense[k]);
      best = std::min(best, f);
      sum += f;
      ++count;
    }
    total += best + sum / static_cast<double>(count);
  }
  return total;
}

}  // namespace

void MooProblem::validate() const {
  if (dimension == 0) throw DomainError("MooProblem: dimension must be positive");
  if (sense.size() != dimension || box_lower.size() != dimension ||
      box_upper.size() != dimension) {
    throw DimensionError("MooProblem: sense/box sizes must equal dimension");
  }
  for (std::size_t k = 0; k < dimension; ++k) {
    if (!(box_lower[k] < box_upper[k])) {
      throw DomainError("MooProblem: box_lower must be below box_upper");
    }
  }
  if (!violation) throw DomainError("MooProblem: missing constraint oracle");
}

bool dominates(std::span<const double> a, std::span<const double> b,
               std::span<const Sense> sense) {
  bool strictly = false;
  for (std::size_t k = 0; k < sense.size(); ++k) {
    const double fa = sense[k] == Sense::kMaximize ? -a[k] : a[k];
    const double fb = sense[k] == Sense::kMaximize ? -b[k] : b[k];
    if (fa > fb) return false;
    if (fa < fb) strictly = true;
  }
  return strictly;
}

bool mutually_nondominated(const std::vector<std::vector<double>>& points,
                           std::span<const Sense> sense) {
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i != j && dominates(points[i], points[j], sense)) return false;
    }
  }
  return true;
}

ParetoFront pareto_solve(const MooProblem& problem, const MooSettings& settings) {
  problem.validate();
  if (settings.population_size < 2) throw DomainError("pareto_solve: population_size must be >= 2");
  if (settings.max_generations == 0) throw DomainError("pareto_solve: max_generations must be positive");

  const std::size_t dim = problem.dimension;
  const std::size_t pop_size = settings.population_size;
  std::mt19937_64 rng(settings.rng_seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Evaluator evaluator(problem, settings.threads);

  auto clamp_into_box = [&](std::vector<double>& x) {
    for (std::size_t k = 0; k < dim; ++k) {
      x[k] = std::clamp(x[k], problem.box_lower[k], problem.box_upper[k]);
    }
  };

  auto make_front = [&](const std::vector<Individual>& pop, std::size_t generation) {
    ParetoFront front;
    front.points = feasible_front(pop, problem.sense);
    front.generations = generation;
    front.evaluations = evaluator.evaluations();
    return front;
  };

  std::vector<Individual> population(pop_size);
  for (std::size_t i = 0; i < pop_size; ++i) {
    auto& x = population[i].x;
    if (i < settings.initial_points.size() && settings.initial_points[i].size() == dim) {
      x = settings.initial_points[i];
      clamp_into_box(x);
    } else {
      x.resize(dim);
      for (std::size_t k = 0; k < dim; ++k) {
        x[k] = problem.box_lower[k] + unit(rng) * (problem.box_upper[k] - problem.box_lower[k]);
      }
    }
  }
  evaluator.evaluate(population, settings.constraint_tolerance);
  assign_ranks(population, problem.sense);

  auto any_feasible = [](const std::vector<Individual>& pop) {
    return std::any_of(pop.begin(), pop.end(), [](const Individual& i) { return i.feasible; });
  };
  if (settings.stop_on_first_feasible && any_feasible(population)) {
    return make_front(population, 0);
  }

  auto tournament = [&]() -> const Individual& {
    std::uniform_int_distribution<std::size_t> pick(0, pop_size - 1);
    const Individual& a = population[pick(rng)];
    const Individual& b = population[pick(rng)];
    return better(b, a) ? b : a;
  };

  std::vector<double> indicator_history;
  bool last_feasible_flag = false;
  std::size_t generation = 0;
  for (generation = 1; generation <= settings.max_generations; ++generation) {
    const double decayed =
        settings.mutation_scale *
        std::pow(settings.mutation_shrink, static_cast<double>(generation - 1));
    const double scale = std::max(settings.min_mutation_scale, decayed);

    std::vector<Individual> offspring(pop_size);
    for (auto& child : offspring) {
      const Individual& p1 = tournament();
      bool crossed = false;
      if (dim > 1 && unit(rng) < settings.crossover_fraction) {
        const Individual& p2 = tournament();
        std::uniform_int_distribution<std::size_t> cut_pick(1, dim - 1);
        const std::size_t cut = cut_pick(rng);
        child.x = p1.x;
        std::copy(p2.x.begin() + static_cast<std::ptrdiff_t>(cut), p2.x.end(),
                  child.x.begin() + static_cast<std::ptrdiff_t>(cut));
        crossed = child.x != p1.x && child.x != p2.x;
      }
      if (!crossed) {
        child.x = p1.x;
        const double s = unit(rng) < settings.exploration_probability ? settings.mutation_scale : scale;
        std::uniform_int_distribution<std::size_t> gene_pick(0, dim - 1);
        const std::size_t forced = gene_pick(rng);
        for (std::size_t k = 0; k < dim; ++k) {
          if (k != forced && unit(rng) >= 1.0 / static_cast<double>(dim)) continue;
          child.x[k] += s * (problem.box_upper[k] - problem.box_lower[k]) * gauss(rng);
        }
        clamp_into_box(child.x);
      }
    }
    evaluator.evaluate(offspring, settings.constraint_tolerance);

    if (settings.stop_on_first_feasible && any_feasible(offspring)) {
      offspring.insert(offspring.end(), population.begin(), population.end());
      return make_front(offspring, generation);
    }

    population.insert(population.end(), std::make_move_iterator(offspring.begin()),
                      std::make_move_iterator(offspring.end()));
    assign_ranks(population, problem.sense);
    std::stable_sort(population.begin(), population.end(), better);
    population.resize(pop_size);
    assign_ranks(population, problem.sense);

    bool feasible_flag = false;
    const double indicator = front_indicator(population, problem.sense, feasible_flag);
    if (feasible_flag != last_feasible_flag) indicator_history.clear();
    last_feasible_flag = feasible_flag;
    indicator_history.push_back(indicator);
    const std::size_t stall = settings.stall_generations;
    if (stall > 0 && indicator_history.size() > stall) {
      const double then = indicator_history[indicator_history.size() - 1 - stall];
      if (std::abs(indicator - then) <= settings.function_tolerance * (1.0 + std::abs(then))) {
        break;
      }
    }
  }
  generation = std::min(generation, settings.max_generations);

  ParetoFront front = make_front(population, generation);
  if (front.points.empty()) {
    double best = kInf;
    for (const auto& ind : population) best = std::min(best, ind.violation);
    throw NoFeasiblePoint("pareto_solve: no feasible candidate found", best);
  }
  return front;
}

}  // namespace aloha::numerics
