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

#include "aloha/regions.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include "aloha/errors.hpp"
#include "aloha/numerics/lambert_w.hpp"
#include "aloha/parallel.hpp"

namespace aloha {
namespace {

constexpr double kNoSteadyStateViolation = 10.0;
constexpr double kInvE = 0.36787944117144233;

void check_lambda(std::span<const double> lambda, const Network& net) {
  if (lambda.size() != net.size()) throw DimensionError("lambda size does not match network");
}

// Candidate transmission probabilities just above lambda / p_L, where the
// all-unsaturated state is most likely to be the first consistent one.
std::vector<std::vector<double>> q_seeds(std::span<const double> lambda, const Network& net,
                                         const ParamMap& q_map, double q_min, double q_max) {
  std::vector<std::vector<double>> seeds;
  const UnsaturatedPoint up = greatest_unsaturated_point(lambda, net);
  if (up.exists) {
    for (double eps : {1e-3, 1e-2, 0.05, 0.2, 0.5, 1.0}) {
      std::vector<double> q(lambda.size());
      for (std::size_t k = 0; k < q.size(); ++k) {
        q[k] = std::clamp(lambda[k] / up.p[k] * (1.0 + eps) + 1e-8, q_min, q_max);
      }
      seeds.push_back(q_map.reduce_max(q));
    }
  }
  seeds.emplace_back(q_map.dimension, q_max);
  return seeds;
}

}  // namespace

ParamMap ParamMap::per_transmitter(std::size_t k) {
  ParamMap m;
  m.dimension = k;
  for (std::size_t i = 0; i < k; ++i) m.group.push_back(i);
  return m;
}

ParamMap ParamMap::shared(std::size_t k) {
  ParamMap m;
  m.dimension = 1;
  m.group.assign(k, 0);
  return m;
}

ParamMap ParamMap::by_receiver(const Network& net) {
  ParamMap m;
  std::map<int, std::size_t> dense;
  for (int rx : net.serving) dense.emplace(rx, 0);
  std::size_t next = 0;
  for (auto& [rx, idx] : dense) idx = next++;
  for (int rx : net.serving) m.group.push_back(dense[rx]);
  m.dimension = next;
  return m;
}

std::vector<double> ParamMap::expand(std::span<const double> coords) const {
  if (coords.size() != dimension) throw DimensionError("coordinate count does not match map");
  std::vector<double> out(group.size());
  for (std::size_t k = 0; k < group.size(); ++k) out[k] = coords[group[k]];
  return out;
}

std::vector<double> ParamMap::reduce_max(std::span<const double> per_tx) const {
  if (per_tx.size() != group.size()) throw DimensionError("value count does not match map");
  std::vector<double> out(dimension, -std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < group.size(); ++k) out[group[k]] = std::max(out[group[k]], per_tx[k]);
  return out;
}

void ParamMap::validate(std::size_t k) const {
  if (group.size() != k) throw DimensionError("parameter map does not cover every transmitter");
  std::vector<bool> used(dimension, false);
  for (std::size_t g : group) {
    if (g >= dimension) throw DimensionError("parameter map group out of range");
    used[g] = true;
  }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    throw DimensionError("parameter map has an unused coordinate");
  }
}

Membership check_unsat_membership(std::span<const double> q, std::span<const double> lambda,
                                  const Network& net, const SteadyStateOptions& options) {
  check_lambda(lambda, net);
  const TrafficConfig cfg{{lambda.begin(), lambda.end()}, {q.begin(), q.end()}};
  Membership out;
  try {
    out.solution = steady_state(cfg, net, options);
  } catch (const NoSteadyStateFound& e) {
    out.diagnostic = e.what();
    return out;
  }
  out.member = out.solution->all_unsaturated();
  return out;
}

bool unsat_membership(std::span<const double> q, std::span<const double> lambda,
                      const Network& net, const SteadyStateOptions& options) {
  return check_unsat_membership(q, lambda, net, options).member;
}

double unsat_violation(std::span<const double> q, std::span<const double> lambda,
                       const Network& net, const SteadyStateOptions& options, double tolerance) {
  const Membership m = check_unsat_membership(q, lambda, net, options);
  if (m.member) return 0.0;
  if (!m.solution) return kNoSteadyStateViolation;
  double shortfall = 0.0;
  for (std::size_t k = 0; k < lambda.size(); ++k) {
    shortfall += std::max(0.0, lambda[k] + options.strictness_margin - m.solution->service_rate[k]);
  }
  return 10.0 * tolerance + shortfall;
}

UnsaturatedPoint greatest_unsaturated_point(std::span<const double> lambda, const Network& net,
                                            std::size_t max_iterations) {
  check_lambda(lambda, net);
  const CouplingModel model(net);
  const std::size_t k = net.size();
  std::vector<double> floor(k);
  for (std::size_t j = 0; j < k; ++j) {
    floor[j] = lambda[j] * model.coupling.col(static_cast<Eigen::Index>(j)).maxCoeff();
  }
  UnsaturatedPoint out;
  std::vector<double> p = model.isolated;
  std::vector<double> next(k);
  for (std::size_t it = 0; it < max_iterations; ++it) {
    double step = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      double prod = model.isolated[i];
      for (std::size_t j = 0; j < k; ++j) {
        if (j == i) continue;
        prod *= 1.0 - model.coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                          lambda[j] / p[j];
      }
      next[i] = prod;
    }
    for (std::size_t i = 0; i < k; ++i) {
      if (!(next[i] > floor[i])) {
        out.converged = true;
        return out;
      }
      step = std::max(step, std::abs(next[i] - p[i]));
    }
    p.swap(next);
    if (step <= 1e-14) {
      out.exists = true;
      out.converged = true;
      out.p = std::move(p);
      return out;
    }
  }
  return out;
}

UnsatRegion unsat_region(std::span<const double> lambda, const Network& net,
                         const RegionSettings& settings, const ParamMap& q_map) {
  check_lambda(lambda, net);
  q_map.validate(net.size());
  UnsatRegion region;
  region.lambda.assign(lambda.begin(), lambda.end());
  region.map = q_map;

  const std::vector<double> lam(lambda.begin(), lambda.end());
  const double tol = settings.search.constraint_tolerance;
  numerics::MooProblem problem;
  problem.dimension = q_map.dimension;
  problem.box_lower.assign(q_map.dimension, settings.q_min);
  problem.box_upper.assign(q_map.dimension, settings.q_max);
  problem.violation = [&, lam](std::span<const double> coords) {
    return unsat_violation(q_map.expand(coords), lam, net, settings.steady, tol);
  };

  numerics::MooSettings search = settings.search;
  auto seeds = q_seeds(lam, net, q_map, settings.q_min, settings.q_max);
  search.initial_points.insert(search.initial_points.end(), seeds.begin(), seeds.end());

  problem.sense.assign(q_map.dimension, numerics::Sense::kMaximize);
  try {
    region.q1 = numerics::pareto_solve(problem, search);
  } catch (const NoFeasiblePoint&) {
    return region;
  }
  region.empty = false;
  problem.sense.assign(q_map.dimension, numerics::Sense::kMinimize);
  search.initial_points.insert(search.initial_points.end(), region.q1.points.begin(),
                               region.q1.points.end());
  region.q2 = numerics::pareto_solve(problem, search);
  return region;
}

numerics::MooSettings StabilitySettings::default_inner() {
  numerics::MooSettings s;
  s.population_size = 200;
  s.max_generations = 300;
  s.stall_generations = 30;
  s.stop_on_first_feasible = true;
  return s;
}

StabilityCheck check_stability(std::span<const double> lambda, const Network& net,
                               const StabilitySettings& settings, const ParamMap& q_map) {
  check_lambda(lambda, net);
  q_map.validate(net.size());
  StabilityCheck out;
  const std::vector<double> lam(lambda.begin(), lambda.end());
  const double tol = settings.inner.constraint_tolerance;

  const UnsaturatedPoint up = greatest_unsaturated_point(lam, net);
  if (!up.exists && up.converged) {
    // No all-unsaturated fixed point at all; grade by total load.
    double load = 0.0;
    for (double l : lam) load += l;
    out.violation = 1.0 + load;
    return out;
  }

  const auto seeds = q_seeds(lam, net, q_map, settings.q_min, 1.0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& coords : seeds) {
    const auto q = q_map.expand(coords);
    const double v = unsat_violation(q, lam, net, settings.steady, tol);
    if (v <= tol) {
      out.member = true;
      out.q = q;
      return out;
    }
    best = std::min(best, v);
  }

  numerics::MooProblem problem;
  problem.dimension = q_map.dimension;
  problem.sense.assign(q_map.dimension, numerics::Sense::kMaximize);
  problem.box_lower.assign(q_map.dimension, settings.q_min);
  problem.box_upper.assign(q_map.dimension, 1.0);
  problem.violation = [&](std::span<const double> coords) {
    return unsat_violation(q_map.expand(coords), lam, net, settings.steady, tol);
  };
  numerics::MooSettings inner = settings.inner;
  inner.stop_on_first_feasible = true;
  inner.initial_points.insert(inner.initial_points.end(), seeds.begin(), seeds.end());
  try {
    const auto front = numerics::pareto_solve(problem, inner);
    out.member = true;
    out.q = q_map.expand(front.points.front());
  } catch (const NoFeasiblePoint& e) {
    out.violation = std::min(best, e.best_violation());
  }
  return out;
}

bool stability_membership(std::span<const double> lambda, const Network& net,
                          const StabilitySettings& settings, const ParamMap& q_map) {
  return check_stability(lambda, net, settings, q_map).member;
}

StabilityRegion stability_region(const Network& net, const StabilitySettings& settings,
                                 const ParamMap& lambda_map, const ParamMap& q_map) {
  lambda_map.validate(net.size());
  q_map.validate(net.size());
  StabilityRegion region;
  region.map = lambda_map;
  const double tol = settings.outer.constraint_tolerance;

  numerics::MooProblem problem;
  problem.dimension = lambda_map.dimension;
  problem.sense.assign(lambda_map.dimension, numerics::Sense::kMaximize);
  problem.box_lower.assign(lambda_map.dimension, settings.lambda_min);
  problem.box_upper.assign(lambda_map.dimension, settings.lambda_max);
  problem.violation = [&](std::span<const double> coords) {
    const auto check = check_stability(lambda_map.expand(coords), net, settings, q_map);
    return check.member ? 0.0 : std::max(check.violation, 10.0 * tol);
  };
  numerics::MooSettings outer = settings.outer;
  outer.initial_points.emplace_back(lambda_map.dimension, settings.lambda_min);
  try {
    region.q3 = numerics::pareto_solve(problem, outer);
    region.empty = false;
  } catch (const NoFeasiblePoint&) {
  }
  return region;
}

double ray_boundary(std::span<const double> direction,
                    const std::function<bool(std::span<const double>)>& member, double t_max,
                    double tolerance) {
  std::vector<double> x(direction.size());
  auto at = [&](double t) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = t * direction[i];
    return member(x);
  };
  if (at(t_max)) return t_max;
  double lo = 0.0, hi = t_max;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (at(mid) ? lo : hi) = mid;
  }
  return lo;
}

bool TwoTrUnsatRegion::contains(const Pair& q) const {
  for (std::size_t i = 0; i < 2; ++i) {
    const std::size_t j = 1 - i;
    // The cap at 1 is inclusive: q_i = 1 is admissible when the repelling
    // ratio lies above 1.
    const bool qi_ok = q[i] > lower[i] && (upper[i] < 1.0 ? q[i] < upper[i] : q[i] <= 1.0);
    const bool qj_ok = q[j] > lower[j] && q[j] <= 1.0;
    if (qi_ok && qj_ok) return true;
  }
  return false;
}

std::vector<Pair> TwoTrUnsatRegion::upper_front() const {
  std::vector<Pair> out;
  if (lower[0] < upper[0] && lower[1] < 1.0) out.push_back({upper[0], 1.0});
  if (lower[1] < upper[1] && lower[0] < 1.0) {
    const Pair second{1.0, upper[1]};
    if (out.empty() || out.front() != second) out.push_back(second);
  }
  return out;
}

std::vector<Pair> TwoTrUnsatRegion::lower_front() const { return {lower}; }

TwoTrUnsatRegion theorem1_region(const TwoTrClosedForm& closed) {
  if (!closed.exists) throw EmptyRegion("no all-unsaturated fixed point for this lambda");
  TwoTrUnsatRegion r;
  r.closed = closed;
  for (std::size_t i = 0; i < 2; ++i) {
    r.lower[i] = closed.lower_ratio(i);
    r.upper[i] = std::min(closed.upper_ratio(i), 1.0);
  }
  if (r.upper_front().empty()) throw EmptyRegion("all-unsaturated region is empty");
  return r;
}

Interval1D theorem2_region(std::size_t k, double lambda, double theta, double rho) {
  if (k < 2) throw DimensionError("symmetric region needs K >= 2");
  if (!(lambda >= 0.0) || !(theta > 0.0) || !(rho > 0.0)) {
    throw DomainError("symmetric region needs lambda >= 0 and positive theta, rho");
  }
  if (lambda == 0.0) return {0.0, 1.0};
  const double kd = static_cast<double>(k);
  const double z = -kd * theta * lambda / (theta + 1.0) * std::exp(theta / rho);
  if (z < -kInvE - 1e-12) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " exceeds the all-unsaturated bound";
    throw EmptyRegion(msg.str());
  }
  const double scale = (theta + 1.0) / (kd * theta);
  Interval1D out;
  out.lower = -scale * numerics::lambert_w0(z);
  out.upper = std::min(-scale * numerics::lambert_wm1(z), 1.0);
  if (out.lower >= 1.0) throw EmptyRegion("required transmission probability exceeds 1");
  return out;
}

std::string to_string(TwoTrCase c) {
  switch (c) {
    case TwoTrCase::kSumAboveOne: return "b1+b2>1";
    case TwoTrCase::kSumEqualOne: return "b1+b2=1";
    case TwoTrCase::kSumBelowOne: return "b1+b2<1";
  }
  return "unknown";
}

bool TwoTrStabilityGeometry::contains(const Pair& lambda) const {
  const double u1 = lambda[0] / a[0];
  const double u2 = lambda[1] / a[1];
  const bool e_ok = std::sqrt(b[0] * u1) + std::sqrt(b[1] * u2) < 1.0;
  const bool d_ok = (1.0 - b[0]) * u1 + b[1] * u2 < 1.0 - b[0] || (2.0 - b[0]) * u1 + b[1] * u2 < 1.0;
  const bool f_ok = b[0] * u1 + (1.0 - b[1]) * u2 < 1.0 - b[1] || b[0] * u1 + (2.0 - b[1]) * u2 < 1.0;
  return e_ok && d_ok && f_ok;
}

double TwoTrStabilityGeometry::max_lambda1(double lambda2, double tolerance) const {
  if (contains({1.0, lambda2})) return 1.0;
  if (!contains({0.0, lambda2})) return 0.0;
  double lo = 0.0, hi = 1.0;
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (contains({mid, lambda2}) ? lo : hi) = mid;
  }
  return lo;
}

TwoTrStabilityGeometry theorem3_region(const TwoTrClosedForm& closed) {
  TwoTrStabilityGeometry g;
  g.a = closed.a;
  g.b = closed.b;
  const auto [a1, a2] = closed.a;
  const auto [b1, b2] = closed.b;
  g.d = {(1.0 - b1) / a1, b2 / a2, 1.0 - b1};
  g.f = {b1 / a1, (1.0 - b2) / a2, 1.0 - b2};
  g.A = {a1 * (1.0 - b2) * (1.0 - b2) / b1, a2 * b2};
  g.B = {a1 * b1, a2 * (1.0 - b1) * (1.0 - b1) / b2};
  g.C = {a1 * (1.0 - b2), a2 * (1.0 - b1)};
  // b_i = 1 / (1 + r_i) with r1 = rho22 / (rho12 theta2), r2 = rho11 / (rho21 theta1).
  g.snr_ratio = (1.0 / b1 - 1.0) * (1.0 / b2 - 1.0);
  const double sum = b1 + b2;
  if (std::abs(sum - 1.0) <= 1e-12) g.shape = TwoTrCase::kSumEqualOne;
  else g.shape = sum > 1.0 ? TwoTrCase::kSumAboveOne : TwoTrCase::kSumBelowOne;
  return g;
}

double theorem4_lambda_u(std::size_t k, double theta, double rho) {
  if (k < 2) throw DimensionError("symmetric bound needs K >= 2");
  if (!(theta > 0.0) || !(rho > 0.0)) throw DomainError("theta and rho must be positive");
  const double kd = static_cast<double>(k);
  if (theta >= 1.0 / (kd - 1.0)) {
    return (theta + 1.0) / (kd * theta) * std::exp(-1.0 - theta / rho);
  }
  return std::exp(-kd * theta / (theta + 1.0) - theta / rho);
}

double symmetric_exact_lambda_max(std::size_t k, double theta, double rho) {
  if (k < 2) throw DimensionError("symmetric bound needs K >= 2");
  if (!(theta > 0.0) || !(rho > 0.0)) throw DomainError("theta and rho must be positive");
  const double kd = static_cast<double>(k);
  const double a = std::exp(-theta / rho);
  const double c = theta / (theta + 1.0);
  if (1.0 / (kd * c) <= 1.0) {
    return a / c / kd * std::pow((kd - 1.0) / kd, kd - 1.0);
  }
  // q = 1 binds: the largest lambda with a fixed point p = a (1 - c lambda / p)^(K-1)
  // and lambda / p <= 1 is lambda = p at p = a (1 - c)^(K-1).
  return a * std::pow(1.0 - c, kd - 1.0);
}

std::vector<double> GridAxis::values() const {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + static_cast<double>(i + 1) * (hi - lo) / static_cast<double>(n);
  }
  return out;
}

std::vector<GridCell> region_grid(const std::vector<GridAxis>& axes, const GridEvaluator& eval,
                                  std::size_t threads) {
  if (axes.empty()) throw DimensionError("grid needs at least one axis");
  std::vector<std::vector<double>> values;
  std::size_t total = 1;
  for (const auto& axis : axes) {
    if (axis.n == 0) throw DomainError("grid axis " + axis.name + " has no points");
    values.push_back(axis.values());
    total *= axis.n;
  }
  std::vector<GridCell> cells(total);
  parallel_for(total, threads, [&](std::size_t index) {
    std::vector<double> coords(axes.size());
    std::size_t rest = index;
    for (std::size_t d = axes.size(); d-- > 0;) {
      coords[d] = values[d][rest % axes[d].n];
      rest /= axes[d].n;
    }
    GridCell cell = eval(coords);
    cell.coords = std::move(coords);
    cells[index] = std::move(cell);
  });
  return cells;
}

void write_grid_csv(std::ostream& out, const std::vector<GridAxis>& axes,
                    const std::vector<GridCell>& cells, std::size_t k) {
  for (const auto& axis : axes) out << axis.name << ',';
  out << "member";
  for (std::size_t i = 1; i <= k; ++i) out << ",p_" << i;
  out << '\n';
  out << std::setprecision(10);
  for (const auto& cell : cells) {
    for (double c : cell.coords) out << c << ',';
    out << (cell.member ? 1 : 0);
    for (std::size_t i = 0; i < k; ++i) {
      out << ',';
      if (i < cell.p.size()) out << cell.p[i];
    }
    out << '\n';
  }
}

GridEvaluator unsat_q_evaluator(std::vector<double> lambda, const Network& net,
                                const ParamMap& q_map, const SteadyStateOptions& options) {
  return [lambda = std::move(lambda), &net, q_map, options](std::span<const double> coords) {
    const Membership m = check_unsat_membership(q_map.expand(coords), lambda, net, options);
    GridCell cell;
    cell.member = m.member;
    if (m.solution) cell.p = m.solution->p;
    return cell;
  };
}

}  // namespace aloha
