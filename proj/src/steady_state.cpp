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

#include "aloha/steady_state.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <optional>
#include <random>
#include <sstream>

#include "aloha/errors.hpp"
#include "aloha/numerics/linalg.hpp"

namespace aloha {
namespace {

constexpr std::size_t kMaxEnumerated = 20;
// Extra room around the bracket before a coordinate counts as forced.
constexpr double kBracketSlack = 1e-6;

void check_sizes(const TrafficConfig& cfg, const Network& net) {
  if (net.size() == 0) throw DimensionError("network has no transmitters");
  cfg.validate(net.size());
}

void check_vector(std::span<const double> v, std::size_t k, const char* what) {
  if (v.size() != k) {
    std::ostringstream msg;
    msg << what << " has " << v.size() << " entries, expected " << k;
    throw DimensionError(msg.str());
  }
}

// p_i = isolated_i * prod_{j != i} (1 - coupling(i, j) * x_j)
std::vector<double> product_map(const CouplingModel& model, const std::vector<double>& x) {
  const std::size_t k = model.size();
  std::vector<double> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    double prod = model.isolated[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      prod *= 1.0 - model.coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
                        x[j];
    }
    out[i] = prod;
  }
  return out;
}

std::vector<double> state_busy(std::span<const double> p, const NetworkState& phi,
                               const TrafficConfig& cfg) {
  const std::size_t k = p.size();
  std::vector<double> x(k);
  for (std::size_t j = 0; j < k; ++j) {
    if (!phi.unsaturated(j)) {
      x[j] = cfg.q[j];
      continue;
    }
    if (p[j] == 0.0 && k > 1) {
      std::ostringstream msg;
      msg << "p_" << (j + 1) << " is zero for an unsaturated transmitter";
      throw PoleError(msg.str());
    }
    x[j] = cfg.lambda[j] / p[j];
  }
  return x;
}

std::vector<double> min_busy(std::span<const double> p, const TrafficConfig& cfg) {
  std::vector<double> x(p.size());
  for (std::size_t j = 0; j < p.size(); ++j) {
    x[j] = p[j] > 0.0 ? std::min(cfg.lambda[j] / p[j], cfg.q[j]) : cfg.q[j];
  }
  return x;
}

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

bool is_unsaturated(double lambda, double q, double p, double margin) {
  return lambda <= q * p - margin;
}

// Iterates the monotone min() map from `start` and keeps the last iterate.
std::vector<double> iterate_monotone(const CouplingModel& model, const TrafficConfig& cfg,
                                     std::vector<double> start, std::size_t max_iterations,
                                     double tolerance) {
  for (std::size_t it = 0; it < max_iterations; ++it) {
    std::vector<double> next = product_map(model, min_busy(start, cfg));
    const double step = max_abs_diff(next, start);
    start = std::move(next);
    if (step <= tolerance) break;
  }
  return start;
}

// Colex successor of a sorted c-combination of {0..n-1}; false at the end.
bool next_combination(std::vector<std::size_t>& idx, std::size_t n) {
  const std::size_t c = idx.size();
  for (std::size_t j = 0; j < c; ++j) {
    const std::size_t limit = (j + 1 < c) ? idx[j + 1] : n;
    if (idx[j] + 1 < limit) {
      ++idx[j];
      for (std::size_t t = 0; t < j; ++t) idx[t] = t;
      return true;
    }
  }
  return false;
}

enum class StateOutcome { kConsistent, kInconsistent, kNoAttractor };

struct SweepContext {
  const TrafficConfig& cfg;
  const Network& net;
  const CouplingModel& model;
  const SteadyStateOptions& options;
  std::vector<std::vector<double>> seeds;  // deterministic initial points
};

SteadyStateSolution make_solution(const FixedPoint& fp, const NetworkState& phi,
                                  const TrafficConfig& cfg, double residual) {
  SteadyStateSolution sol;
  sol.p = fp.p;
  sol.phi = phi;
  sol.busy = busy_probabilities(fp.p, cfg);
  sol.service_rate.resize(fp.p.size());
  for (std::size_t k = 0; k < fp.p.size(); ++k) sol.service_rate[k] = cfg.q[k] * fp.p[k];
  sol.attracting = fp.attracting;
  sol.spectral_radius = fp.spectral_radius;
  sol.consistency_residual = residual;
  return sol;
}

StateOutcome examine_state(const SweepContext& ctx, const NetworkState& phi,
                           std::uint64_t stream, std::optional<SteadyStateSolution>& out) {
  const std::size_t k = ctx.net.size();
  std::mt19937_64 rng(ctx.options.seed ^ (0x9E3779B97F4A7C15ULL * (stream + 1)));
  std::uniform_real_distribution<double> unit(1e-6, 1.0);
  const std::size_t attempts = ctx.seeds.size() + ctx.options.restarts;
  for (std::size_t attempt = 0; attempt < attempts; ++attempt) {
    std::vector<double> init;
    if (attempt < ctx.seeds.size()) {
      init = ctx.seeds[attempt];
    } else {
      init.resize(k);
      for (double& v : init) v = unit(rng);
    }
    FixedPoint fp;
    try {
      fp = solve_state_fixed_point(phi, ctx.cfg, ctx.net, init, ctx.options.fixed_point);
    } catch (const NoConvergence&) {
      continue;
    } catch (const PoleError&) {
      continue;
    } catch (const DomainError&) {
      continue;
    }
    if (!fp.attracting) continue;

    const double residual = consistency_residual(fp.p, ctx.cfg, ctx.net);
    bool branches_match = true;
    for (std::size_t j = 0; j < k && branches_match; ++j) {
      branches_match = is_unsaturated(ctx.cfg.lambda[j], ctx.cfg.q[j], fp.p[j],
                                      ctx.options.strictness_margin) == phi.unsaturated(j);
    }
    if (branches_match && residual <= ctx.options.consistency_tolerance) {
      out = make_solution(fp, phi, ctx.cfg, residual);
      return StateOutcome::kConsistent;
    }
    return StateOutcome::kInconsistent;
  }
  return StateOutcome::kNoAttractor;
}

SweepContext make_context(const TrafficConfig& cfg, const Network& net,
                          const CouplingModel& model, const SteadyStateOptions& options,
                          const Bracket& bracket) {
  SweepContext ctx{cfg, net, model, options, {}};
  std::vector<double> p_a = all_saturated_point(cfg, net);
  for (double& v : p_a) v = std::max(v, 1e-6);
  ctx.seeds.push_back(std::move(p_a));
  ctx.seeds.push_back(bracket.lower);
  ctx.seeds.push_back(bracket.upper);
  return ctx;
}

}  // namespace

TrafficConfig TrafficConfig::uniform(std::size_t k, double lambda, double q) {
  return TrafficConfig{std::vector<double>(k, lambda), std::vector<double>(k, q)};
}

void TrafficConfig::validate(std::size_t k) const {
  check_vector(lambda, k, "lambda");
  check_vector(q, k, "q");
  for (std::size_t i = 0; i < k; ++i) {
    if (!(q[i] > 0.0 && q[i] <= 1.0)) {
      std::ostringstream msg;
      msg << "q_" << (i + 1) << " = " << q[i] << " is outside (0, 1]";
      throw DomainError(msg.str());
    }
    if (!(lambda[i] >= 0.0 && lambda[i] < 1.0)) {
      std::ostringstream msg;
      msg << "lambda_" << (i + 1) << " = " << lambda[i] << " is outside [0, 1)";
      throw DomainError(msg.str());
    }
  }
}

std::size_t NetworkState::unsaturated_count() const {
  return static_cast<std::size_t>(
      std::count(states_.begin(), states_.end(), QueueState::kUnsaturated));
}

std::string NetworkState::to_string() const {
  std::string s;
  s.reserve(states_.size());
  for (QueueState q : states_) s.push_back(q == QueueState::kUnsaturated ? 'U' : 'S');
  return s;
}

std::vector<NetworkState> enumerate_states(std::size_t k) {
  if (k > kMaxEnumerated) {
    throw DimensionError("exhaustive state enumeration supports at most 20 transmitters");
  }
  std::vector<std::uint32_t> masks(std::size_t{1} << k);
  for (std::uint32_t m = 0; m < masks.size(); ++m) masks[m] = m;
  std::stable_sort(masks.begin(), masks.end(), [](std::uint32_t a, std::uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  std::vector<NetworkState> out;
  out.reserve(masks.size());
  for (std::uint32_t m : masks) {
    NetworkState s = NetworkState::all(k, QueueState::kSaturated);
    for (std::size_t i = 0; i < k; ++i) {
      if (m & (1u << i)) s.set(i, QueueState::kUnsaturated);
    }
    out.push_back(std::move(s));
  }
  return out;
}

CouplingModel::CouplingModel(const Network& net)
    : isolated(net.size()),
      coupling(Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(net.size()),
                                     static_cast<Eigen::Index>(net.size()))) {
  const std::size_t k = net.size();
  for (std::size_t i = 0; i < k; ++i) {
    const double theta = net.theta_of(i);
    const double own = net.own_snr(i);
    isolated[i] = std::exp(-theta / own);
    for (std::size_t j = 0; j < k; ++j) {
      if (j == i) continue;
      const double cross = net.cross_snr(j, i);
      coupling(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          cross > 0.0 ? theta / (theta + own / cross) : 0.0;
    }
  }
}

double conditional_success_prob(std::size_t i, std::span<const std::size_t> interferers,
                                const Network& net) {
  if (i >= net.size()) throw DimensionError("transmitter index out of range");
  const double theta = net.theta_of(i);
  const double own = net.own_snr(i);
  double denom = 1.0;
  for (std::size_t j : interferers) {
    if (j >= net.size()) throw DimensionError("interferer index out of range");
    if (j == i) continue;
    denom *= 1.0 + theta * net.cross_snr(j, i) / own;
  }
  return std::exp(-theta / own) / denom;
}

std::vector<double> f_phi(std::span<const double> p, const NetworkState& phi,
                          const TrafficConfig& cfg, const Network& net) {
  check_sizes(cfg, net);
  check_vector(p, net.size(), "p");
  if (phi.size() != net.size()) throw DimensionError("state size does not match network");
  return product_map(CouplingModel(net), state_busy(p, phi, cfg));
}

std::vector<double> all_saturated_point(const TrafficConfig& cfg, const Network& net) {
  check_sizes(cfg, net);
  return product_map(CouplingModel(net), cfg.q);
}

std::vector<double> busy_probabilities(std::span<const double> p, const TrafficConfig& cfg) {
  check_vector(p, cfg.lambda.size(), "p");
  return min_busy(p, cfg);
}

std::vector<double> consistency_map(std::span<const double> p, const TrafficConfig& cfg,
                                    const Network& net) {
  check_sizes(cfg, net);
  check_vector(p, net.size(), "p");
  return product_map(CouplingModel(net), min_busy(p, cfg));
}

double consistency_residual(std::span<const double> p, const TrafficConfig& cfg,
                            const Network& net) {
  return max_abs_diff(p, consistency_map(p, cfg, net));
}

Eigen::MatrixXd f_phi_jacobian(std::span<const double> p, const NetworkState& phi,
                               const TrafficConfig& cfg, const Network& net) {
  check_sizes(cfg, net);
  check_vector(p, net.size(), "p");
  const CouplingModel model(net);
  numerics::FiniteDiffOptions fd;
  fd.clamp = numerics::Interval{1e-12, 1.0};
  return numerics::finite_diff_jacobian(
      [&](std::span<const double> at) { return product_map(model, state_busy(at, phi, cfg)); },
      p, fd);
}

FixedPoint solve_state_fixed_point(const NetworkState& phi, const TrafficConfig& cfg,
                                   const Network& net, std::span<const double> init,
                                   const FixedPointOptions& options) {
  check_sizes(cfg, net);
  check_vector(init, net.size(), "initial point");
  if (phi.size() != net.size()) throw DimensionError("state size does not match network");
  const CouplingModel model(net);
  std::vector<double> max_coupling(net.size(), 0.0);
  for (std::size_t j = 0; j < net.size(); ++j) {
    max_coupling[j] = model.coupling.col(static_cast<Eigen::Index>(j)).maxCoeff();
  }

  std::vector<double> p(init.begin(), init.end());
  for (std::size_t it = 1; it <= options.max_iterations; ++it) {
    std::vector<double> next = product_map(model, state_busy(p, phi, cfg));
    for (std::size_t j = 0; j < next.size(); ++j) {
      // Below this floor some factor 1 - c_ij lambda_j / p_j turns negative
      // and the product no longer describes a probability.
      const double floor = phi.unsaturated(j) ? cfg.lambda[j] * max_coupling[j] : 0.0;
      if (!std::isfinite(next[j]) || next[j] <= 0.0 || next[j] > 1.0 || next[j] <= floor) {
        std::ostringstream msg;
        msg << "state " << phi.to_string() << ": iterate left the physical domain after "
            << it << " steps";
        throw NoConvergence(msg.str());
      }
    }
    const double step = max_abs_diff(next, p);
    p = std::move(next);
    if (step <= options.tolerance) {
      FixedPoint fp;
      fp.p = std::move(p);
      fp.iterations = it;
      fp.spectral_radius = numerics::spectral_radius(f_phi_jacobian(fp.p, phi, cfg, net));
      fp.attracting = fp.spectral_radius < 1.0 - options.attracting_margin;
      return fp;
    }
  }
  std::ostringstream msg;
  msg << "state " << phi.to_string() << ": no convergence within " << options.max_iterations
      << " iterations";
  throw NoConvergence(msg.str());
}

Bracket consistency_bracket(const TrafficConfig& cfg, const Network& net,
                            std::size_t max_iterations, double tolerance) {
  check_sizes(cfg, net);
  const CouplingModel model(net);
  Bracket b;
  b.lower = iterate_monotone(model, cfg, product_map(model, cfg.q), max_iterations, tolerance);
  b.upper = iterate_monotone(model, cfg, model.isolated, max_iterations, tolerance);
  return b;
}

SteadyStateSolution steady_state(const TrafficConfig& cfg, const Network& net,
                                 const SteadyStateOptions& options) {
  check_sizes(cfg, net);
  const std::size_t k = net.size();
  const CouplingModel model(net);
  const Bracket bracket = consistency_bracket(cfg, net, options.bracket_iterations);
  const SweepContext ctx = make_context(cfg, net, model, options, bracket);

  // Coordinates whose branch is fixed across the whole bracket.
  NetworkState base = NetworkState::all(k, QueueState::kSaturated);
  std::vector<std::size_t> free_idx;
  for (std::size_t j = 0; j < k; ++j) {
    const double lo = std::max(bracket.lower[j] - kBracketSlack, 0.0);
    const double hi = bracket.upper[j] + kBracketSlack;
    const double margin = options.strictness_margin;
    if (is_unsaturated(cfg.lambda[j], cfg.q[j], lo, margin)) {
      base.set(j, QueueState::kUnsaturated);
    } else if (!is_unsaturated(cfg.lambda[j], cfg.q[j], hi, margin)) {
      continue;
    } else {
      free_idx.push_back(j);
    }
  }

  const std::size_t n = free_idx.size();
  std::size_t examined = 0;
  std::optional<SteadyStateSolution> found;
  for (std::size_t count = 0; count <= n; ++count) {
    std::vector<std::size_t> combo(count);
    for (std::size_t t = 0; t < count; ++t) combo[t] = t;
    do {
      if (examined >= options.max_states) {
        if (found) break;
        std::ostringstream msg;
        msg << "state budget of " << options.max_states << " exhausted with " << n
            << " undetermined transmitters";
        throw NoSteadyStateFound(msg.str());
      }
      NetworkState phi = base;
      for (std::size_t t : combo) phi.set(free_idx[t], QueueState::kUnsaturated);
      std::optional<SteadyStateSolution> sol;
      const StateOutcome outcome = examine_state(ctx, phi, examined, sol);
      ++examined;
      if (outcome != StateOutcome::kConsistent) continue;
      if (found) {
        found->ambiguous = true;
        break;
      }
      found = std::move(sol);
      if (!options.check_ambiguity) break;
    } while (next_combination(combo, n));
    if (found) {
      found->states_examined = examined;
      return *found;
    }
  }
  std::ostringstream msg;
  msg << "no consistent attracting state among " << examined << " candidates";
  throw NoSteadyStateFound(msg.str());
}

std::vector<SteadyStateSolution> consistent_states(const TrafficConfig& cfg, const Network& net,
                                                   const SteadyStateOptions& options) {
  check_sizes(cfg, net);
  const CouplingModel model(net);
  const Bracket bracket = consistency_bracket(cfg, net, options.bracket_iterations);
  const SweepContext ctx = make_context(cfg, net, model, options, bracket);
  std::vector<SteadyStateSolution> out;
  std::uint64_t stream = 0;
  for (const NetworkState& phi : enumerate_states(net.size())) {
    std::optional<SteadyStateSolution> sol;
    if (examine_state(ctx, phi, stream++, sol) == StateOutcome::kConsistent) {
      sol->states_examined = stream;
      out.push_back(std::move(*sol));
    }
  }
  return out;
}

}  // namespace aloha
