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

#include "aloha/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "aloha/errors.hpp"
#include "aloha/parallel.hpp"

namespace aloha {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

void check_network(const Network& net, const TrafficConfig& cfg) {
  const std::size_t k = net.size();
  if (k == 0) throw EmptyTopology("simulate: network has no transmitters");
  cfg.validate(k);
  if (static_cast<std::size_t>(net.rho.rows()) != k || net.theta.size() != static_cast<std::size_t>(net.rho.cols())) {
    throw DimensionError("simulate: rho must be K x L with one threshold per receiver");
  }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  std::uint64_t x = splitmix64(base);
  x = splitmix64(x ^ (0xD1B54A32D192ED03ULL * (a + 1)));
  return splitmix64(x ^ (0x8CB92BA72F3D8DD7ULL * (b + 1)));
}

std::uint64_t SimConfig::warmup() const { return warmup_slots.value_or(slots / 10); }

std::uint64_t SimConfig::window() const {
  return stability_window.value_or(slots / 5);
}

void SimConfig::validate() const {
  if (slots == 0) throw DomainError("SimConfig: slots must be positive");
  if (warmup() >= slots) throw DomainError("SimConfig: warmup_slots must be below slots");
  if (window() > slots - warmup()) {
    throw DomainError("SimConfig: stability_window exceeds the measured slots");
  }
  if (trace && trace_stride == 0) throw DomainError("SimConfig: trace_stride must be positive");
  if (!(thresholds.min_empty_fraction >= 0.0) || !std::isfinite(thresholds.max_slope)) {
    throw DomainError("SimConfig: invalid stability thresholds");
  }
}

void QueueWindow::add(std::uint64_t t, std::uint64_t queue) {
  const double x = static_cast<double>(t);
  const double y = static_cast<double>(queue);
  ++slots;
  if (queue == 0) ++empty_slots;
  sum_t += x;
  sum_tt += x * x;
  sum_q += y;
  sum_tq += x * y;
}

double QueueWindow::empty_fraction() const {
  return slots == 0 ? 0.0 : static_cast<double>(empty_slots) / static_cast<double>(slots);
}

double QueueWindow::slope() const {
  if (slots < 2) return 0.0;
  const double n = static_cast<double>(slots);
  const double sxx = sum_tt - sum_t * sum_t / n;
  if (!(sxx > 0.0)) return 0.0;
  return (sum_tq - sum_t * sum_q / n) / sxx;
}

bool classify_stability(const QueueWindow& window, const StabilityThresholds& thresholds) {
  if (window.slots == 0) return false;
  return window.empty_fraction() >= thresholds.min_empty_fraction &&
         window.slope() <= thresholds.max_slope;
}

SimResult simulate(const Network& net, const TrafficConfig& cfg, const SimConfig& sim) {
  check_network(net, cfg);
  sim.validate();
  const std::size_t k = net.size();
  const std::size_t num_rx = net.theta.size();
  const std::uint64_t warmup = sim.warmup();
  const std::uint64_t window_start = sim.slots - sim.window();

  const CouplingModel model(net);
  Eigen::MatrixXd log_pass(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  std::vector<double> log_isolated(k);
  for (std::size_t i = 0; i < k; ++i) {
    log_isolated[i] = std::log(model.isolated[i]);
    for (std::size_t j = 0; j < k; ++j) {
      const auto ii = static_cast<Eigen::Index>(i);
      const auto jj = static_cast<Eigen::Index>(j);
      log_pass(ii, jj) = i == j ? 0.0 : std::log1p(-model.coupling(ii, jj));
    }
  }

  std::mt19937_64 rng(sim.seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  std::exponential_distribution<double> fading(1.0);

  SimResult result;
  result.slots = sim.slots;
  result.measured_slots = sim.slots - warmup;
  result.tx.resize(k);
  std::vector<std::uint64_t> queue(k, 0);
  std::vector<double> queue_sum(k, 0.0);
  std::vector<std::size_t> active;
  std::vector<char> success(k, 0);
  std::vector<double> gain(k, 0.0);
  std::vector<std::vector<std::size_t>> served(num_rx);
  std::vector<std::size_t> used_rx;
  active.reserve(k);
  used_rx.reserve(num_rx);

  for (std::uint64_t t = 0; t < sim.slots; ++t) {
    if (!sim.saturated) {
      for (std::size_t i = 0; i < k; ++i) {
        if (uniform(rng) < cfg.lambda[i]) {
          ++queue[i];
          ++result.tx[i].arrivals;
        }
      }
    }

    active.clear();
    for (std::size_t i = 0; i < k; ++i) {
      if ((sim.saturated || queue[i] > 0) && uniform(rng) < cfg.q[i]) active.push_back(i);
    }

    used_rx.clear();
    for (const std::size_t i : active) {
      const auto l = static_cast<std::size_t>(net.serving[i]);
      if (served[l].empty()) used_rx.push_back(l);
      served[l].push_back(i);
    }
    for (const std::size_t l : used_rx) {
      const auto& members = served[l];
      if (sim.decode == DecodeMethod::kConditionalProbability && members.size() == 1) {
        const std::size_t i = members.front();
        double log_p = log_isolated[i];
        for (const std::size_t j : active) log_p += log_pass(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        success[i] = uniform(rng) < std::exp(log_p);
        continue;
      }
      double total = 0.0;
      for (const std::size_t j : active) {
        gain[j] = fading(rng) * net.rho(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l));
        total += gain[j];
      }
      for (const std::size_t i : members) {
        success[i] = gain[i] >= net.theta[l] * (total - gain[i] + 1.0);
      }
    }
    for (const std::size_t l : used_rx) served[l].clear();

    const bool measured = t >= warmup;
    for (const std::size_t i : active) {
      auto& st = result.tx[i];
      if (measured) ++st.attempts;
      if (!success[i]) continue;
      success[i] = 0;
      if (measured) ++st.successes;
      if (!sim.saturated) {
        --queue[i];
        ++st.departures;
      }
    }

    if (measured) {
      for (std::size_t i = 0; i < k; ++i) queue_sum[i] += static_cast<double>(queue[i]);
    }
    if (t >= window_start && !sim.saturated) {
      const std::uint64_t rel = t - window_start;
      for (std::size_t i = 0; i < k; ++i) result.tx[i].window.add(rel, queue[i]);
      if (sim.trace && rel % sim.trace_stride == 0) {
        for (std::size_t i = 0; i < k; ++i) result.trace.push_back({t, i, queue[i]});
      }
    }
  }

  const double measured_slots = static_cast<double>(result.measured_slots);
  for (std::size_t i = 0; i < k; ++i) {
    auto& st = result.tx[i];
    st.measured_p = st.attempts == 0
                        ? 0.0
                        : static_cast<double>(st.successes) / static_cast<double>(st.attempts);
    st.throughput = static_cast<double>(st.successes) / measured_slots;
    st.mean_queue = queue_sum[i] / measured_slots;
    st.final_queue = queue[i];
    st.stable = !sim.saturated && classify_stability(st.window, sim.thresholds);
    result.total_throughput += st.throughput;
    if (st.stable) ++result.stable_count;
  }
  return result;
}

SimResult simulate(const Topology& topo, const TrafficConfig& cfg, const SimConfig& sim) {
  validate(topo);
  return simulate(make_network(topo), cfg, sim);
}

void write_queue_trace_csv(const SimResult& result, std::span<const int> ids,
                           const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "slot,tx_id,queue_len\n";
  for (const auto& row : result.trace) {
    const int id = row.transmitter < ids.size() ? ids[row.transmitter]
                                                 : static_cast<int>(row.transmitter) + 1;
    out << row.slot << ',' << id << ',' << row.queue << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

std::string VerifyReport::summary() const {
  std::ostringstream os;
  os << (pass ? "PASS" : "FAIL") << " state=" << analysis.phi.to_string();
  if (!offending.empty()) {
    os << " offending=";
    for (std::size_t n = 0; n < offending.size(); ++n) {
      os << (n == 0 ? "" : ",") << offending[n] + 1;
    }
  }
  return os.str();
}

VerifyReport verify_against_analysis(const Network& net, const TrafficConfig& cfg,
                                     const SimConfig& sim, const VerifyTolerances& tol,
                                     const SteadyStateOptions& steady) {
  VerifyReport report;
  report.analysis = steady_state(cfg, net, steady);
  report.simulation = simulate(net, cfg, sim);
  const std::size_t k = net.size();
  report.rows.resize(k);
  for (std::size_t i = 0; i < k; ++i) {
    const auto& st = report.simulation.tx[i];
    auto& row = report.rows[i];
    row.analytic_p = report.analysis.p[i];
    row.measured_p = st.measured_p;
    row.p_error = std::abs(st.measured_p - row.analytic_p);
    row.p_ok = st.attempts == 0 || row.p_error <= tol.p_abs;
    row.expected_throughput = std::min(cfg.lambda[i], report.analysis.service_rate[i]);
    row.throughput = st.throughput;
    const double diff = std::abs(st.throughput - row.expected_throughput);
    row.throughput_rel_error = row.expected_throughput > 0.0 ? diff / row.expected_throughput
                                                              : (diff > 0.0 ? 1.0 : 0.0);
    row.throughput_ok = row.throughput_rel_error <= tol.throughput_rel;
    row.analytic_unsaturated = report.analysis.phi.unsaturated(i);
    row.simulated_stable = st.stable;
    row.state_ok = !tol.check_saturation || sim.saturated ||
                   row.analytic_unsaturated == row.simulated_stable;
    if (!row.ok()) report.offending.push_back(i);
  }
  report.pass = report.offending.empty();
  return report;
}

std::vector<PercentStableRow> experiment_percent_stable(const PercentStableSettings& settings,
                                                        const SimConfig& sim) {
  if (!(settings.density > 0.0)) throw DomainError("experiment: density must be positive");
  if (settings.samples == 0) throw DomainError("experiment: samples must be positive");
  for (const double side : settings.side_lengths) {
    if (!(side > 0.0)) throw DomainError("experiment: side lengths must be positive");
  }
  sim.validate();

  const std::size_t sides = settings.side_lengths.size();
  const std::size_t samples = settings.samples;
  // Per task: stable share in percent and transmitter count, -1 for an empty draw.
  std::vector<double> share(sides * samples, 0.0);
  std::vector<long> count(sides * samples, -1);
  parallel_for(sides * samples, settings.threads, [&](std::size_t task) {
    const std::size_t s = task / samples;
    const std::size_t n = task % samples;
    const std::uint64_t base = derive_seed(settings.seed, s, n);
    std::vector<Point> points;
    try {
      points = gen_ppp_square(settings.density, settings.side_lengths[s], base);
    } catch (const EmptyTopology&) {
      return;
    }
    const Topology topo =
        gen_bipolar(points, settings.tr_distance, derive_seed(base, 1), settings.radio);
    const Network net = make_network(topo);
    SimConfig run = sim;
    run.seed = derive_seed(base, 2);
    run.trace = false;
    const SimResult res =
        simulate(net, TrafficConfig::uniform(net.size(), settings.lambda, settings.q), run);
    share[task] = 100.0 * static_cast<double>(res.stable_count) / static_cast<double>(net.size());
    count[task] = static_cast<long>(net.size());
  });

  std::vector<PercentStableRow> rows(sides);
  for (std::size_t s = 0; s < sides; ++s) {
    auto& row = rows[s];
    row.side_length = settings.side_lengths[s];
    double sum = 0.0;
    double sum_sq = 0.0;
    double tx = 0.0;
    for (std::size_t n = 0; n < samples; ++n) {
      const std::size_t task = s * samples + n;
      if (count[task] < 0) {
        ++row.empty_draws;
        continue;
      }
      ++row.samples;
      sum += share[task];
      sum_sq += share[task] * share[task];
      tx += static_cast<double>(count[task]);
    }
    if (row.samples == 0) continue;
    const double m = static_cast<double>(row.samples);
    row.percent_stable = sum / m;
    row.mean_transmitters = tx / m;
    if (row.samples > 1) {
      const double var = std::max(0.0, (sum_sq - sum * sum / m) / (m - 1.0));
      row.standard_error = std::sqrt(var / m);
    }
  }
  return rows;
}

void write_percent_stable_csv(const std::vector<PercentStableRow>& rows,
                              const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out << "side_length,samples,empty_draws,mean_transmitters,percent_stable,standard_error\n";
  out << std::setprecision(10);
  for (const auto& r : rows) {
    out << r.side_length << ',' << r.samples << ',' << r.empty_draws << ','
        << r.mean_transmitters << ',' << r.percent_stable << ',' << r.standard_error << '\n';
  }
  if (!out) throw Error("failed writing " + path.string());
}

}  // namespace aloha
