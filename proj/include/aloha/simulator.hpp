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

#ifndef ALOHA_SIMULATOR_HPP_
#define ALOHA_SIMULATOR_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "aloha/steady_state.hpp"
#include "aloha/topology.hpp"

namespace aloha {

enum class ArrivalProcess { kBernoulli };

// How a capture decision is drawn in a slot.
//   kSampledGains: draw |h|^2 ~ Exp(1) for every active transmitter at every
//     receiver that decodes in the slot and compare the SINR with theta.
//   kConditionalProbability: a receiver decoding a single transmitter draws
//     one uniform against the exact Rayleigh success probability of the
//     active set; receivers decoding several transmitters fall back to
//     sampled gains so that shared fading stays shared. Same distribution,
//     far cheaper for large networks.
enum class DecodeMethod { kSampledGains, kConditionalProbability };

struct StabilityThresholds {
  double min_empty_fraction = 0.01;
  double max_slope = 1e-4;  // packets per slot
};

struct SimConfig {
  std::uint64_t slots = 1'000'000;
  std::uint64_t seed = 0;
  // Defaults: 10% of slots for warmup, the final 20% as stability window.
  std::optional<std::uint64_t> warmup_slots;
  std::optional<std::uint64_t> stability_window;
  ArrivalProcess arrivals = ArrivalProcess::kBernoulli;
  DecodeMethod decode = DecodeMethod::kSampledGains;
  StabilityThresholds thresholds;
  // Every queue permanently backlogged: no arrivals, every transmitter
  // attempts w.p. q each slot, queues never drain.
  bool saturated = false;
  // Record (slot, transmitter, queue length) over the stability window,
  // every trace_stride slots.
  bool trace = false;
  std::uint64_t trace_stride = 1;

  std::uint64_t warmup() const;
  std::uint64_t window() const;
  void validate() const;
};

// Queue-length summary over the stability window (queue observed at the end
// of every slot, time measured from the window start).
struct QueueWindow {
  std::uint64_t slots = 0;
  std::uint64_t empty_slots = 0;
  double sum_t = 0.0;
  double sum_tt = 0.0;
  double sum_q = 0.0;
  double sum_tq = 0.0;

  void add(std::uint64_t t, std::uint64_t queue);
  double empty_fraction() const;
  // Least-squares slope of queue length against slot index.
  double slope() const;
};

bool classify_stability(const QueueWindow& window, const StabilityThresholds& thresholds = {});

struct TransmitterStats {
  // Measured after warmup.
  std::uint64_t attempts = 0;
  std::uint64_t successes = 0;
  double measured_p = 0.0;  // successes / attempts, 0 without attempts
  double throughput = 0.0;  // successes / measured slots
  double mean_queue = 0.0;
  // Whole run, for conservation checks.
  std::uint64_t arrivals = 0;
  std::uint64_t departures = 0;
  std::uint64_t final_queue = 0;
  QueueWindow window;
  bool stable = false;
};

struct TraceRow {
  std::uint64_t slot = 0;
  std::size_t transmitter = 0;  // index
  std::uint64_t queue = 0;
};

struct SimResult {
  std::vector<TransmitterStats> tx;
  std::uint64_t slots = 0;
  std::uint64_t measured_slots = 0;
  double total_throughput = 0.0;
  std::size_t stable_count = 0;
  std::vector<TraceRow> trace;

  bool all_stable() const { return stable_count == tx.size(); }
};

// Deterministic per seed; one run is sequential.
SimResult simulate(const Network& net, const TrafficConfig& cfg, const SimConfig& sim);
SimResult simulate(const Topology& topo, const TrafficConfig& cfg, const SimConfig& sim);

// "slot,tx_id,queue_len". ids maps transmitter index to its id; when empty
// the 1-based index is written.
void write_queue_trace_csv(const SimResult& result, std::span<const int> ids,
                           const std::filesystem::path& path);

struct VerifyTolerances {
  double p_abs = 0.02;
  double throughput_rel = 0.05;
  bool check_saturation = true;
};

struct VerifyRow {
  double analytic_p = 0.0;
  double measured_p = 0.0;
  double p_error = 0.0;
  double expected_throughput = 0.0;  // min(lambda, mu)
  double throughput = 0.0;
  double throughput_rel_error = 0.0;
  bool analytic_unsaturated = false;
  bool simulated_stable = false;
  bool p_ok = false;
  bool throughput_ok = false;
  bool state_ok = false;

  bool ok() const { return p_ok && throughput_ok && state_ok; }
};

struct VerifyReport {
  SteadyStateSolution analysis;
  SimResult simulation;
  std::vector<VerifyRow> rows;
  std::vector<std::size_t> offending;  // transmitter indices
  bool pass = false;

  std::string summary() const;
};

// Solves the steady state and compares it with a simulation. A mismatch is
// reported, not thrown; solver errors propagate.
VerifyReport verify_against_analysis(const Network& net, const TrafficConfig& cfg,
                                     const SimConfig& sim, const VerifyTolerances& tol = {},
                                     const SteadyStateOptions& steady = {});

struct PercentStableSettings {
  double density = 1e-4;  // transmitters per m^2
  std::vector<double> side_lengths;
  std::size_t samples = 10;
  double lambda = 0.2;
  double q = 1.0;
  double tr_distance = 25.0;
  RadioProfile radio{17.0, 0.0, -90.0, 3.8};
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0 selects default_thread_count()
};

struct PercentStableRow {
  double side_length = 0.0;
  std::size_t samples = 0;        // non-empty topologies simulated
  std::size_t empty_draws = 0;    // PPP draws with no transmitter, skipped
  double mean_transmitters = 0.0;
  double percent_stable = 0.0;    // mean over samples of the stable share
  double standard_error = 0.0;    // of percent_stable
};

// Bipolar PPP sweep. Each (side, sample) pair gets its own seed stream.
std::vector<PercentStableRow> experiment_percent_stable(const PercentStableSettings& settings,
                                                        const SimConfig& sim);

void write_percent_stable_csv(const std::vector<PercentStableRow>& rows,
                              const std::filesystem::path& path);

// Independent 64-bit stream seed derived from a base seed and two indices.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0);

}  // namespace aloha

#endif  // ALOHA_SIMULATOR_HPP_
