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

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "aloha/closed_form.hpp"
#include "aloha/errors.hpp"
#include "aloha/io.hpp"
#include "aloha/parallel.hpp"
#include "aloha/presets.hpp"
#include "aloha/regions.hpp"
#include "aloha/simulator.hpp"
#include "aloha/steady_state.hpp"
#include "aloha/topology.hpp"
#include "aloha/topology_io.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitInternal = 3;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Options shared by most subcommands.
struct Common {
  std::string topology_file;
  std::string preset;
  std::uint64_t preset_seed = 1;
  double side = 300.0;
  std::vector<double> lambda;
  std::vector<double> q;
  std::string out = "-";
  bool deterministic = false;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
};

struct Loaded {
  aloha::Topology topo;
  aloha::Network net;
  std::vector<int> ids;
};

void add_source(CLI::App* cmd, Common& c) {
  cmd->add_option("--topology", c.topology_file, "Topology JSON file");
  cmd->add_option("--preset", c.preset, "Named scenario")
      ->check(CLI::IsMember(aloha::preset_names()));
  cmd->add_option("--preset-seed", c.preset_seed, "Seed for random presets");
  cmd->add_option("--side", c.side, "Square side in metres for fig2/fig10");
}

void add_traffic(CLI::App* cmd, Common& c) {
  cmd->add_option("--lambda", c.lambda, "Input rates, one value or one per transmitter")
      ->delimiter(',');
  cmd->add_option("--q", c.q, "Transmission probabilities, one value or one per transmitter")
      ->delimiter(',');
}

void add_output(CLI::App* cmd, Common& c, const std::string& what) {
  cmd->add_option("--out", c.out, what + " ('-' for stdout)");
  cmd->add_flag("--deterministic", c.deterministic, "Omit the timestamp from outputs");
  cmd->add_option("--seed", c.seed, "Seed for the randomized parts of the command");
  cmd->add_option("--threads", c.threads, "Worker threads (0 = ALOHA_THREADS or hardware)");
}

Loaded load_source(const Common& c) {
  if (c.topology_file.empty() == c.preset.empty()) {
    throw UsageError("give exactly one of --topology or --preset");
  }
  Loaded out;
  if (!c.topology_file.empty()) {
    out.topo = aloha::load_topology(c.topology_file);
  } else {
    out.topo = aloha::make_preset(c.preset, {c.preset_seed, c.side});
  }
  aloha::validate(out.topo);
  out.net = aloha::make_network(out.topo);
  for (const auto& tx : out.topo.transmitters) out.ids.push_back(tx.id);
  return out;
}

std::vector<double> broadcast(const std::vector<double>& v, std::size_t k, const char* name) {
  if (v.size() == 1) return std::vector<double>(k, v.front());
  if (v.size() != k) {
    throw UsageError(std::string("--") + name + " needs 1 or " + std::to_string(k) +
                     " values, got " + std::to_string(v.size()));
  }
  return v;
}

aloha::TrafficConfig traffic(const Common& c, std::size_t k) {
  const auto fallback = c.preset.empty() ? std::nullopt : aloha::preset_traffic(c.preset, k);
  aloha::TrafficConfig cfg;
  if (!c.lambda.empty()) {
    cfg.lambda = broadcast(c.lambda, k, "lambda");
  } else if (fallback) {
    cfg.lambda = fallback->lambda;
  } else {
    throw UsageError("--lambda is required");
  }
  if (!c.q.empty()) {
    cfg.q = broadcast(c.q, k, "q");
  } else if (fallback) {
    cfg.q = fallback->q;
  } else {
    throw UsageError("--q is required");
  }
  try {
    cfg.validate(k);
  } catch (const aloha::Error& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

std::vector<double> lambda_only(const Common& c, std::size_t k) {
  if (!c.lambda.empty()) return broadcast(c.lambda, k, "lambda");
  if (!c.preset.empty()) {
    if (const auto fallback = aloha::preset_traffic(c.preset, k)) return fallback->lambda;
  }
  throw UsageError("--lambda is required");
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

json meta(const std::string& command, const Common& c) {
  json m{{"tool", "aloha"}, {"command", command}, {"seed", c.seed}};
  if (!c.preset.empty()) m["preset"] = c.preset;
  if (!c.topology_file.empty()) m["topology"] = c.topology_file;
  if (!c.deterministic) m["generated_at"] = timestamp();
  return m;
}

aloha::ParamMap param_map(const std::string& kind, const aloha::Network& net) {
  if (kind == "per-transmitter") return aloha::ParamMap::per_transmitter(net.size());
  if (kind == "shared") return aloha::ParamMap::shared(net.size());
  if (kind == "by-receiver") return aloha::ParamMap::by_receiver(net);
  throw UsageError("unknown parameterisation '" + kind + "'");
}

const std::vector<std::string> kParamKinds{"per-transmitter", "shared", "by-receiver"};

// Symmetric single-receiver network: every mean SNR equal.
struct SymmetricView {
  std::size_t k = 0;
  double theta = 0.0;
  double rho = 0.0;
};

std::optional<SymmetricView> symmetric_view(const aloha::Network& net) {
  if (net.theta.size() != 1) return std::nullopt;
  const double rho = net.rho(0, 0);
  for (Eigen::Index j = 0; j < net.rho.rows(); ++j) {
    if (std::abs(net.rho(j, 0) - rho) > 1e-9 * rho) return std::nullopt;
  }
  return SymmetricView{net.size(), net.theta[0], rho};
}

bool two_pair(const aloha::Network& net) {
  return net.size() == 2 && net.serving[0] != net.serving[1];
}

bool all_equal(const std::vector<double>& v) {
  for (const double x : v) {
    if (x != v.front()) return false;
  }
  return true;
}

struct GaOptions {
  std::size_t population = 200;
  std::size_t generations = 300;
  std::size_t stall = 60;
};

void add_ga(CLI::App* cmd, GaOptions& ga, const std::string& prefix = "") {
  cmd->add_option("--" + prefix + "population", ga.population, "GA population size");
  cmd->add_option("--" + prefix + "generations", ga.generations, "GA generation limit");
  cmd->add_option("--" + prefix + "stall", ga.stall, "GA stall window in generations");
}

aloha::numerics::MooSettings moo(const GaOptions& ga, const Common& c) {
  aloha::numerics::MooSettings s;
  s.population_size = ga.population;
  s.max_generations = ga.generations;
  s.stall_generations = ga.stall;
  s.rng_seed = c.seed;
  s.threads = c.threads == 0 ? aloha::default_thread_count() : c.threads;
  return s;
}

struct SimOptions {
  double slots = 1e6;
  std::optional<double> warmup;
  std::optional<double> window;
  std::string decode = "sampled";
  bool saturated = false;
  double min_empty_fraction = 0.01;
  double max_slope = 1e-4;
};

void add_sim(CLI::App* cmd, SimOptions& s) {
  cmd->add_option("--slots", s.slots, "Slots to simulate (accepts 1e6)");
  cmd->add_option("--warmup", s.warmup, "Warmup slots (default 10%)");
  cmd->add_option("--window", s.window, "Stability window in slots (default 20%)");
  cmd->add_option("--decode", s.decode, "Capture decision method")
      ->check(CLI::IsMember({"sampled", "conditional"}));
  cmd->add_option("--min-empty-fraction", s.min_empty_fraction, "Stability classifier threshold");
  cmd->add_option("--max-slope", s.max_slope, "Stability classifier slope threshold");
}

std::uint64_t slot_count(double v, const char* name) {
  if (!(v >= 0.0) || v != std::floor(v) || v > 1e15) {
    throw UsageError(std::string("--") + name + " must be a non-negative integer");
  }
  return static_cast<std::uint64_t>(v);
}

aloha::SimConfig sim_config(const SimOptions& s, std::uint64_t seed) {
  aloha::SimConfig sim;
  sim.slots = slot_count(s.slots, "slots");
  sim.seed = seed;
  if (s.warmup) sim.warmup_slots = slot_count(*s.warmup, "warmup");
  if (s.window) sim.stability_window = slot_count(*s.window, "window");
  sim.decode = s.decode == "conditional" ? aloha::DecodeMethod::kConditionalProbability
                                         : aloha::DecodeMethod::kSampledGains;
  sim.saturated = s.saturated;
  sim.thresholds = {s.min_empty_fraction, s.max_slope};
  try {
    sim.validate();
  } catch (const aloha::Error& e) {
    throw UsageError(e.what());
  }
  return sim;
}

json pair_json(const aloha::Pair& p) { return json::array({p[0], p[1]}); }

// ---------------------------------------------------------------- commands

struct GenTopology {
  Common c;
  double density = 0.0;
  std::optional<double> bipolar;
  std::optional<std::size_t> cellular;
  std::optional<double> power_control;
  aloha::RadioProfile radio;
};

int run_gen_topology(const GenTopology& g) {
  aloha::Topology topo;
  if (!g.c.preset.empty()) {
    if (g.density > 0.0) throw UsageError("--preset and --ppp-density are exclusive");
    topo = aloha::make_preset(g.c.preset, {g.c.preset_seed, g.c.side});
  } else {
    if (!(g.density > 0.0)) throw UsageError("give --preset or --ppp-density");
    if (g.bipolar.has_value() == g.cellular.has_value()) {
      throw UsageError("give exactly one of --bipolar or --cellular");
    }
    if (!(g.c.side > 0.0)) throw UsageError("--side must be positive");
    const auto points = aloha::gen_ppp_square(g.density, g.c.side, g.c.seed);
    if (g.bipolar) {
      if (!(*g.bipolar > 0.0)) throw UsageError("--bipolar distance must be positive");
      topo = aloha::gen_bipolar(points, *g.bipolar, aloha::derive_seed(g.c.seed, 1), g.radio);
    } else {
      if (*g.cellular == 0) throw UsageError("--cellular needs at least one base station");
      std::mt19937_64 rng(aloha::derive_seed(g.c.seed, 2));
      std::uniform_real_distribution<double> coord(0.0, g.c.side);
      std::vector<aloha::Point> stations(*g.cellular);
      for (auto& bs : stations) {
        bs.x_m = coord(rng);
        bs.y_m = coord(rng);
      }
      topo = aloha::gen_cellular(points, stations, g.radio);
    }
  }
  if (g.power_control) aloha::apply_power_control(topo, *g.power_control);
  aloha::validate(topo);
  if (g.c.out == "-") {
    std::cout << aloha::topology_to_json(topo).dump(2) << '\n';
  } else {
    aloha::save_topology(topo, g.c.out);
  }
  return kExitOk;
}

struct SteadyCmd {
  Common c;
  std::size_t restarts = 20;
  std::size_t max_states = std::size_t{1} << 16;
  bool ambiguity = false;
};

aloha::SteadyStateOptions steady_options(const SteadyCmd& s) {
  aloha::SteadyStateOptions o;
  o.restarts = s.restarts;
  o.max_states = s.max_states;
  o.seed = s.c.seed;
  o.check_ambiguity = s.ambiguity;
  return o;
}

int run_steady_state(const SteadyCmd& s) {
  const Loaded in = load_source(s.c);
  const auto cfg = traffic(s.c, in.net.size());
  json doc{{"meta", meta("steady-state", s.c)}, {"lambda", cfg.lambda}, {"q", cfg.q}};
  int code = kExitOk;
  try {
    const auto sol = aloha::steady_state(cfg, in.net, steady_options(s));
    doc["found"] = true;
    doc["solution"] = aloha::steady_state_to_json(sol);
  } catch (const aloha::NoSteadyStateFound& e) {
    doc["found"] = false;
    doc["diagnostic"] = e.what();
    code = kExitNegative;
  }
  aloha::write_json(doc, s.c.out);
  return code;
}

struct UnsatCmd {
  Common c;
  std::string param = "per-transmitter";
  GaOptions ga;
};

json unsat_closed_forms(const aloha::Network& net, const std::vector<double>& lambda) {
  json cf = json::object();
  if (two_pair(net)) {
    const auto closed = aloha::two_tr_closed_form({lambda[0], lambda[1]}, net);
    json t{{"exists", closed.exists}};
    if (closed.exists) {
      try {
        const auto region = aloha::theorem1_region(closed);
        t["lower"] = pair_json(region.lower);
        t["upper"] = pair_json(region.upper);
      } catch (const aloha::EmptyRegion&) {
        t["empty"] = true;
      }
    }
    cf["two_pair"] = t;
  }
  if (const auto sym = symmetric_view(net); sym && all_equal(lambda)) {
    json t{{"approximate", true}};
    try {
      const auto iv = aloha::theorem2_region(sym->k, lambda[0], sym->theta, sym->rho);
      t["lower"] = iv.lower;
      t["upper"] = iv.upper;
    } catch (const aloha::EmptyRegion&) {
      t["empty"] = true;
    }
    cf["symmetric"] = t;
  }
  return cf;
}

int run_region_unsat(const UnsatCmd& u) {
  const Loaded in = load_source(u.c);
  const auto lambda = lambda_only(u.c, in.net.size());
  aloha::RegionSettings settings;
  settings.search = moo(u.ga, u.c);
  settings.steady.seed = u.c.seed;
  const auto map = param_map(u.param, in.net);
  const auto region = aloha::unsat_region(lambda, in.net, settings, map);
  json doc{{"meta", meta("region-unsat", u.c)},
           {"region", aloha::unsat_region_to_json(region)},
           {"closed_form", unsat_closed_forms(in.net, lambda)}};
  aloha::write_json(doc, u.c.out);
  return region.empty ? kExitNegative : kExitOk;
}

struct StabilityCmd {
  Common c;
  std::string lambda_param = "per-transmitter";
  std::string q_param = "per-transmitter";
  GaOptions outer;
  GaOptions inner{200, 300, 30};
  double lambda2 = 0.2;
};

json stability_closed_forms(const aloha::Network& net, double lambda2) {
  json cf = json::object();
  if (two_pair(net)) {
    const auto closed = aloha::two_tr_closed_form({0.0, 0.0}, net);
    const auto geo = aloha::theorem3_region(closed);
    cf["two_pair"] = {{"shape", aloha::to_string(geo.shape)},
                      {"snr_ratio", geo.snr_ratio},
                      {"A", pair_json(geo.A)},
                      {"B", pair_json(geo.B)},
                      {"C", pair_json(geo.C)},
                      {"lambda2", lambda2},
                      {"max_lambda1", geo.max_lambda1(lambda2)}};
  }
  if (const auto sym = symmetric_view(net)) {
    cf["symmetric"] = {{"lambda_u", aloha::theorem4_lambda_u(sym->k, sym->theta, sym->rho)},
                       {"exact_lambda_max",
                        aloha::symmetric_exact_lambda_max(sym->k, sym->theta, sym->rho)}};
  }
  return cf;
}

int run_region_stability(const StabilityCmd& s) {
  const Loaded in = load_source(s.c);
  aloha::StabilitySettings settings;
  settings.outer = moo(s.outer, s.c);
  settings.inner.population_size = s.inner.population;
  settings.inner.max_generations = s.inner.generations;
  settings.inner.stall_generations = s.inner.stall;
  settings.inner.rng_seed = s.c.seed;
  settings.steady.seed = s.c.seed;
  const auto region = aloha::stability_region(in.net, settings, param_map(s.lambda_param, in.net),
                                              param_map(s.q_param, in.net));
  json doc{{"meta", meta("region-stability", s.c)},
           {"region", aloha::stability_region_to_json(region)},
           {"closed_form", stability_closed_forms(in.net, s.lambda2)}};
  aloha::write_json(doc, s.c.out);
  return region.empty ? kExitNegative : kExitOk;
}

struct GridCmd {
  Common c;
  std::string param = "per-transmitter";
  double lo = 0.0;
  double hi = 1.0;
  std::size_t n = 50;
};

int run_region_grid(const GridCmd& g) {
  const Loaded in = load_source(g.c);
  const auto lambda = lambda_only(g.c, in.net.size());
  const auto map = param_map(g.param, in.net);
  if (g.n == 0 || !(g.hi > g.lo) || g.lo < 0.0 || g.hi > 1.0) {
    throw UsageError("grid needs n >= 1 and 0 <= lo < hi <= 1");
  }
  const double cells = std::pow(static_cast<double>(g.n), static_cast<double>(map.dimension));
  if (cells > 4e6) throw UsageError("grid too large; reduce --n or use --param shared");
  std::vector<aloha::GridAxis> axes;
  for (std::size_t d = 0; d < map.dimension; ++d) {
    axes.push_back({"q" + std::to_string(d + 1), g.lo, g.hi, g.n});
  }
  aloha::SteadyStateOptions steady;
  steady.seed = g.c.seed;
  const auto result = aloha::region_grid(
      axes, aloha::unsat_q_evaluator(lambda, in.net, map, steady), g.c.threads);
  if (g.c.out == "-") {
    aloha::write_grid_csv(std::cout, axes, result, in.net.size());
  } else {
    std::ofstream out(g.c.out);
    if (!out) throw aloha::Error("cannot open " + g.c.out + " for writing");
    aloha::write_grid_csv(out, axes, result, in.net.size());
  }
  return kExitOk;
}

struct SimulateCmd {
  Common c;
  SimOptions sim;
  std::string trace;
  std::uint64_t trace_stride = 1;
};

int run_simulate(const SimulateCmd& s) {
  const Loaded in = load_source(s.c);
  const auto cfg = traffic(s.c, in.net.size());
  auto sim = sim_config(s.sim, s.c.seed);
  sim.trace = !s.trace.empty();
  sim.trace_stride = s.trace_stride;
  if (sim.trace && sim.trace_stride == 0) throw UsageError("--trace-stride must be positive");
  const auto result = aloha::simulate(in.net, cfg, sim);
  if (sim.trace) aloha::write_queue_trace_csv(result, in.ids, s.trace);
  json doc{{"meta", meta("simulate", s.c)},
           {"lambda", cfg.lambda},
           {"q", cfg.q},
           {"result", aloha::sim_result_to_json(result, in.ids)}};
  aloha::write_json(doc, s.c.out);
  return kExitOk;
}

struct VerifyCmd {
  Common c;
  SimOptions sim;
  aloha::VerifyTolerances tol;
  bool no_state_check = false;
};

int run_verify(const VerifyCmd& v) {
  const Loaded in = load_source(v.c);
  const auto cfg = traffic(v.c, in.net.size());
  auto tol = v.tol;
  tol.check_saturation = !v.no_state_check;
  aloha::SteadyStateOptions steady;
  steady.seed = v.c.seed;
  json doc{{"meta", meta("verify", v.c)}, {"lambda", cfg.lambda}, {"q", cfg.q}};
  try {
    const auto report =
        aloha::verify_against_analysis(in.net, cfg, sim_config(v.sim, v.c.seed), tol, steady);
    doc["report"] = aloha::verify_report_to_json(report, in.ids);
    aloha::write_json(doc, v.c.out);
    std::cerr << report.summary() << '\n';
    return report.pass ? kExitOk : kExitNegative;
  } catch (const aloha::NoSteadyStateFound& e) {
    doc["report"] = {{"verdict", "FAIL"}, {"diagnostic", e.what()}};
    aloha::write_json(doc, v.c.out);
    std::cerr << "FAIL " << e.what() << '\n';
    return kExitNegative;
  }
}

struct ExperimentCmd {
  Common c;
  std::string kind = "percent-stable";
  SimOptions sim;
  // percent-stable
  double density = 1e-4;
  std::vector<double> sides{300, 600, 900, 1200, 1500, 1800};
  std::size_t samples = 10;
  double tr_distance = 25.0;
  // q-sweep
  std::size_t sweep_index = 0;
  double q_lo = 0.05;
  double q_hi = 1.0;
  double q_step = 0.05;
  std::string json_out;
};

std::string csv_number(double v) {
  if (!std::isfinite(v)) return "nan";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

int run_percent_stable(const ExperimentCmd& e) {
  aloha::PercentStableSettings settings;
  settings.density = e.density;
  settings.side_lengths = e.sides;
  settings.samples = e.samples;
  settings.lambda = e.c.lambda.empty() ? 0.2 : e.c.lambda.front();
  settings.q = e.c.q.empty() ? 1.0 : e.c.q.front();
  settings.tr_distance = e.tr_distance;
  settings.seed = e.c.seed;
  settings.threads = e.c.threads;
  if (e.c.lambda.size() > 1 || e.c.q.size() > 1) {
    throw UsageError("percent-stable takes scalar --lambda and --q");
  }
  auto sim = sim_config(e.sim, e.c.seed);
  if (e.sim.decode == "sampled") sim.decode = aloha::DecodeMethod::kConditionalProbability;
  const auto rows = aloha::experiment_percent_stable(settings, sim);
  if (e.c.out == "-") {
    std::cout << "side_length,samples,empty_draws,mean_transmitters,percent_stable,standard_error\n";
    for (const auto& r : rows) {
      std::cout << csv_number(r.side_length) << ',' << r.samples << ',' << r.empty_draws << ','
                << csv_number(r.mean_transmitters) << ',' << csv_number(r.percent_stable) << ','
                << csv_number(r.standard_error) << '\n';
    }
  } else {
    aloha::write_percent_stable_csv(rows, e.c.out);
  }
  if (!e.json_out.empty()) {
    aloha::write_json({{"meta", meta("experiment", e.c)}, {"rows", aloha::percent_stable_to_json(rows)}},
                      e.json_out);
  }
  return kExitOk;
}

int run_q_sweep(const ExperimentCmd& e) {
  const Loaded in = load_source(e.c);
  const std::size_t k = in.net.size();
  const auto base = traffic(e.c, k);
  if (e.sweep_index > k) throw UsageError("--sweep-index exceeds the transmitter count");
  if (!(e.q_step > 0.0) || !(e.q_lo > 0.0) || e.q_hi > 1.0 || e.q_hi < e.q_lo) {
    throw UsageError("need 0 < q-lo <= q-hi <= 1 and q-step > 0");
  }
  std::vector<double> grid;
  for (std::size_t i = 0;; ++i) {
    const double v = e.q_lo + static_cast<double>(i) * e.q_step;
    if (v > e.q_hi + 1e-12) break;
    grid.push_back(std::min(v, 1.0));
  }
  const auto sim = sim_config(e.sim, e.c.seed);
  struct Row {
    std::string state = "none";
    std::vector<double> p, mu, measured, thr;
  };
  std::vector<Row> rows(grid.size());
  aloha::parallel_for(grid.size(), e.c.threads, [&](std::size_t n) {
    auto cfg = base;
    if (e.sweep_index == 0) {
      std::fill(cfg.q.begin(), cfg.q.end(), grid[n]);
    } else {
      cfg.q[e.sweep_index - 1] = grid[n];
    }
    Row& row = rows[n];
    const double nan = std::numeric_limits<double>::quiet_NaN();
    row.p.assign(k, nan);
    row.mu.assign(k, nan);
    aloha::SteadyStateOptions steady;
    steady.seed = e.c.seed;
    try {
      const auto sol = aloha::steady_state(cfg, in.net, steady);
      row.state = sol.phi.to_string();
      row.p = sol.p;
      for (std::size_t i = 0; i < k; ++i) row.mu[i] = std::min(cfg.lambda[i], sol.service_rate[i]);
    } catch (const aloha::NoSteadyStateFound&) {
    }
    auto run = sim;
    run.seed = aloha::derive_seed(e.c.seed, n);
    const auto res = aloha::simulate(in.net, cfg, run);
    for (const auto& st : res.tx) {
      row.measured.push_back(st.measured_p);
      row.thr.push_back(st.throughput);
    }
  });

  std::ostringstream os;
  os << "q,state";
  for (const char* col : {"analytic_p", "analytic_throughput", "measured_p", "throughput"}) {
    for (std::size_t i = 0; i < k; ++i) os << ',' << col << '_' << in.ids[i];
  }
  os << '\n';
  for (std::size_t n = 0; n < grid.size(); ++n) {
    const Row& r = rows[n];
    os << csv_number(grid[n]) << ',' << r.state;
    for (const auto* v : {&r.p, &r.mu, &r.measured, &r.thr}) {
      for (const double x : *v) os << ',' << csv_number(x);
    }
    os << '\n';
  }
  if (e.c.out == "-") {
    std::cout << os.str();
  } else {
    std::ofstream out(e.c.out);
    if (!out) throw aloha::Error("cannot open " + e.c.out + " for writing");
    out << os.str();
  }
  return kExitOk;
}

int run_experiment(const ExperimentCmd& e) {
  if (e.kind == "percent-stable") return run_percent_stable(e);
  return run_q_sweep(e);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steady state, operating regions and simulation of slotted Aloha with capture"};
  app.require_subcommand(1);

  GenTopology gen;
  auto* gen_cmd = app.add_subcommand("gen-topology", "Write a topology file");
  gen_cmd->add_option("--preset", gen.c.preset, "Named scenario")
      ->check(CLI::IsMember(aloha::preset_names()));
  gen_cmd->add_option("--preset-seed", gen.c.preset_seed, "Seed for random presets");
  gen_cmd->add_option("--side", gen.c.side, "Square side in metres");
  gen_cmd->add_option("--ppp-density", gen.density, "Transmitter density per m^2");
  gen_cmd->add_option("--bipolar", gen.bipolar, "Dedicated receiver at this distance (m)");
  gen_cmd->add_option("--cellular", gen.cellular, "Number of base stations");
  gen_cmd->add_option("--power-control", gen.power_control, "Set every own mean SNR to this dB");
  gen_cmd->add_option("--power-dbm", gen.radio.power_dbm, "Transmit power");
  gen_cmd->add_option("--theta-db", gen.radio.theta_db, "SINR threshold");
  gen_cmd->add_option("--noise-dbm", gen.radio.noise_dbm, "Noise power");
  gen_cmd->add_option("--alpha", gen.radio.alpha, "Path-loss exponent");
  add_output(gen_cmd, gen.c, "Topology file");

  SteadyCmd steady;
  auto* steady_cmd = app.add_subcommand("steady-state", "Solve the network steady state");
  add_source(steady_cmd, steady.c);
  add_traffic(steady_cmd, steady.c);
  add_output(steady_cmd, steady.c, "JSON record");
  steady_cmd->add_option("--restarts", steady.restarts, "Random restarts per state");
  steady_cmd->add_option("--max-states", steady.max_states, "Candidate state budget");
  steady_cmd->add_flag("--check-ambiguity", steady.ambiguity, "Flag a second consistent state");

  UnsatCmd unsat;
  auto* unsat_cmd = app.add_subcommand("region-unsat", "All-unsaturated region of q");
  add_source(unsat_cmd, unsat.c);
  add_traffic(unsat_cmd, unsat.c);
  add_output(unsat_cmd, unsat.c, "JSON fronts");
  unsat_cmd->add_option("--param", unsat.param, "q parameterisation")
      ->check(CLI::IsMember(kParamKinds));
  add_ga(unsat_cmd, unsat.ga);

  StabilityCmd stab;
  auto* stab_cmd = app.add_subcommand("region-stability", "Stability region of lambda");
  add_source(stab_cmd, stab.c);
  add_output(stab_cmd, stab.c, "JSON front");
  stab_cmd->add_option("--lambda-param", stab.lambda_param, "lambda parameterisation")
      ->check(CLI::IsMember(kParamKinds));
  stab_cmd->add_option("--q-param", stab.q_param, "q parameterisation")
      ->check(CLI::IsMember(kParamKinds));
  stab_cmd->add_option("--lambda2", stab.lambda2, "Two pairs: report the lambda_1 boundary here");
  add_ga(stab_cmd, stab.outer);
  add_ga(stab_cmd, stab.inner, "inner-");

  GridCmd grid;
  auto* grid_cmd = app.add_subcommand("region-grid", "Membership grid over q as CSV");
  add_source(grid_cmd, grid.c);
  add_traffic(grid_cmd, grid.c);
  add_output(grid_cmd, grid.c, "CSV file");
  grid_cmd->add_option("--param", grid.param, "q parameterisation")
      ->check(CLI::IsMember(kParamKinds));
  grid_cmd->add_option("--lo", grid.lo, "Axis lower end (excluded)");
  grid_cmd->add_option("--hi", grid.hi, "Axis upper end (included)");
  grid_cmd->add_option("--n", grid.n, "Samples per axis");

  SimulateCmd simulate;
  auto* sim_cmd = app.add_subcommand("simulate", "Slot-level Monte-Carlo simulation");
  add_source(sim_cmd, simulate.c);
  add_traffic(sim_cmd, simulate.c);
  add_output(sim_cmd, simulate.c, "JSON result");
  add_sim(sim_cmd, simulate.sim);
  sim_cmd->add_flag("--saturated", simulate.sim.saturated, "Keep every queue backlogged");
  sim_cmd->add_option("--trace", simulate.trace, "Queue trace CSV over the stability window");
  sim_cmd->add_option("--trace-stride", simulate.trace_stride, "Trace every n-th slot");

  VerifyCmd verify;
  auto* verify_cmd = app.add_subcommand("verify", "Compare analysis with simulation");
  add_source(verify_cmd, verify.c);
  add_traffic(verify_cmd, verify.c);
  add_output(verify_cmd, verify.c, "JSON report");
  add_sim(verify_cmd, verify.sim);
  verify_cmd->add_option("--p-tol", verify.tol.p_abs, "Absolute tolerance on p");
  verify_cmd->add_option("--throughput-tol", verify.tol.throughput_rel,
                         "Relative tolerance on throughput");
  verify_cmd->add_flag("--no-state-check", verify.no_state_check,
                       "Skip the saturation agreement check");

  ExperimentCmd exp;
  auto* exp_cmd = app.add_subcommand("experiment", "Figure-reproduction sweeps as CSV");
  exp_cmd->add_option("--kind", exp.kind, "percent-stable or q-sweep")
      ->check(CLI::IsMember({"percent-stable", "q-sweep"}));
  add_source(exp_cmd, exp.c);
  add_traffic(exp_cmd, exp.c);
  add_output(exp_cmd, exp.c, "CSV file");
  add_sim(exp_cmd, exp.sim);
  exp_cmd->add_option("--density", exp.density, "percent-stable: transmitters per m^2");
  exp_cmd->add_option("--sides", exp.sides, "percent-stable: side lengths (m)")->delimiter(',');
  exp_cmd->add_option("--samples", exp.samples, "percent-stable: topologies per side");
  exp_cmd->add_option("--tr-distance", exp.tr_distance, "percent-stable: link length (m)");
  exp_cmd->add_option("--sweep-index", exp.sweep_index,
                      "q-sweep: 1-based transmitter to vary, 0 for all");
  exp_cmd->add_option("--q-lo", exp.q_lo, "q-sweep: first q");
  exp_cmd->add_option("--q-hi", exp.q_hi, "q-sweep: last q");
  exp_cmd->add_option("--q-step", exp.q_step, "q-sweep: step");
  exp_cmd->add_option("--json", exp.json_out, "percent-stable: also write JSON here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen_cmd) return run_gen_topology(gen);
    if (*steady_cmd) return run_steady_state(steady);
    if (*unsat_cmd) return run_region_unsat(unsat);
    if (*stab_cmd) return run_region_stability(stab);
    if (*grid_cmd) return run_region_grid(grid);
    if (*sim_cmd) return run_simulate(simulate);
    if (*verify_cmd) return run_verify(verify);
    if (*exp_cmd) return run_experiment(exp);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const aloha::EmptyRegion& e) {
    std::cerr << e.what() << '\n';
    return kExitNegative;
  } catch (const aloha::EmptyTopology& e) {
    std::cerr << e.what() << '\n';
    return kExitNegative;
  } catch (const aloha::TopologyError& e) {
    std::cerr << "invalid topology: " << e.what() << '\n';
    return kExitUsage;
  } catch (const aloha::DomainError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const aloha::DimensionError& e) {
    std::cerr << "invalid parameter: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
