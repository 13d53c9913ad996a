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

// Acceptance run: one PASS/FAIL line per criterion (and per sub-check).
// Usage: acceptance [--only N] [--known-fail ID,...]
//
// The process exits 0 when every line passes or every failing line is
// listed in --known-fail, and a listed line that passes is also reported
// as a failure of the expectation so the list cannot go stale silently.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "aloha/closed_form.hpp"
#include "aloha/errors.hpp"
#include "aloha/numerics/lambert_w.hpp"
#include "aloha/numerics/pareto.hpp"
#include "aloha/presets.hpp"
#include "aloha/regions.hpp"
#include "aloha/simulator.hpp"
#include "aloha/steady_state.hpp"
#include "aloha/topology.hpp"

namespace {

using aloha::Pair;
using aloha::ParamMap;
using aloha::numerics::Sense;

struct Outcome {
  std::string id;
  bool pass = false;
};

std::vector<Outcome> g_outcomes;

template <typename... Args>
std::string fmt(const Args&... parts) {
  std::ostringstream os;
  os.precision(6);
  (os << ... << parts);
  return os.str();
}

void report(const std::string& id, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << id << " " << detail << std::endl;
  g_outcomes.push_back({id, pass});
}

// Every emitted front, with what is needed to re-check it.
struct EmittedFront {
  std::string label;
  std::vector<std::vector<double>> points;
  std::vector<Sense> sense;
  std::function<bool(const std::vector<double>&)> feasible;
};
std::vector<EmittedFront> g_fronts;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

const double kTheta0 = 1.0;                       // 0 dB
const double kRho10 = aloha::db_to_linear(10.0);  // 10 dB

aloha::Network fig4(const std::string& name) { return aloha::make_network(aloha::make_preset(name)); }

aloha::RegionSettings region_settings(std::uint64_t seed) {
  aloha::RegionSettings s;
  s.search.population_size = 100;
  s.search.max_generations = 200;
  s.search.stall_generations = 50;
  s.search.rng_seed = seed;
  return s;
}

aloha::StabilitySettings stability_settings(std::uint64_t seed) {
  aloha::StabilitySettings s;
  s.outer.population_size = 40;
  s.outer.max_generations = 100;
  s.outer.stall_generations = 30;
  s.outer.rng_seed = seed;
  s.inner.rng_seed = seed + 1;
  return s;
}

void record_unsat_fronts(const std::string& label, const aloha::UnsatRegion& region,
                         const aloha::Network& net) {
  const auto lambda = region.lambda;
  const auto map = region.map;
  auto feasible = [lambda, map, net](const std::vector<double>& coords) {
    return aloha::unsat_membership(map.expand(coords), lambda, net);
  };
  g_fronts.push_back({label + " upper", region.q1.points,
                      std::vector<Sense>(map.dimension, Sense::kMaximize), feasible});
  g_fronts.push_back({label + " lower", region.q2.points,
                      std::vector<Sense>(map.dimension, Sense::kMinimize), feasible});
}

// ------------------------------------------------------------------ 1
void criterion1() {
  const double lu = aloha::theorem4_lambda_u(25, kTheta0, kRho10);
  report("C1a", std::abs(lu - 0.026630) <= 1e-5,
         fmt("closed-form symmetric stability bound K=25: ", lu, " (target 0.026630 +-1e-5)"));

  const auto sym = aloha::symmetric_network(25, kTheta0, kRho10);
  const auto settings = stability_settings(11);
  const auto region =
      aloha::stability_region(sym, settings, ParamMap::shared(25), ParamMap::shared(25));
  const double ga = region.empty ? 0.0 : region.q3.points.front().front();
  report("C1b", !region.empty && rel(ga, lu) <= 0.05,
         fmt("GA stability boundary ", ga, " vs ", lu, " (rel ", rel(ga, lu),
             ", limit 0.05; exact-product maximum ",
             aloha::symmetric_exact_lambda_max(25, kTheta0, kRho10), ")"));
  g_fronts.push_back({"C1 stability front", region.q3.points, {Sense::kMaximize},
                      [sym, settings](const std::vector<double>& l) {
                        return aloha::stability_membership(std::vector<double>(25, l[0]), sym,
                                                           settings, ParamMap::shared(25));
                      }});
}

// ------------------------------------------------------------------ 2
void criterion2() {
  const auto iv = aloha::theorem2_region(25, 0.02, kTheta0, kRho10);
  report("C2a", std::abs(iv.lower - 0.034) <= 0.005 && std::abs(iv.upper - 0.157) <= 0.005,
         fmt("closed-form symmetric q interval (", iv.lower, ", ", iv.upper,
             ") vs (0.034, 0.157) +-0.005"));

  const auto sym = aloha::symmetric_network(25, kTheta0, kRho10);
  const std::vector<double> lambda(25, 0.02);
  const auto region = aloha::unsat_region(lambda, sym, region_settings(21), ParamMap::shared(25));
  record_unsat_fronts("C2", region, sym);
  double hi = 0.0, lo = 1.0;
  for (const auto& q : region.q1.points) hi = std::max(hi, q[0]);
  for (const auto& q : region.q2.points) lo = std::min(lo, q[0]);
  report("C2b", !region.empty && std::abs(lo - iv.lower) <= 0.02 && std::abs(hi - iv.upper) <= 0.02,
         fmt("GA fronts (", lo, ", ", hi, ") vs closed form (", iv.lower, ", ", iv.upper,
             ") +-0.02"));
}

// ------------------------------------------------------------------ 3
bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void criterion3() {
  const auto net_a = fig4("fig4a");
  const auto closed_a = aloha::theorem1_region(aloha::two_tr_closed_form({0.2, 0.27}, net_a));
  report("C3a",
         near(closed_a.lower[0], 0.65, 0.01) && near(closed_a.lower[1], 0.63, 0.01) &&
             near(closed_a.upper[0], 0.87, 0.01) && near(closed_a.upper[1], 0.84, 0.01),
         fmt("two-pair closed form lower (", closed_a.lower[0], ", ", closed_a.lower[1],
             ") upper (", closed_a.upper[0], ", ", closed_a.upper[1],
             ") vs (0.65, 0.63) (0.87, 0.84) +-0.01"));

  const std::vector<double> lambda{0.2, 0.27};
  const auto per = ParamMap::per_transmitter(2);
  const auto region_a = aloha::unsat_region(lambda, net_a, region_settings(31), per);
  record_unsat_fronts("C3 fig4a", region_a, net_a);
  // Upper boundary values: q1 where q2 = 1, q2 where q1 = 1.
  double u1 = 0.0, u2 = 0.0, l1 = 1.0, l2 = 1.0;
  for (const auto& q : region_a.q1.points) {
    if (q[1] >= 0.98) u1 = std::max(u1, q[0]);
    if (q[0] >= 0.98) u2 = std::max(u2, q[1]);
  }
  for (const auto& q : region_a.q2.points) {
    l1 = std::min(l1, q[0]);
    l2 = std::min(l2, q[1]);
  }
  report("C3b",
         !region_a.empty && near(l1, 0.65, 0.02) && near(l2, 0.63, 0.02) && near(u1, 0.87, 0.02) &&
             near(u2, 0.84, 0.02),
         fmt("GA fronts lower (", l1, ", ", l2, ") upper (", u1, ", ", u2, ") +-0.02"));

  const auto net_c = fig4("fig4c");
  const auto closed_c = aloha::theorem1_region(aloha::two_tr_closed_form({0.2, 0.27}, net_c));
  report("C3c",
         near(closed_c.lower[0], 0.50, 0.01) && near(closed_c.lower[1], 0.37, 0.01) &&
             closed_c.upper[0] == 1.0 && closed_c.upper[1] == 1.0,
         fmt("weak-interference closed form lower (", closed_c.lower[0], ", ", closed_c.lower[1],
             ") vs (0.5, 0.37) +-0.01, upper clipped to (", closed_c.upper[0], ", ",
             closed_c.upper[1], ")"));
  const auto region_c = aloha::unsat_region(lambda, net_c, region_settings(32), per);
  record_unsat_fronts("C3 fig4c", region_c, net_c);
  double m1 = 1.0, m2 = 1.0, x1 = 0.0, x2 = 0.0;
  for (const auto& q : region_c.q2.points) {
    m1 = std::min(m1, q[0]);
    m2 = std::min(m2, q[1]);
  }
  for (const auto& q : region_c.q1.points) {
    x1 = std::max(x1, q[0]);
    x2 = std::max(x2, q[1]);
  }
  report("C3d",
         !region_c.empty && near(m1, 0.50, 0.02) && near(m2, 0.37, 0.02) && x1 >= 0.98 &&
             x2 >= 0.98,
         fmt("weak-interference GA lower (", m1, ", ", m2, ") upper (", x1, ", ", x2, ")"));
}

// ------------------------------------------------------------------ 4
aloha::Network random_two_cell(std::mt19937_64& rng, std::size_t k) {
  std::uniform_real_distribution<double> coord(0.0, 150.0);
  for (;;) {
    std::vector<aloha::Point> users(k), stations(2);
    for (auto& p : users) p = {coord(rng), coord(rng)};
    for (auto& p : stations) p = {coord(rng), coord(rng)};
    auto topo = aloha::gen_cellular(users, stations, {0.0, -8.0, -90.0, 4.0});
    const auto serving = topo.serving_indices();
    // Both cells populated and no user on top of a station.
    if (std::count(serving.begin(), serving.end(), 0) == 0 ||
        std::count(serving.begin(), serving.end(), 1) == 0) {
      continue;
    }
    bool ok = true;
    for (const auto& u : users) {
      for (const auto& s : stations) ok = ok && aloha::distance(u, s) > 1.0;
    }
    if (!ok) continue;
    aloha::apply_power_control(topo, 0.0);
    return aloha::make_network(topo);
  }
}

void criterion4() {
  const auto geo = aloha::theorem3_region(aloha::two_tr_closed_form({0.0, 0.0}, fig4("fig4a")));
  const double b = geo.max_lambda1(0.2);
  report("C4a", std::abs(b - 0.267) <= 0.01,
         fmt("two-pair lambda_1 boundary at lambda_2 = 0.2: ", b, " vs 0.267 +-0.01"));

  std::mt19937_64 rng(404);
  int agreed = 0;
  double worst = 0.0;
  for (int topo = 0; topo < 5; ++topo) {
    const auto net = random_two_cell(rng, 4);
    const auto lmap = ParamMap::by_receiver(net);
    const auto qmap = ParamMap::by_receiver(net);
    const auto settings = stability_settings(4000 + static_cast<std::uint64_t>(topo));
    const auto region = aloha::stability_region(net, settings, lmap, qmap);
    g_fronts.push_back({fmt("C4 two-cell ", topo), region.q3.points,
                        std::vector<Sense>(2, Sense::kMaximize),
                        [net, settings, lmap, qmap](const std::vector<double>& l) {
                          return aloha::stability_membership(lmap.expand(l), net, settings, qmap);
                        }});
    if (region.empty) {
      report(fmt("C4b.", topo + 1), false, "GA returned an empty stability region");
      continue;
    }
    // Rays through the two extreme front points and the middle one.
    auto pts = region.q3.points;
    std::sort(pts.begin(), pts.end());
    std::vector<std::vector<double>> rays{pts.front(), pts[pts.size() / 2], pts.back()};
    double topo_worst = 0.0;
    for (const auto& dir : rays) {
      const double peak = *std::max_element(dir.begin(), dir.end());
      auto member = [&](std::span<const double> l) {
        return aloha::stability_membership(lmap.expand(l), net, settings, qmap);
      };
      const double t = aloha::ray_boundary(dir, member, std::min(3.0, 0.999 / peak), 1e-3);
      topo_worst = std::max(topo_worst, std::abs(1.0 - t) / t);
    }
    worst = std::max(worst, topo_worst);
    const bool ok = topo_worst <= 0.05;
    agreed += ok ? 1 : 0;
    report(fmt("C4b.", topo + 1), ok,
           fmt("two-cell K=4: GA front vs ray bisection, worst rel deviation ", topo_worst,
               " over 3 rays (", region.q3.points.size(), " front points)"));
  }
  report("C4b", agreed == 5, fmt(agreed, "/5 two-cell topologies within 5% (worst ", worst, ")"));
}

// ------------------------------------------------------------------ 5
aloha::Network random_network(std::mt19937_64& rng, std::size_t k, bool cellular) {
  std::uniform_real_distribution<double> coord(0.0, 100.0);
  std::vector<aloha::Point> tx(k);
  for (auto& p : tx) p = {coord(rng), coord(rng)};
  if (!cellular) {
    std::uniform_real_distribution<double> link(10.0, 30.0);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    aloha::Topology topo = aloha::gen_bipolar(tx, 20.0, rng(), {17.0, 0.0, -90.0, 3.8});
    for (std::size_t i = 0; i < k; ++i) {
      const double d = link(rng), a = angle(rng);
      topo.receivers[i].position = {tx[i].x_m + d * std::cos(a), tx[i].y_m + d * std::sin(a)};
    }
    return aloha::make_network(topo);
  }
  for (;;) {
    std::vector<aloha::Point> bs{{coord(rng), coord(rng)}, {coord(rng), coord(rng)}};
    auto topo = aloha::gen_cellular(tx, bs, {0.0, -3.0, -90.0, 4.0});
    bool ok = true;
    for (const auto& t : tx) {
      for (const auto& s : bs) ok = ok && aloha::distance(t, s) > 1.0;
    }
    if (!ok) {
      for (auto& p : tx) p = {coord(rng), coord(rng)};
      continue;
    }
    aloha::apply_power_control(topo, 10.0);
    return aloha::make_network(topo);
  }
}

struct FeasiblePoint {
  aloha::TrafficConfig cfg;
  double scale = 0.0;  // fraction of the boundary along the lambda ray
};

// q uniform on [0.1, 0.6]; lambda on a random ray at a random fraction in
// [0.3, 0.8] of the all-unsaturated boundary for that q.
std::optional<FeasiblePoint> random_feasible(std::mt19937_64& rng, const aloha::Network& net) {
  const std::size_t k = net.size();
  std::uniform_real_distribution<double> qd(0.1, 0.6), dir(0.2, 1.0), frac(0.3, 0.8);
  for (int attempt = 0; attempt < 20; ++attempt) {
    std::vector<double> q(k), d(k);
    for (auto& x : q) x = qd(rng);
    for (auto& x : d) x = dir(rng);
    auto member = [&](std::span<const double> l) { return aloha::unsat_membership(q, l, net); };
    const double t = aloha::ray_boundary(d, member, 1.0, 1e-5);
    if (t < 1e-2) continue;
    const double u = frac(rng);
    std::vector<double> lambda(k);
    for (std::size_t i = 0; i < k; ++i) lambda[i] = u * t * d[i];
    return FeasiblePoint{{lambda, q}, u};
  }
  return std::nullopt;
}

void criterion5() {
  std::mt19937_64 rng(505);
  const std::size_t ks[] = {2, 3, 5};
  int passed = 0, total = 0;
  double worst_p = 0.0, worst_thr = 0.0;
  for (int n = 0; n < 20; ++n) {
    const std::size_t k = ks[n % 3];
    const bool cellular = n % 2 == 1;
    const auto net = random_network(rng, k, cellular);
    const auto point = random_feasible(rng, net);
    if (!point) {
      report(fmt("C5.", n + 1), false, "no feasible (lambda, q) found for this topology");
      ++total;
      continue;
    }
    aloha::SimConfig sim;
    sim.slots = 1'000'000;
    sim.seed = aloha::derive_seed(505, static_cast<std::uint64_t>(n));
    aloha::VerifyTolerances tol;
    const auto rep = aloha::verify_against_analysis(net, point->cfg, sim, tol);
    double pe = 0.0, te = 0.0;
    for (const auto& row : rep.rows) {
      pe = std::max(pe, row.p_error);
      te = std::max(te, row.throughput_rel_error);
    }
    worst_p = std::max(worst_p, pe);
    worst_thr = std::max(worst_thr, te);
    ++total;
    passed += rep.pass ? 1 : 0;
    report(fmt("C5.", n + 1), rep.pass,
           fmt(cellular ? "cellular" : "bipolar", " K=", k, " load ", point->scale,
               " of boundary: max |dp| ", pe, ", max throughput rel err ", te, " ",
               rep.summary()));
  }
  report("C5", passed == total,
         fmt(passed, "/", total, " random topologies agree (worst |dp| ", worst_p,
             ", worst throughput rel err ", worst_thr, ")"));
}

// ------------------------------------------------------------------ 6
void criterion6() {
  const auto sym = aloha::symmetric_network(25, kTheta0, kRho10);
  const auto cfg = aloha::TrafficConfig::uniform(25, 0.02, 0.1);
  const auto sol = aloha::steady_state(cfg, sym);
  report("C6a", sol.all_unsaturated() && std::abs(sol.p[0] - 0.608) <= 0.005,
         fmt("symmetric exact-product fixed point ", sol.p[0], " vs 0.608 +-0.005"));
  aloha::SimConfig sim;
  sim.seed = 606;
  const auto res = aloha::simulate(sym, cfg, sim);
  double worst = 0.0;
  for (const auto& st : res.tx) worst = std::max(worst, std::abs(st.measured_p - sol.p[0]));
  report("C6b", worst <= 0.02,
         fmt("simulated measured_p worst deviation ", worst, " over 25 transmitters (limit 0.02)"));
}

// ------------------------------------------------------------------ 7
void criterion7() {
  aloha::PercentStableSettings settings;
  settings.side_lengths = {300, 600, 900, 1200, 1500, 1800};
  settings.samples = 10;
  settings.seed = 707;
  aloha::SimConfig sim;
  sim.slots = 100'000;
  sim.decode = aloha::DecodeMethod::kConditionalProbability;
  const auto rows = aloha::experiment_percent_stable(settings, sim);
  std::string table;
  for (const auto& r : rows) table += fmt(" L=", r.side_length, ":", r.percent_stable, "%");
  report("C7a", rows.front().percent_stable < 90.0,
         fmt("percent stable at L=300 is ", rows.front().percent_stable, "% (needs < 90%);",
             table));
  bool monotone = true;
  for (std::size_t i = 0; i + 1 < rows.size(); ++i) {
    const double slack = 3.0 * std::hypot(rows[i].standard_error, rows[i + 1].standard_error);
    monotone = monotone && rows[i + 1].percent_stable >= rows[i].percent_stable - slack;
  }
  report("C7b", monotone, "sweep non-decreasing in L within 3 standard errors");
}

// ------------------------------------------------------------------ 8
void criterion8() {
  {
    std::mt19937_64 rng(808);
    const double inv_e = std::exp(-1.0);
    std::uniform_real_distribution<double> neg(-inv_e, 0.0), pos(0.0, 1e3);
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
      const double z = neg(rng);
      if (z > -inv_e && z < 0.0) {
        const double w0 = aloha::numerics::lambert_w0(z);
        const double wm = aloha::numerics::lambert_wm1(z);
        worst = std::max({worst, std::abs(w0 * std::exp(w0) - z), std::abs(wm * std::exp(wm) - z)});
      }
      const double y = pos(rng);
      const double w = aloha::numerics::lambert_w0(y);
      worst = std::max(worst, std::abs(w * std::exp(w) - y) / std::max(1.0, y));
    }
    report("C8a", worst <= 1e-12, fmt("Lambert W round trip worst error ", worst, " (limit 1e-12)"));
  }
  {
    // Synthetic problem: maximise both coordinates inside the unit disc.
    aloha::numerics::MooProblem disc;
    disc.dimension = 2;
    disc.sense = {Sense::kMaximize, Sense::kMaximize};
    disc.box_lower = {0.0, 0.0};
    disc.box_upper = {1.0, 1.0};
    disc.violation = [](std::span<const double> x) {
      return std::max(0.0, x[0] * x[0] + x[1] * x[1] - 1.0);
    };
    aloha::numerics::MooSettings s;
    s.population_size = 100;
    s.max_generations = 200;
    s.rng_seed = 8;
    const auto front = aloha::numerics::pareto_solve(disc, s);
    g_fronts.push_back({"C8 disc", front.points, disc.sense, [&](const std::vector<double>& x) {
                          return disc.violation(x) <= s.constraint_tolerance;
                        }});
    std::size_t checked = 0, bad = 0;
    for (const auto& f : g_fronts) {
      const bool nd = aloha::numerics::mutually_nondominated(f.points, f.sense);
      bool feas = true;
      for (const auto& p : f.points) feas = feas && f.feasible(p);
      if (!nd || !feas || f.points.empty()) {
        ++bad;
        std::cout << "  front '" << f.label << "': nondominated=" << nd << " feasible=" << feas
                  << " size=" << f.points.size() << '\n';
      }
      ++checked;
    }
    report("C8b", bad == 0,
           fmt(checked - bad, "/", checked, " emitted fronts non-dominated and feasible"));
  }
  {
    std::mt19937_64 rng(818);
    std::uniform_real_distribution<double> own(-4.0, 10.0), cross(-8.0, 9.0), th(-10.0, 0.0);
    std::uniform_real_distribution<double> lam(0.0, 0.35), unit(0.0, 1.0);
    int ok = 0, n = 0;
    while (n < 100) {
      const auto net = aloha::two_pair_network(
          aloha::db_to_linear(own(rng)), aloha::db_to_linear(cross(rng)),
          aloha::db_to_linear(cross(rng)), aloha::db_to_linear(own(rng)),
          aloha::db_to_linear(th(rng)), aloha::db_to_linear(th(rng)));
      const auto cf = aloha::two_tr_closed_form({lam(rng), lam(rng)}, net);
      if (!cf.exists || cf.c_L - cf.c_S < 1e-3 || cf.lambda[0] < 1e-3 || cf.lambda[1] < 1e-3) {
        continue;
      }
      ++n;
      double c = cf.c_S + (1.0 - cf.c_S) * (0.001 + 0.999 * unit(rng));
      for (int t = 0; t < 100000 && std::abs(c - cf.c_L) > 1e-12; ++t) c = aloha::two_pair_c_map(c, cf);
      double d = cf.c_S * 0.999 * unit(rng);
      bool decreasing = true;
      for (int t = 0; t < 50 && d > 0.0; ++t) {
        const double next = aloha::two_pair_c_map(d, cf);
        decreasing = decreasing && next < d;
        d = next;
      }
      ok += (std::abs(c - cf.c_L) <= 1e-8 * cf.c_L && decreasing) ? 1 : 0;
    }
    report("C8c", ok == 100,
           fmt(ok, "/100 two-pair instances: above the repelling root converges to the "
                   "attracting root, below it decreases"));
  }
  {
    std::mt19937_64 rng(828);
    std::uniform_int_distribution<std::size_t> kd(2, 60);
    std::uniform_real_distribution<double> th(0.05, 5.0), rho_db(0.0, 30.0), frac(0.05, 0.95);
    std::uniform_real_distribution<double> unit(0.001, 1.0);
    int ok = 0;
    for (int n = 0; n < 100; ++n) {
      const std::size_t k = kd(rng);
      const double theta = th(rng), rho = aloha::db_to_linear(rho_db(rng));
      const double bound =
          (theta + 1.0) / (static_cast<double>(k) * theta) * std::exp(-1.0 - theta / rho);
      const double lambda = frac(rng) * bound;
      const auto cf = aloha::symmetric_closed_form(k, lambda, theta, rho);
      double p = *cf.p_S + (1.0 - *cf.p_S) * unit(rng);
      for (int t = 0; t < 100000 && std::abs(p - *cf.p_L) > 1e-13; ++t) {
        p = aloha::symmetric_g_map(p, k, lambda, theta, rho);
      }
      double d = *cf.p_S * (1.0 - unit(rng) * 0.99);
      bool decreasing = true;
      for (int t = 0; t < 30 && d > 1e-300; ++t) {
        const double next = aloha::symmetric_g_map(d, k, lambda, theta, rho);
        decreasing = decreasing && next < d;
        d = next;
      }
      ok += (std::abs(p - *cf.p_L) <= 1e-8 * *cf.p_L && decreasing) ? 1 : 0;
    }
    report("C8d", ok == 100,
           fmt(ok, "/100 symmetric instances: above the repelling root converges to the "
                   "attracting root, below it decreases"));
  }
  {
    std::mt19937_64 rng(838);
    std::uniform_real_distribution<double> own(-4.0, 10.0), cross(-8.0, 9.0), th(-10.0, 0.0);
    std::uniform_real_distribution<double> lam(0.02, 0.25), grow(0.01, 0.05);
    int ok = 0;
    std::size_t members = 0;
    for (int n = 0; n < 10; ++n) {
      const auto net = aloha::two_pair_network(
          aloha::db_to_linear(own(rng)), aloha::db_to_linear(cross(rng)),
          aloha::db_to_linear(cross(rng)), aloha::db_to_linear(own(rng)),
          aloha::db_to_linear(th(rng)), aloha::db_to_linear(th(rng)));
      const std::vector<double> small{lam(rng), lam(rng)};
      const std::vector<double> big{small[0] + grow(rng), small[1] + grow(rng)};
      bool inclusion = true;
      for (int i = 1; i <= 40; ++i) {
        for (int j = 1; j <= 40; ++j) {
          const std::vector<double> q{i / 40.0, j / 40.0};
          if (aloha::unsat_membership(q, big, net)) {
            ++members;
            inclusion = inclusion && aloha::unsat_membership(q, small, net);
          }
        }
      }
      ok += inclusion ? 1 : 0;
    }
    report("C8e", ok == 10,
           fmt(ok, "/10 two-pair instances: region at larger lambda contained in the region at "
                   "smaller lambda (", members, " member grid points checked)"));
  }
  {
    std::mt19937_64 rng(848);
    bool exact = true;
    std::uint64_t packets = 0;
    for (int n = 0; n < 12; ++n) {
      const std::size_t k = 2 + static_cast<std::size_t>(n % 4);
      const auto net = random_network(rng, k, n % 2 == 1);
      std::uniform_real_distribution<double> ld(0.0, 0.6), qd(0.05, 1.0);
      aloha::TrafficConfig cfg;
      for (std::size_t i = 0; i < k; ++i) {
        cfg.lambda.push_back(ld(rng));
        cfg.q.push_back(qd(rng));
      }
      aloha::SimConfig sim;
      sim.slots = 50'000;
      sim.seed = rng();
      const auto res = aloha::simulate(net, cfg, sim);
      for (const auto& st : res.tx) {
        exact = exact && st.departures + st.final_queue == st.arrivals;
        packets += st.arrivals;
      }
    }
    report("C8f", exact,
           fmt("arrivals = departures + final queue for every transmitter of 12 runs (",
               packets, " packets)"));
  }
}

std::set<std::string> split(const std::string& s) {
  std::set<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(item);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  std::set<std::string> known_fail;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else if (arg == "--known-fail" && i + 1 < argc) {
      known_fail = split(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N] [--known-fail ID,...]\n";
      return 2;
    }
  }
  const std::vector<std::function<void()>> criteria{criterion1, criterion2, criterion3,
                                                    criterion4, criterion5, criterion6,
                                                    criterion7, criterion8};
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    if (only != 0 && static_cast<std::size_t>(only) != c + 1) continue;
    // Criterion 8 checks the fronts emitted by 1-4; run alone it checks its own.
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[c]();
    } catch (const std::exception& e) {
      report(fmt("C", c + 1), false, fmt("threw: ", e.what()));
    }
    const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
    std::cout << "  (criterion " << c + 1 << ": " << took.count() << " s)" << std::endl;
  }

  int unexpected = 0;
  for (const auto& o : g_outcomes) {
    const bool listed = known_fail.count(o.id) > 0;
    if (!o.pass && !listed) ++unexpected;
    if (o.pass && listed) {
      std::cout << "NOTE " << o.id << " is listed as a known failure but passed\n";
      ++unexpected;
    }
  }
  std::size_t failed = 0;
  for (const auto& o : g_outcomes) failed += o.pass ? 0 : 1;
  std::cout << "SUMMARY " << g_outcomes.size() - failed << "/" << g_outcomes.size()
            << " checks passed";
  if (!known_fail.empty()) std::cout << "; known failures listed: " << known_fail.size();
  std::cout << std::endl;
  return unexpected == 0 ? 0 : 1;
}
