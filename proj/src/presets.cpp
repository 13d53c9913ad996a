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

#include "aloha/presets.hpp"

#include <random>

#include "aloha/errors.hpp"
#include "aloha/simulator.hpp"

namespace aloha {
namespace {

constexpr int kMaxRedraws = 64;

std::vector<Point> ppp_points(double density, double side, std::uint64_t seed) {
  for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
    try {
      return gen_ppp_square(density, side, attempt == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(attempt)));
    } catch (const EmptyTopology&) {
    }
  }
  throw EmptyTopology("preset: every point-process draw was empty");
}

std::vector<Point> uniform_points(std::size_t n, double side, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.0, side);
  std::vector<Point> points(n);
  for (auto& p : points) {
    p.x_m = coord(rng);
    p.y_m = coord(rng);
  }
  return points;
}

Topology bipolar_preset(const PresetOptions& options) {
  const auto points = ppp_points(1e-4, options.side_length, options.seed);
  return gen_bipolar(points, 25.0, derive_seed(options.seed, 100),
                     RadioProfile{17.0, 0.0, -90.0, 3.8});
}

Topology cellular_preset(std::size_t stations, double rho_db, double theta_db,
                         const PresetOptions& options) {
  const auto users = ppp_points(1e-3, 150.0, options.seed);
  const auto bs = uniform_points(stations, 150.0, derive_seed(options.seed, 200));
  Topology topo = gen_cellular(users, bs, RadioProfile{0.0, theta_db, -90.0, 4.0});
  apply_power_control(topo, rho_db);
  return topo;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"fig2", "fig4a", "fig4c", "fig5a", "fig5c", "fig10"};
}

Topology make_preset(const std::string& name, const PresetOptions& options) {
  if (name == "fig4a") return two_pair_topology_db(-3.0, 8.8, 5.1, -1.3, -5.0, -7.0);
  if (name == "fig4c") return two_pair_topology_db(-3.0, -3.4, 5.1, -1.3, -5.0, -7.0);
  if (name == "fig2" || name == "fig10") {
    if (!(options.side_length > 0.0)) throw DomainError("preset: side length must be positive");
    return bipolar_preset(options);
  }
  if (name == "fig5a") return cellular_preset(1, 10.0, 0.0, options);
  if (name == "fig5c") return cellular_preset(2, 0.0, -8.0, options);
  throw DomainError("unknown preset '" + name + "'");
}

std::optional<TrafficConfig> preset_traffic(const std::string& name, std::size_t k) {
  if (name == "fig4a" || name == "fig4c") return TrafficConfig{{0.2, 0.27}, {0.9, 0.7}};
  if (name == "fig2" || name == "fig10") return TrafficConfig::uniform(k, 0.2, 1.0);
  if (name == "fig5a") return TrafficConfig::uniform(k, 0.02, 0.1);
  if (name == "fig5c") return TrafficConfig::uniform(k, 0.1, 0.1);
  return std::nullopt;
}

}  // namespace aloha
