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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "aloha/errors.hpp"
#include "aloha/topology.hpp"
#include "aloha/topology_io.hpp"

namespace {

aloha::Topology single_link(double power_dbm, double noise_dbm, double d, double alpha) {
  aloha::Topology t;
  t.transmitters = {{1, {0.0, 0.0}, power_dbm}};
  t.receivers = {{1, {d, 0.0}, 0.0}};
  t.association = {{1, 1}};
  t.noise_dbm = noise_dbm;
  t.alpha = alpha;
  return t;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_CASE("mean snr matrix") {
  SUBCASE("unit factors") {
    const auto m = aloha::mean_snr_matrix(single_link(0.0, 0.0, 1.0, 4.0));
    CHECK(m.rho(0, 0) == doctest::Approx(1.0));
  }
  SUBCASE("default radio at 25 m") {
    // 10^10.7 / 25^3.8 evaluated with mpmath.
    const auto m = aloha::mean_snr_matrix(single_link(17.0, -90.0, 25.0, 3.8));
    CHECK(m.rho(0, 0) == doctest::Approx(244246.285).epsilon(1e-8));
  }
  SUBCASE("doubling the distance with alpha 4") {
    const double near = aloha::mean_snr_matrix(single_link(10.0, -80.0, 7.0, 4.0)).rho(0, 0);
    const double far = aloha::mean_snr_matrix(single_link(10.0, -80.0, 14.0, 4.0)).rho(0, 0);
    CHECK(near / far == doctest::Approx(16.0));
  }
  SUBCASE("override bypasses geometry") {
    auto t = aloha::two_pair_topology_db(-3.0, 8.8, 5.1, -1.3, -5.0, -7.0);
    const auto m = aloha::mean_snr_matrix(t);
    CHECK(m.rho(0, 0) == doctest::Approx(std::pow(10.0, -0.3)));
    CHECK(m.rho(0, 1) == doctest::Approx(std::pow(10.0, 0.88)));
    CHECK(m.rho(1, 0) == doctest::Approx(std::pow(10.0, 0.51)));
  }
}

TEST_CASE("mean snr is monotone in distance and power") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> pos(0.0, 100.0);
  std::uniform_real_distribution<double> bump(0.1, 5.0);
  for (int trial = 0; trial < 50; ++trial) {
    aloha::Topology t;
    for (int k = 1; k <= 3; ++k) {
      t.transmitters.push_back({k, {pos(rng), pos(rng)}, 10.0});
      t.receivers.push_back({k, {pos(rng), pos(rng)}, 0.0});
      t.association[k] = k;
    }
    const auto base = aloha::mean_snr_matrix(t).rho;
    auto louder = t;
    louder.transmitters[1].power_dbm += bump(rng);
    const auto up = aloha::mean_snr_matrix(louder).rho;
    CHECK((up.row(1).array() > base.row(1).array()).all());
    CHECK((up.row(0).array() == base.row(0).array()).all());

    auto farther = t;
    // Move receiver 3 directly away from transmitter 1.
    const auto& tx = t.transmitters[0].position;
    auto& rx = farther.receivers[2].position;
    const double scale = 1.0 + bump(rng);
    rx = {tx.x_m + (rx.x_m - tx.x_m) * scale, tx.y_m + (rx.y_m - tx.y_m) * scale};
    CHECK(aloha::mean_snr_matrix(farther).rho(0, 2) < base(0, 2));
  }
}

TEST_CASE("topology validation") {
  auto t = single_link(0.0, 0.0, 1.0, 4.0);
  CHECK_NOTHROW(aloha::validate(t));

  auto colocated = single_link(0.0, 0.0, 0.0, 4.0);
  CHECK_THROWS_WITH_AS(aloha::validate(colocated), doctest::Contains("distance zero"),
                       aloha::TopologyError);

  auto flat = single_link(0.0, 0.0, 1.0, 2.0);
  CHECK_THROWS_AS(aloha::validate(flat), aloha::TopologyError);

  auto orphan = t;
  orphan.association.clear();
  CHECK_THROWS_WITH_AS(aloha::validate(orphan), doctest::Contains("transmitter 1"),
                       aloha::TopologyError);

  auto dangling = t;
  dangling.association[1] = 7;
  CHECK_THROWS_AS(aloha::validate(dangling), aloha::TopologyError);

  aloha::Topology empty;
  CHECK_THROWS_AS(aloha::validate(empty), aloha::TopologyError);
}

TEST_CASE("ppp generator") {
  SUBCASE("deterministic per seed") {
    const auto a = aloha::gen_ppp_square(1e-4, 300.0, 42);
    const auto b = aloha::gen_ppp_square(1e-4, 300.0, 42);
    CHECK(a == b);
    for (const auto& p : a) {
      CHECK(p.x_m >= 0.0);
      CHECK(p.x_m <= 300.0);
      CHECK(p.y_m >= 0.0);
      CHECK(p.y_m <= 300.0);
    }
  }
  SUBCASE("mean count") {
    const double mean = 1e-4 * 300.0 * 300.0;
    const int seeds = 10000;
    double total = 0.0;
    for (int s = 0; s < seeds; ++s) {
      try {
        total += static_cast<double>(aloha::gen_ppp_square(1e-4, 300.0, s).size());
      } catch (const aloha::EmptyTopology&) {
      }
    }
    const double se = std::sqrt(mean / seeds);
    CHECK(std::abs(total / seeds - mean) < 3.0 * se);
  }
  SUBCASE("empty draw") {
    CHECK_THROWS_AS(aloha::gen_ppp_square(1e-9, 1.0, 1), aloha::EmptyTopology);
  }
}

TEST_CASE("bipolar generator") {
  const std::vector<aloha::Point> origin{{0.0, 0.0}};
  const auto one = aloha::gen_bipolar(origin, 25.0, 3);
  CHECK(aloha::distance(one.transmitters[0].position, one.receivers[0].position) ==
        doctest::Approx(25.0));

  const auto pts = aloha::gen_ppp_square(1e-4, 300.0, 9);
  const auto t = aloha::gen_bipolar(pts, 25.0, 9);
  CHECK(t.num_transmitters() == pts.size());
  CHECK(t.num_receivers() == pts.size());
  for (const auto& [tx, rx] : t.association) CHECK(tx == rx);
  CHECK(t == aloha::gen_bipolar(pts, 25.0, 9));
  CHECK_NOTHROW(aloha::validate(t));
}

TEST_CASE("cellular generator") {
  const std::vector<aloha::Point> tx{{1.0, 0.0}, {5.0, 5.0}, {9.0, 0.0}};
  SUBCASE("single base station") {
    const std::vector<aloha::Point> bs{{0.0, 3.0}};
    const auto t = aloha::gen_cellular(tx, bs);
    for (const auto& [k, l] : t.association) CHECK(l == t.receivers[0].id);
  }
  SUBCASE("nearest with ties to the lowest id") {
    const std::vector<aloha::Point> bs{{0.0, 0.0}, {10.0, 0.0}};
    const auto t = aloha::gen_cellular(tx, bs);
    const auto serving = t.serving_indices();
    CHECK(serving == std::vector<int>{0, 0, 1});
  }
}

TEST_CASE("power control hits the target snr") {
  const auto pts = aloha::gen_ppp_square(1e-4, 300.0, 4);
  const std::vector<aloha::Point> bs{{150.0, 150.0}};
  auto t = aloha::gen_cellular(pts, bs);
  aloha::apply_power_control(t, 10.0);
  const auto net = aloha::make_network(t);
  for (std::size_t k = 0; k < net.size(); ++k) CHECK(net.own_snr(k) == doctest::Approx(10.0));
}

TEST_CASE("network views") {
  const auto sym = aloha::symmetric_network(4, 1.0, 10.0);
  CHECK(sym.size() == 4);
  CHECK(sym.cross_snr(2, 1) == doctest::Approx(10.0));
  const auto two = aloha::two_pair_network(1.0, 2.0, 3.0, 4.0, 0.5, 0.25);
  CHECK(two.own_snr(0) == 1.0);
  CHECK(two.own_snr(1) == 4.0);
  CHECK(two.cross_snr(1, 0) == 3.0);  // transmitter 2 heard at receiver 1
  CHECK(two.cross_snr(0, 1) == 2.0);
  CHECK(two.theta_of(1) == 0.25);
}

TEST_CASE("topology file round trip") {
  const auto path = temp_file("aloha_topology_roundtrip.json");
  const auto fig4 = aloha::two_pair_topology_db(-3.0, 8.8, 5.1, -1.3, -5.0, -7.0);
  aloha::save_topology(fig4, path);
  CHECK(aloha::load_topology(path) == fig4);

  const auto pts = aloha::gen_ppp_square(1e-4, 300.0, 2);
  const auto geo = aloha::gen_bipolar(pts, 25.0, 2);
  aloha::save_topology(geo, path);
  CHECK(aloha::load_topology(path) == geo);
  std::filesystem::remove(path);
}

TEST_CASE("topology file diagnostics") {
  const std::string colocated = R"({"version": 1, "noise_dbm": -90, "alpha": 4,
    "transmitters": [{"id": 1, "x_m": 0, "y_m": 0, "power_dbm": 17}],
    "receivers": [{"id": 1, "x_m": 0, "y_m": 0, "theta_db": 0}],
    "association": {"1": 1}})";
  CHECK_THROWS_WITH_AS(aloha::parse_topology(colocated), doctest::Contains("distance zero"),
                       aloha::TopologyError);

  const std::string missing = R"({"version": 1, "noise_dbm": -90, "alpha": 4,
    "transmitters": [{"id": 1, "x_m": 0, "y_m": 0, "power_dbm": 17},
                     {"id": 2, "x_m": 5, "y_m": 0, "power_dbm": 17}],
    "receivers": [{"id": 1, "x_m": 1, "y_m": 0, "theta_db": 0}],
    "association": {"1": 1}})";
  CHECK_THROWS_WITH_AS(aloha::parse_topology(missing), doctest::Contains("transmitter 2"),
                       aloha::TopologyError);

  CHECK_THROWS_WITH_AS(aloha::parse_topology("{\"version\": 1,\n  oops}"),
                       doctest::Contains("line 2"), aloha::TopologyError);

  const std::string wrong_version = R"({"version": 99})";
  CHECK_THROWS_AS(aloha::parse_topology(wrong_version), aloha::TopologyError);
}
