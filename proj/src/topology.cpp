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

#include "aloha/topology.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "aloha/errors.hpp"

namespace aloha {
namespace {

template <typename... Args>
[[noreturn]] void fail(const Args&... parts) {
  std::ostringstream os;
  (os << ... << parts);
  throw TopologyError(os.str());
}

bool finite_point(const Point& p) { return std::isfinite(p.x_m) && std::isfinite(p.y_m); }

}  // namespace

double distance(const Point& a, const Point& b) {
  return std::hypot(a.x_m - b.x_m, a.y_m - b.y_m);
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

std::vector<int> Topology::serving_indices() const {
  std::map<int, int> index_of;
  for (std::size_t l = 0; l < receivers.size(); ++l) {
    index_of[receivers[l].id] = static_cast<int>(l);
  }
  std::vector<int> serving;
  serving.reserve(transmitters.size());
  for (const auto& tx : transmitters) {
    const auto assoc = association.find(tx.id);
    if (assoc == association.end()) fail("transmitter ", tx.id, " has no association entry");
    const auto rx = index_of.find(assoc->second);
    if (rx == index_of.end()) {
      fail("transmitter ", tx.id, " is associated with unknown receiver ", assoc->second);
    }
    serving.push_back(rx->second);
  }
  return serving;
}

bool operator==(const Topology& a, const Topology& b) {
  if (a.transmitters != b.transmitters || a.receivers != b.receivers ||
      a.association != b.association || a.noise_dbm != b.noise_dbm || a.alpha != b.alpha ||
      a.rho_db.has_value() != b.rho_db.has_value()) {
    return false;
  }
  if (!a.rho_db) return true;
  return a.rho_db->rows() == b.rho_db->rows() && a.rho_db->cols() == b.rho_db->cols() &&
         *a.rho_db == *b.rho_db;
}

void validate(const Topology& topo) {
  if (topo.transmitters.empty()) fail("topology has no transmitters");
  if (topo.receivers.empty()) fail("topology has no receivers");
  if (!(topo.alpha > 2.0) || !std::isfinite(topo.alpha)) {
    fail("path-loss exponent must exceed 2, got ", topo.alpha);
  }
  if (!std::isfinite(topo.noise_dbm)) fail("noise power must be finite");

  std::set<int> tx_ids;
  for (const auto& tx : topo.transmitters) {
    if (!tx_ids.insert(tx.id).second) fail("duplicate transmitter id ", tx.id);
    if (!finite_point(tx.position) || !std::isfinite(tx.power_dbm)) {
      fail("transmitter ", tx.id, " has a non-finite field");
    }
  }
  std::set<int> rx_ids;
  for (const auto& rx : topo.receivers) {
    if (!rx_ids.insert(rx.id).second) fail("duplicate receiver id ", rx.id);
    if (!finite_point(rx.position) || !std::isfinite(rx.theta_db)) {
      fail("receiver ", rx.id, " has a non-finite field");
    }
  }
  for (const auto& [tx, rx] : topo.association) {
    if (!tx_ids.contains(tx)) fail("association names unknown transmitter ", tx);
  }
  (void)topo.serving_indices();

  for (const auto& tx : topo.transmitters) {
    for (const auto& rx : topo.receivers) {
      if (!(distance(tx.position, rx.position) > 0.0)) {
        fail("transmitter ", tx.id, " and receiver ", rx.id, " are co-located (distance zero)");
      }
    }
  }

  if (topo.rho_db) {
    const auto& m = *topo.rho_db;
    if (m.rows() != static_cast<Eigen::Index>(topo.transmitters.size()) ||
        m.cols() != static_cast<Eigen::Index>(topo.receivers.size())) {
      fail("rho_db override must be ", topo.transmitters.size(), " x ", topo.receivers.size());
    }
    if (!m.allFinite()) fail("rho_db override has a non-finite entry");
  }
}

SnrMatrix mean_snr_matrix(const Topology& topo) {
  validate(topo);
  const auto k = static_cast<Eigen::Index>(topo.transmitters.size());
  const auto l = static_cast<Eigen::Index>(topo.receivers.size());
  SnrMatrix snr{Eigen::MatrixXd(k, l)};
  if (topo.rho_db) {
    snr.rho = topo.rho_db->unaryExpr([](double v) { return db_to_linear(v); });
    return snr;
  }
  const double noise_mw = db_to_linear(topo.noise_dbm);
  for (Eigen::Index i = 0; i < k; ++i) {
    const auto& tx = topo.transmitters[static_cast<std::size_t>(i)];
    const double power_mw = db_to_linear(tx.power_dbm);
    for (Eigen::Index j = 0; j < l; ++j) {
      const double d = distance(tx.position, topo.receivers[static_cast<std::size_t>(j)].position);
      snr.rho(i, j) = power_mw * std::pow(d, -topo.alpha) / noise_mw;
    }
  }
  return snr;
}

std::vector<Point> gen_ppp_square(double density, double side_length, std::uint64_t seed) {
  if (!(density > 0.0) || !(side_length > 0.0)) {
    throw DomainError("gen_ppp_square: density and side length must be positive");
  }
  std::mt19937_64 rng(seed);
  std::poisson_distribution<long long> count_dist(density * side_length * side_length);
  const long long count = count_dist(rng);
  if (count == 0) throw EmptyTopology("gen_ppp_square: the draw produced no points");
  std::uniform_real_distribution<double> coord(0.0, side_length);
  std::vector<Point> points(static_cast<std::size_t>(count));
  for (auto& p : points) {
    p.x_m = coord(rng);
    p.y_m = coord(rng);
  }
  return points;
}

Topology gen_bipolar(std::span<const Point> tx_positions, double tr_distance,
                     std::uint64_t seed, const RadioProfile& radio) {
  if (!(tr_distance > 0.0)) throw DomainError("gen_bipolar: tr_distance must be positive");
  Topology topo;
  topo.noise_dbm = radio.noise_dbm;
  topo.alpha = radio.alpha;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  for (std::size_t i = 0; i < tx_positions.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    const double phi = angle(rng);
    const Point& p = tx_positions[i];
    topo.transmitters.push_back({id, p, radio.power_dbm});
    topo.receivers.push_back(
        {id, {p.x_m + tr_distance * std::cos(phi), p.y_m + tr_distance * std::sin(phi)}, radio.theta_db});
    topo.association[id] = id;
  }
  return topo;
}

Topology gen_cellular(std::span<const Point> tx_positions,
                      std::span<const Point> bs_positions, const RadioProfile& radio) {
  if (bs_positions.empty()) throw DomainError("gen_cellular: need at least one base station");
  Topology topo;
  topo.noise_dbm = radio.noise_dbm;
  topo.alpha = radio.alpha;
  for (std::size_t l = 0; l < bs_positions.size(); ++l) {
    topo.receivers.push_back({static_cast<int>(l) + 1, bs_positions[l], radio.theta_db});
  }
  for (std::size_t i = 0; i < tx_positions.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    topo.transmitters.push_back({id, tx_positions[i], radio.power_dbm});
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < bs_positions.size(); ++l) {
      const double d = distance(tx_positions[i], bs_positions[l]);
      if (d < best_d) {
        best_d = d;
        best = l;
      }
    }
    topo.association[id] = topo.receivers[best].id;
  }
  return topo;
}

void apply_power_control(Topology& topo, double target_rho_db) {
  const auto serving = topo.serving_indices();
  for (std::size_t k = 0; k < topo.transmitters.size(); ++k) {
    auto& tx = topo.transmitters[k];
    const double d =
        distance(tx.position, topo.receivers[static_cast<std::size_t>(serving[k])].position);
    tx.power_dbm = target_rho_db + topo.noise_dbm + 10.0 * topo.alpha * std::log10(d);
  }
}

Network make_network(const Topology& topo) {
  Network net;
  net.rho = mean_snr_matrix(topo).rho;
  net.serving = topo.serving_indices();
  net.theta.reserve(topo.receivers.size());
  for (const auto& rx : topo.receivers) net.theta.push_back(db_to_linear(rx.theta_db));
  return net;
}

Network symmetric_network(std::size_t k, double theta, double rho) {
  if (k == 0 || !(theta > 0.0) || !(rho > 0.0)) {
    throw DomainError("symmetric_network: need k >= 1, theta > 0, rho > 0");
  }
  Network net;
  net.rho = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(k), 1, rho);
  net.theta = {theta};
  net.serving.assign(k, 0);
  return net;
}

Network two_pair_network(double rho11, double rho12, double rho21, double rho22,
                         double theta1, double theta2) {
  Network net;
  net.rho.resize(2, 2);
  net.rho << rho11, rho12, rho21, rho22;
  net.theta = {theta1, theta2};
  net.serving = {0, 1};
  return net;
}

Topology two_pair_topology_db(double rho11, double rho12, double rho21, double rho22,
                              double theta1_db, double theta2_db) {
  Topology topo;
  topo.noise_dbm = 0.0;
  topo.alpha = 4.0;
  topo.transmitters = {{1, {0.0, 0.0}, 0.0}, {2, {0.0, 30.0}, 0.0}};
  topo.receivers = {{1, {10.0, 0.0}, theta1_db}, {2, {10.0, 30.0}, theta2_db}};
  topo.association = {{1, 1}, {2, 2}};
  Eigen::MatrixXd rho(2, 2);
  rho << rho11, rho12, rho21, rho22;
  topo.rho_db = rho;
  return topo;
}

}  // namespace aloha
