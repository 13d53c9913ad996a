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

#ifndef ALOHA_TOPOLOGY_HPP_
#define ALOHA_TOPOLOGY_HPP_

#include <Eigen/Dense>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace aloha {

struct Point {
  double x_m = 0.0;
  double y_m = 0.0;

  friend bool operator==(const Point&, const Point&) = default;
};

double distance(const Point& a, const Point& b);

struct Transmitter {
  int id = 0;
  Point position;
  double power_dbm = 0.0;

  friend bool operator==(const Transmitter&, const Transmitter&) = default;
};

struct Receiver {
  int id = 0;
  Point position;
  double theta_db = 0.0;  // SINR decoding threshold

  friend bool operator==(const Receiver&, const Receiver&) = default;
};

// Static network: K transmitters, L receivers, each transmitter served by
// exactly one receiver. All human-facing quantities are in dB / dBm.
struct Topology {
  std::vector<Transmitter> transmitters;
  std::vector<Receiver> receivers;
  std::map<int, int> association;  // transmitter id -> receiver id
  double noise_dbm = -90.0;
  double alpha = 4.0;              // path-loss exponent
  // K x L mean received SNRs in dB; bypasses the geometry when present.
  std::optional<Eigen::MatrixXd> rho_db;

  std::size_t num_transmitters() const { return transmitters.size(); }
  std::size_t num_receivers() const { return receivers.size(); }

  // Index (into receivers) of the receiver serving transmitters[k].
  std::vector<int> serving_indices() const;

  friend bool operator==(const Topology&, const Topology&);
};

// Throws TopologyError naming the offending entity.
void validate(const Topology& topo);

double db_to_linear(double db);
double linear_to_db(double linear);

struct SnrMatrix {
  Eigen::MatrixXd rho;  // K x L, linear
};

// rho(k, l) = P_k * d(k, l)^-alpha / sigma^2 in linear units, or the override.
SnrMatrix mean_snr_matrix(const Topology& topo);

// Radio parameters applied uniformly by the generators.
struct RadioProfile {
  double power_dbm = 17.0;
  double theta_db = 0.0;
  double noise_dbm = -90.0;
  double alpha = 3.8;
};

// Homogeneous PPP on [0, side]^2. Throws EmptyTopology on a zero draw.
std::vector<Point> gen_ppp_square(double density, double side_length, std::uint64_t seed);

// Each transmitter gets a dedicated receiver at tr_distance with uniform
// orientation; association is i -> i.
Topology gen_bipolar(std::span<const Point> tx_positions, double tr_distance,
                     std::uint64_t seed, const RadioProfile& radio = {});

// Each transmitter joins its nearest base station, ties to the lowest id.
Topology gen_cellular(std::span<const Point> tx_positions,
                      std::span<const Point> bs_positions,
                      const RadioProfile& radio = {});

// Sets every transmit power so that the mean SNR at the serving receiver
// equals target_rho_db (uplink power control).
void apply_power_control(Topology& topo, double target_rho_db);

// Analysis view: the only channel statistics the equations need.
struct Network {
  Eigen::MatrixXd rho;        // K x L, linear
  std::vector<double> theta;  // per receiver, linear
  std::vector<int> serving;   // transmitter index -> receiver index

  std::size_t size() const { return serving.size(); }
  double theta_of(std::size_t k) const { return theta[static_cast<std::size_t>(serving[k])]; }
  double own_snr(std::size_t k) const { return rho(static_cast<Eigen::Index>(k), serving[k]); }
  // Mean SNR of transmitter j at the receiver serving transmitter i.
  double cross_snr(std::size_t j, std::size_t i) const {
    return rho(static_cast<Eigen::Index>(j), serving[i]);
  }
};

Network make_network(const Topology& topo);

// K transmitters to one receiver, every mean SNR equal to rho (linear).
Network symmetric_network(std::size_t k, double theta, double rho);

// Two dedicated pairs; rho_jl is transmitter j at receiver l (linear units).
Network two_pair_network(double rho11, double rho12, double rho21, double rho22,
                         double theta1, double theta2);

// Two dedicated pairs described purely by mean SNRs in dB (rho-override form).
Topology two_pair_topology_db(double rho11, double rho12, double rho21, double rho22,
                              double theta1_db, double theta2_db);

}  // namespace aloha

#endif  // ALOHA_TOPOLOGY_HPP_
