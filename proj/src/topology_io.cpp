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

#include "aloha/topology_io.hpp"

#include <fstream>
#include <sstream>

#include "aloha/errors.hpp"

namespace aloha {
namespace {

using nlohmann::json;

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key)) {
    throw TopologyError(where + ": missing field '" + key + "'");
  }
  return obj.at(key);
}

double number(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number()) throw TopologyError(where + "." + key + ": expected a number");
  return v.get<double>();
}

int integer(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_number_integer()) throw TopologyError(where + "." + key + ": expected an integer");
  return v.get<int>();
}

}  // namespace

json topology_to_json(const Topology& topo) {
  json doc;
  doc["version"] = kTopologySchemaVersion;
  doc["noise_dbm"] = topo.noise_dbm;
  doc["alpha"] = topo.alpha;
  doc["transmitters"] = json::array();
  for (const auto& tx : topo.transmitters) {
    doc["transmitters"].push_back(
        {{"id", tx.id}, {"x_m", tx.position.x_m}, {"y_m", tx.position.y_m}, {"power_dbm", tx.power_dbm}});
  }
  doc["receivers"] = json::array();
  for (const auto& rx : topo.receivers) {
    doc["receivers"].push_back(
        {{"id", rx.id}, {"x_m", rx.position.x_m}, {"y_m", rx.position.y_m}, {"theta_db", rx.theta_db}});
  }
  doc["association"] = json::object();
  for (const auto& [tx, rx] : topo.association) doc["association"][std::to_string(tx)] = rx;
  if (topo.rho_db) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < topo.rho_db->rows(); ++i) {
      json row = json::array();
      for (Eigen::Index j = 0; j < topo.rho_db->cols(); ++j) row.push_back((*topo.rho_db)(i, j));
      rows.push_back(row);
    }
    doc["rho_db"] = rows;
  }
  return doc;
}

Topology topology_from_json(const json& doc) {
  if (!doc.is_object()) throw TopologyError("topology: document must be a JSON object");
  const int version = integer(doc, "version", "topology");
  if (version != kTopologySchemaVersion) {
    throw TopologyError("topology.version: unsupported schema version " + std::to_string(version));
  }
  Topology topo;
  topo.noise_dbm = number(doc, "noise_dbm", "topology");
  topo.alpha = number(doc, "alpha", "topology");

  const json& txs = require(doc, "transmitters", "topology");
  if (!txs.is_array()) throw TopologyError("topology.transmitters: expected an array");
  for (std::size_t i = 0; i < txs.size(); ++i) {
    const std::string where = "transmitters[" + std::to_string(i) + "]";
    topo.transmitters.push_back({integer(txs[i], "id", where),
                                 {number(txs[i], "x_m", where), number(txs[i], "y_m", where)},
                                 number(txs[i], "power_dbm", where)});
  }
  const json& rxs = require(doc, "receivers", "topology");
  if (!rxs.is_array()) throw TopologyError("topology.receivers: expected an array");
  for (std::size_t i = 0; i < rxs.size(); ++i) {
    const std::string where = "receivers[" + std::to_string(i) + "]";
    topo.receivers.push_back({integer(rxs[i], "id", where),
                              {number(rxs[i], "x_m", where), number(rxs[i], "y_m", where)},
                              number(rxs[i], "theta_db", where)});
  }

  const json& assoc = require(doc, "association", "topology");
  if (!assoc.is_object()) throw TopologyError("topology.association: expected an object");
  for (const auto& [key, value] : assoc.items()) {
    int tx_id = 0;
    try {
      std::size_t used = 0;
      tx_id = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw TopologyError("association: key '" + key + "' is not a transmitter id");
    }
    if (!value.is_number_integer()) {
      throw TopologyError("association." + key + ": expected a receiver id");
    }
    topo.association[tx_id] = value.get<int>();
  }
  for (const auto& tx : topo.transmitters) {
    if (!topo.association.contains(tx.id)) {
      throw TopologyError("association: missing entry for transmitter " + std::to_string(tx.id));
    }
  }

  if (doc.contains("rho_db")) {
    const json& rows = doc.at("rho_db");
    if (!rows.is_array() || rows.size() != topo.transmitters.size()) {
      throw TopologyError("rho_db: expected one row per transmitter");
    }
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(topo.receivers.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].is_array() || rows[i].size() != topo.receivers.size()) {
        throw TopologyError("rho_db[" + std::to_string(i) + "]: expected one entry per receiver");
      }
      for (std::size_t j = 0; j < rows[i].size(); ++j) {
        if (!rows[i][j].is_number()) {
          throw TopologyError("rho_db[" + std::to_string(i) + "][" + std::to_string(j) +
                              "]: expected a number");
        }
        m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j].get<double>();
      }
    }
    topo.rho_db = m;
  }
  validate(topo);
  return topo;
}

Topology parse_topology(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw TopologyError("topology: parse error at line " + std::to_string(line) + ", column " +
                        std::to_string(column) + ": " + e.what());
  }
  return topology_from_json(doc);
}

void save_topology(const Topology& topo, const std::filesystem::path& path) {
  validate(topo);
  std::ofstream out(path);
  if (!out) throw TopologyError("cannot open " + path.string() + " for writing");
  out << topology_to_json(topo).dump(2) << '\n';
  if (!out) throw TopologyError("failed writing " + path.string());
}

Topology load_topology(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw TopologyError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_topology(buffer.str());
}

}  // namespace aloha
