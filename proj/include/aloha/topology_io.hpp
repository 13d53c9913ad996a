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

#ifndef ALOHA_TOPOLOGY_IO_HPP_
#define ALOHA_TOPOLOGY_IO_HPP_

#include <filesystem>
#include <string>

#include <json.hpp>

#include "aloha/topology.hpp"

namespace aloha {

inline constexpr int kTopologySchemaVersion = 1;

nlohmann::json topology_to_json(const Topology& topo);

// Schema and invariant checks; errors name the offending field or entity id.
Topology topology_from_json(const nlohmann::json& doc);

Topology parse_topology(const std::string& text);

void save_topology(const Topology& topo, const std::filesystem::path& path);
Topology load_topology(const std::filesystem::path& path);

}  // namespace aloha

#endif  // ALOHA_TOPOLOGY_IO_HPP_
